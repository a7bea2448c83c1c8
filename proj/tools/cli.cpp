#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qx/format.hpp"
#include "qx/io.hpp"
#include "qx/quasi_universality.hpp"
#include "qx/rng.hpp"
#include "qx/stabilizer_codes.hpp"
#include "qx/su_algebra.hpp"
#include "qx/vbs_code.hpp"

namespace qx::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch(code) {
  case ErrorCode::numerical_failure:
  case ErrorCode::degenerate_noise:
  case ErrorCode::not_logical:
  case ErrorCode::inconsistent_basis:
    return check_failed;
  default:
    return usage;
  }
}

int resolve_jobs(int flag) {
  if(flag > 0) return flag;
  if(const char *env = std::getenv("QX_JOBS"); env && *env) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if(*end != '\0' || v < 1) throw UsageError("QX_JOBS must be a positive integer");
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i in [0, count) on up to `jobs` threads; the first exception is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)> &task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), count);
  if(workers <= 1) {
    for(std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  for(std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for(std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch(...) {
          std::lock_guard lock(guard);
          if(!first) first = std::current_exception();
        }
      }
    });
  for(auto &t : pool) t.join();
  if(first) std::rethrow_exception(first);
}

struct Range {
  int lo = 0;
  int hi = -1;
};

Range parse_range(const std::string &text, const char *name) {
  Range r;
  auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if(colon == std::string::npos) {
      r.lo = r.hi = std::stoi(text, &used);
      if(used != text.size()) throw std::invalid_argument(text);
    } else {
      std::string a = text.substr(0, colon), b = text.substr(colon + 1);
      r.lo = std::stoi(a, &used);
      if(used != a.size()) throw std::invalid_argument(text);
      r.hi = std::stoi(b, &used);
      if(used != b.size()) throw std::invalid_argument(text);
    }
  } catch(const std::logic_error &) {
    throw UsageError(std::string("--") + name + " expects LO:HI or a single integer, got '" + text + "'");
  }
  return r;
}

// Writes `text` to `path` when given, otherwise to `out`.
void emit(const std::string &text, const std::string &path, std::ostream &out) {
  if(path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if(!file) fail(ErrorCode::io_error, "cannot open output file '" + path + "'");
  file << text;
  if(!file) fail(ErrorCode::io_error, "failed writing output file '" + path + "'");
}

// ---- algebra ----

struct AlgebraArgs {
  int d = 2;
  double tol = 1e-12;
};

int cmd_algebra(const AlgebraArgs &args, std::ostream &out) {
  if(args.d < 2) throw UsageError("--d must be at least 2");
  SuBasis basis(args.d);
  auto r = algebra_residuals(basis);
  const std::pair<const char *, double> rows[] = {
      {"hermitian", r.hermitian},         {"traceless", r.traceless},     {"orthonormality", r.orthonormality},
      {"commutator", r.commutator},       {"anticommutator", r.anticommutator}, {"casimir", r.casimir},
      {"f_antisymmetry", r.f_antisymmetry}, {"d_symmetry", r.d_symmetry}, {"jacobi", r.jacobi},
      {"fierz", r.fierz},                 {"max", r.max()}};
  out << "d = " << args.d << '\n';
  for(auto [name, value] : rows) out << name << " = " << fmt_num(value) << '\n';
  const bool pass = r.max() < args.tol;
  out << "status = " << (pass ? "pass" : "fail") << '\n';
  return pass ? ok : check_failed;
}

// ---- sweep ----

struct SweepArgs {
  std::string d = "2:3";
  std::string n = "3:8";
  std::string errors = "bond";
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "csv";
  int jobs = 0;
};

struct SweepRow {
  int d, n;
  double chi, eta, detect, corr, edge, epsilon, erasure;
};

SweepRow sweep_point(int d, int n, double p) {
  VbsCode code(d, n);
  auto residuals = closed_form_residuals(code, false);
  double edge = 0;
  const Matrix mixed = Matrix::Identity(d, d) / double(d);
  for(int alpha = 0; alpha < d; ++alpha)
    edge = std::max(edge, trace_distance(edge_state(code, alpha, n).iterated, mixed));
  return {d, n, code.chi(), eta(d, n), residuals.detect, residuals.corr, edge,
          correctability_epsilon(bond_error_gram(code, p)), erasure_bound(code).bound};
}

int cmd_sweep(const SweepArgs &args, std::ostream &out) {
  if(args.errors != "bond") throw UsageError("sweep supports only --errors bond");
  if(args.format != "csv" && args.format != "text") throw UsageError("--format must be csv or text");
  if(!(args.p >= 0 && args.p <= 1)) throw UsageError("--p must lie in [0, 1]");
  Range dr = parse_range(args.d, "d");
  Range nr = parse_range(args.n, "n");
  std::vector<std::pair<int, int>> grid;
  for(int d = dr.lo; d <= dr.hi; ++d)
    for(int n = nr.lo; n <= nr.hi; ++n) grid.emplace_back(d, n);
  for(auto [d, n] : grid)
    if(d < 2 || n < 1) throw UsageError("grid points need d >= 2 and N >= 1");

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), resolve_jobs(args.jobs),
               [&](std::size_t i) { rows[i] = sweep_point(grid[i].first, grid[i].second, args.p); });

  std::ostringstream text;
  if(args.format == "csv") {
    text << "d,N,chi,eta,max_detect_closedform_residual,max_corr_closedform_residual,edge_fixedpoint_distance,"
            "epsilon,erasure_bound\n";
    for(const auto &r : rows)
      text << r.d << ',' << r.n << ',' << fmt_num(r.chi) << ',' << fmt_num(r.eta) << ',' << fmt_num(r.detect) << ','
           << fmt_num(r.corr) << ',' << fmt_num(r.edge) << ',' << fmt_num(r.epsilon) << ',' << fmt_num(r.erasure)
           << '\n';
  } else {
    for(const auto &r : rows) {
      text << "[d=" << r.d << " N=" << r.n << "]\n"
           << "  chi = " << fmt_num(r.chi) << '\n'
           << "  eta = " << fmt_num(r.eta) << '\n'
           << "  max_detect_closedform_residual = " << fmt_num(r.detect) << '\n'
           << "  max_corr_closedform_residual = " << fmt_num(r.corr) << '\n'
           << "  edge_fixedpoint_distance = " << fmt_num(r.edge) << '\n'
           << "  epsilon = " << fmt_num(r.epsilon) << '\n'
           << "  erasure_bound = " << fmt_num(r.erasure) << '\n';
    }
  }
  emit(text.str(), args.output, out);
  return ok;
}

// ---- vbs ----

struct VbsArgs {
  int d = 2;
  int n = 4;
  double p = 0.5;
  int samples = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;
};

int cmd_vbs(const VbsArgs &args, std::ostream &out) {
  if(args.d < 2 || args.n < 1) throw UsageError("need --d >= 2 and --n >= 1");
  if(args.samples < 0) throw UsageError("--samples must be non-negative");
  VbsCode code(args.d, args.n);
  auto residuals = closed_form_residuals(code);
  double covariance = 0, leakage = 0;
  for(int s = 0; s < args.samples; ++s) {
    Rng rng(stable_hash(args.seed, static_cast<std::uint64_t>(s)));
    auto gate = covariant_gate(code, random_su_exp(code.basis(), rng));
    covariance = std::max(covariance, gate.covariance_residual);
    leakage = std::max(leakage, gate.leakage);
  }
  auto report = kl_decompose(bond_error_gram(code, args.p));
  const bool pass = residuals.max() < args.tol && covariance < args.tol;
  out << "d = " << args.d << '\n'
      << "N = " << args.n << '\n'
      << "site_dim = " << code.site_dim() << '\n'
      << "chi = " << fmt_num(code.chi()) << '\n'
      << "eta = " << fmt_num(eta(args.d, args.n)) << '\n'
      << "eta_bound = " << fmt_num(eta_bound(args.d, args.n)) << '\n'
      << "dense_dim = " << fmt_num(code.dense_dim()) << '\n'
      << "residuals:\n"
      << "  edge_state = " << fmt_num(residuals.edge) << '\n'
      << "  detection = " << fmt_num(residuals.detect) << '\n'
      << "  correlation = " << fmt_num(residuals.corr) << '\n'
      << "  site_correlators = " << fmt_num(residuals.site) << '\n'
      << "  sum_rule = " << fmt_num(residuals.sum_rule) << '\n'
      << "covariance:\n"
      << "  samples = " << args.samples << '\n'
      << "  max_residual = " << fmt_num(covariance) << '\n'
      << "  max_leakage = " << fmt_num(leakage) << '\n'
      << "bond_errors:\n"
      << "  p = " << fmt_num(args.p) << '\n'
      << "  epsilon = " << fmt_num(report.epsilon) << '\n'
      << "  dt_first_order = " << fmt_num(report.dt_first_order) << '\n'
      << "  dt_exact = " << fmt_num(report.dt_exact) << '\n'
      << "  environment_size = " << report.environment_size << '\n'
      << "erasure_bound = " << fmt_num(erasure_bound(code).bound) << '\n'
      << "status = " << (pass ? "pass" : "fail") << '\n';
  return pass ? ok : check_failed;
}

// ---- kl ----

struct KlArgs {
  std::string code;
  std::string errors;
  double p = -1;
  std::string mode = "normalized";
  double cutoff = 1e-12;
  std::string output;
};

int cmd_kl(const KlArgs &args, std::ostream &out) {
  KLOptions options;
  options.cutoff = args.cutoff;
  if(args.mode == "literal") options.mode = RecoveryMode::literal;
  else if(args.mode != "normalized") throw UsageError("--mode must be normalized or literal");

  nlohmann::ordered_json doc;
  doc["code"] = args.code;
  KLReport report;
  if(args.code.rfind("vbs:", 0) == 0) {
    int d = 0, n = 0;
    char tail = 0;
    if(std::sscanf(args.code.c_str(), "vbs:%d:%d%c", &d, &n, &tail) != 2 || d < 2 || n < 1)
      throw UsageError("expected --code vbs:D:N with D >= 2 and N >= 1");
    const std::string errors = args.errors.empty() ? "bond" : args.errors;
    if(errors != "bond") throw UsageError("vbs codes support only --errors bond");
    const double p = args.p < 0 ? 0.5 : args.p;
    if(p > 1) throw UsageError("--p must lie in [0, 1]");
    doc["errors"] = errors;
    doc["p"] = p;
    VbsCode code(d, n);
    if(code.dense_dim() < 0x1p53) doc["physical_dim"] = static_cast<long long>(code.dense_dim());
    else doc["physical_dim"] = code.dense_dim();
    report = kl_decompose(bond_error_gram(code, p), options);
  } else {
    std::optional<CodeIsometry> code;
    if(args.code == "five_one_three") code = five_qubit_code();
    else if(args.code == "four_two_two") code = four_two_two_code();
    else if(args.code.rfind("file:", 0) == 0) code.emplace(read_matrix_file(args.code.substr(5)));
    else throw UsageError("unknown code selector '" + args.code + "'");
    const std::string errors = args.errors.empty() ? "pauli1" : args.errors;
    if(errors != "pauli1") throw UsageError("stabilizer and file codes support only --errors pauli1");
    const double p = args.p < 0 ? 0.1 : args.p;
    if(p > 1) throw UsageError("--p must lie in [0, 1]");
    int qubits = 0;
    while((1 << qubits) < code->physical_dim()) ++qubits;
    if((1 << qubits) != code->physical_dim()) throw UsageError("pauli1 errors need a power-of-two physical dimension");
    doc["errors"] = errors;
    doc["p"] = p;
    doc["physical_dim"] = code->physical_dim();
    report = kl_decompose(*code, depolarizing_errors(qubits, p), options);
  }
  const auto fields = kl_report_json(report);
  for(auto &[key, value] : fields.items()) doc[key] = value;
  emit(doc.dump(2) + "\n", args.output, out);
  return ok;
}

// ---- simulate ----

struct SimulateArgs {
  int d = 2;
  int n = 8;
  int length = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<double> eta;
  double eps_max = 1.0;
  std::string trajectory;
  std::string output;
  int jobs = 0;
};

int cmd_simulate(const SimulateArgs &args, std::ostream &out) {
  if(args.d < 2 || args.n < 1) throw UsageError("need --d >= 2 and --n >= 1");
  if(args.length < 1) throw UsageError("--length must be at least 1");
  if(args.trials < 1) throw UsageError("--trials must be at least 1");
  if(!(args.eps_max >= 0)) throw UsageError("--eps-max must be non-negative");
  SimOptions options;
  options.eta = args.eta;
  options.eps_max = args.eps_max;

  const auto count = static_cast<std::size_t>(args.trials);
  std::vector<SimTrajectory> runs(count);
  parallel_for(count, resolve_jobs(args.jobs), [&](std::size_t t) {
    runs[t] = simulate_computation(args.d, args.n, args.length, stable_hash(args.seed, t), options);
    if(t != 0) {
      runs[t].gates.clear();
      runs[t].exponents.clear();
    }
  });

  std::ostringstream csv;
  csv << "trial,seed,final_distance,final_envelope\n";
  double mean_d = 0, mean_e = 0, max_d = 0, max_e = 0;
  bool within = true;
  for(std::size_t t = 0; t < count; ++t) {
    const auto &r = runs[t];
    csv << t << ',' << r.seed << ',' << fmt_num(r.final_distance()) << ',' << fmt_num(r.final_envelope()) << '\n';
    mean_d += r.final_distance() / double(count);
    mean_e += r.final_envelope() / double(count);
    max_d = std::max(max_d, r.final_distance());
    max_e = std::max(max_e, r.final_envelope());
    within = within && r.final_distance() <= r.final_envelope() + 1e-10;
  }
  csv << "mean,," << fmt_num(mean_d) << ',' << fmt_num(mean_e) << '\n';
  csv << "max,," << fmt_num(max_d) << ',' << fmt_num(max_e) << '\n';
  emit(csv.str(), args.output, out);
  if(!args.trajectory.empty()) {
    std::ostringstream traj;
    write_trajectory_csv(traj, runs.front());
    emit(traj.str(), args.trajectory, out);
  }
  return within ? ok : check_failed;
}

// ---- gates ----

struct GatesArgs {
  std::optional<double> eta;
  std::optional<int> d;
  std::optional<int> n;
  double target = 0;
  double synthesis_error = 0;
};

int cmd_gates(const GatesArgs &args, std::ostream &out) {
  double accuracy = 0;
  if(args.eta) {
    if(args.d || args.n) throw UsageError("give either --eta or --d/--n, not both");
    accuracy = *args.eta;
  } else {
    if(!args.d || !args.n) throw UsageError("give --eta or both --d and --n");
    if(*args.d < 2 || *args.n < 1) throw UsageError("need --d >= 2 and --n >= 1");
    accuracy = std::abs(eta(*args.d, *args.n));
  }
  if(!(accuracy > 0)) throw UsageError("accuracy must be positive");
  if(args.synthesis_error < 0) throw UsageError("--synthesis-error must be non-negative");
  if(args.target < args.synthesis_error) throw UsageError("--target is below the synthesis error");
  out << max_gate_count(args.target, accuracy, args.synthesis_error) << '\n';
  return ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Quasi-exact quantum error correction toolkit", "qx"};
  app.require_subcommand(1);

  AlgebraArgs algebra;
  auto *c_algebra = app.add_subcommand("algebra", "Check the su(d) generator invariants");
  c_algebra->add_option("--d", algebra.d, "Fundamental dimension")->required();
  c_algebra->add_option("--tol", algebra.tol, "Pass threshold")->capture_default_str();

  SweepArgs sweep;
  auto *c_sweep = app.add_subcommand("sweep", "Tabulate VBS code quantities over a (d, N) grid");
  c_sweep->add_option("--d", sweep.d, "d range LO:HI")->capture_default_str();
  c_sweep->add_option("--n", sweep.n, "N range LO:HI")->capture_default_str();
  c_sweep->add_option("--errors", sweep.errors, "Error model (bond)")->capture_default_str();
  c_sweep->add_option("--p", sweep.p, "Bond-error probability")->capture_default_str();
  c_sweep->add_option("--seed", sweep.seed, "Base seed (columns are currently deterministic)")->capture_default_str();
  c_sweep->add_option("--output,-o", sweep.output, "Output file (default stdout)");
  c_sweep->add_option("--format", sweep.format, "csv or text")->capture_default_str();
  c_sweep->add_option("--jobs,-j", sweep.jobs, "Worker threads (default QX_JOBS or all cores)");

  VbsArgs vbs;
  auto *c_vbs = app.add_subcommand("vbs", "Report on a single VBS code");
  c_vbs->add_option("--d", vbs.d, "Fundamental dimension")->required();
  c_vbs->add_option("--n", vbs.n, "Number of bulk sites")->required();
  c_vbs->add_option("--p", vbs.p, "Bond-error probability")->capture_default_str();
  c_vbs->add_option("--samples", vbs.samples, "Random group elements for the covariance check")->capture_default_str();
  c_vbs->add_option("--seed", vbs.seed, "Base seed")->capture_default_str();
  c_vbs->add_option("--tol", vbs.tol, "Pass threshold")->capture_default_str();

  KlArgs kl;
  auto *c_kl = app.add_subcommand("kl", "Knill-Laflamme analysis and recovery error");
  c_kl->add_option("--code", kl.code, "vbs:D:N, five_one_three, four_two_two or file:PATH")->required();
  c_kl->add_option("--errors", kl.errors, "bond (vbs) or pauli1 (qubit codes)");
  c_kl->add_option("--p", kl.p, "Error probability (default 0.5 bond, 0.1 pauli1)");
  c_kl->add_option("--mode", kl.mode, "Recovery normalization: normalized or literal")->capture_default_str();
  c_kl->add_option("--cutoff", kl.cutoff, "Relative eigenvalue cutoff")->capture_default_str();
  c_kl->add_option("--output,-o", kl.output, "Output file (default stdout)");

  SimulateArgs sim;
  auto *c_sim = app.add_subcommand("simulate", "Monte-Carlo logical-level gate sequences");
  c_sim->add_option("--d", sim.d, "Fundamental dimension")->capture_default_str();
  c_sim->add_option("--n", sim.n, "Number of bulk sites (sets eta)")->capture_default_str();
  c_sim->add_option("--length", sim.length, "Gates per trial")->capture_default_str();
  c_sim->add_option("--trials", sim.trials, "Number of trials")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  c_sim->add_option("--eta", sim.eta, "Override eta(d, N)");
  c_sim->add_option("--eps-max", sim.eps_max, "Error exponents are uniform on [-eps-max, eps-max]")->capture_default_str();
  c_sim->add_option("--trajectory", sim.trajectory, "Write trial 0's trajectory CSV here");
  c_sim->add_option("--output,-o", sim.output, "Output file (default stdout)");
  c_sim->add_option("--jobs,-j", sim.jobs, "Worker threads (default QX_JOBS or all cores)");

  GatesArgs gates;
  auto *c_gates = app.add_subcommand("gates", "Maximum gate count for an accuracy budget");
  c_gates->add_option("--eta", gates.eta, "Per-gate accuracy");
  c_gates->add_option("--d", gates.d, "Take eta from a VBS code: dimension");
  c_gates->add_option("--n", gates.n, "Take eta from a VBS code: bulk sites");
  c_gates->add_option("--target", gates.target, "Target accuracy")->required();
  c_gates->add_option("--synthesis-error", gates.synthesis_error, "Synthesis error")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch(const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if(*c_algebra) return cmd_algebra(algebra, out);
    if(*c_sweep) return cmd_sweep(sweep, out);
    if(*c_vbs) return cmd_vbs(vbs, out);
    if(*c_kl) return cmd_kl(kl, out);
    if(*c_sim) return cmd_simulate(sim, out);
    if(*c_gates) return cmd_gates(gates, out);
  } catch(const UsageError &e) {
    err << "qx: " << e.what() << '\n';
    return usage;
  } catch(const Error &e) {
    err << "qx: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return usage;
}

} // namespace qx::cli
