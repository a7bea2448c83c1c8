#include "qx/quasi_universality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qx/format.hpp"
#include "qx/rng.hpp"
#include "qx/su_algebra.hpp"
#include "qx/vbs_code.hpp"

namespace qx {

namespace {

void require_special_unitary(const Matrix &u, int d) {
  if(u.rows() != d || u.cols() != d) fail(ErrorCode::dimension_mismatch, "gate has the wrong dimension");
  if(!is_unitary(u, 1e-10) || std::abs(determinant(u) - cplx(1)) > 1e-8)
    fail(ErrorCode::invalid_unitary, "gate is not special unitary");
}

} // namespace

double unitary_distance(const Matrix &u, const Matrix &v) {
  if(u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    fail(ErrorCode::dimension_mismatch, "unitary_distance: operands must be square and equal in size");
  if(!is_unitary(u, 1e-10) || !is_unitary(v, 1e-10)) fail(ErrorCode::invalid_unitary, "unitary_distance: operand is not unitary");
  if(u.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> solver(u.adjoint() * v, false);
  std::vector<double> phases;
  for(Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) phases.push_back(std::arg(solver.eigenvalues()(k)));
  std::sort(phases.begin(), phases.end());
  // The optimal phase centers the shortest arc that holds every eigenphase.
  double gap = 2 * std::numbers::pi - (phases.back() - phases.front());
  for(std::size_t k = 1; k < phases.size(); ++k) gap = std::max(gap, phases[k] - phases[k - 1]);
  double arc = std::max(0.0, 2 * std::numbers::pi - gap);
  return 2 * std::sin(arc / 4);
}

GateCellTable::GateCellTable(int d, double eta, std::vector<Matrix> representatives)
    : d_(d), eta_(eta), reps_(std::move(representatives)) {
  if(d < 1) fail(ErrorCode::invalid_dimension, "GateCellTable: d must be positive");
  if(!(eta > 0)) fail(ErrorCode::invalid_argument, "GateCellTable: eta must be positive");
  for(const auto &r : reps_) require_special_unitary(r, d);
  for(std::size_t i = 0; i < reps_.size(); ++i)
    for(std::size_t j = i + 1; j < reps_.size(); ++j)
      if(unitary_distance(reps_[i], reps_[j]) <= eta)
        fail(ErrorCode::invalid_argument, "GateCellTable: representatives " + std::to_string(i) + " and " +
                                              std::to_string(j) + " are within eta");
}

std::size_t cell_assign(const GateCellTable &table, const Matrix &u) {
  if(table.size() == 0) fail(ErrorCode::invalid_argument, "cell_assign: empty table");
  std::size_t best = 0;
  double best_dist = unitary_distance(table.representatives()[0], u);
  for(std::size_t k = 1; k < table.size(); ++k) {
    double dist = unitary_distance(table.representatives()[k], u);
    if(dist < best_dist - 1e-12) {
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

GateCellTable build_gate_cell_table(int d, double eta, int samples, std::uint64_t seed) {
  if(samples < 0) fail(ErrorCode::invalid_argument, "build_gate_cell_table: negative sample count");
  if(!(eta > 0)) fail(ErrorCode::invalid_argument, "build_gate_cell_table: eta must be positive");
  Rng rng(seed);
  std::vector<Matrix> reps;
  for(int s = 0; s < samples; ++s) {
    Matrix u = haar_su(d, rng);
    bool far = std::all_of(reps.begin(), reps.end(), [&](const Matrix &r) { return unitary_distance(r, u) > eta; });
    if(far) reps.push_back(std::move(u));
  }
  return GateCellTable(d, eta, std::move(reps));
}

long max_gate_count(double varpi, double eta, double varpi0) {
  if(!(eta > 0)) fail(ErrorCode::invalid_argument, "max_gate_count: eta must be positive");
  if(varpi0 < 0) fail(ErrorCode::invalid_argument, "max_gate_count: synthesis error must be non-negative");
  if(varpi < varpi0) fail(ErrorCode::invalid_argument, "max_gate_count: target accuracy is below the synthesis error");
  const double ratio = (varpi - varpi0) / eta;
  double whole = std::floor(ratio);
  // 0.3 / 0.1 lands just under 3 in binary; round such near-integers up.
  if(whole + 1 - ratio <= 1e-12 * std::max(1.0, ratio)) whole += 1;
  return static_cast<long>(whole);
}

double compose_error_bound(std::span<const double> gate_distances) {
  double total = 0;
  for(double x : gate_distances) {
    if(!(x >= 0)) fail(ErrorCode::invalid_argument, "compose_error_bound: distances must be non-negative");
    total += x;
  }
  return total;
}

SimTrajectory simulate_computation(int d, int n, int length, std::uint64_t seed, const SimOptions &options) {
  if(length < 1) fail(ErrorCode::invalid_argument, "simulate_computation: L must be at least 1");
  if(!options.gates.empty() && static_cast<int>(options.gates.size()) != length)
    fail(ErrorCode::invalid_argument, "simulate_computation: explicit gate list must have length L");
  if(!(options.eps_max >= 0)) fail(ErrorCode::invalid_argument, "simulate_computation: eps_max must be non-negative");
  const SuBasis basis(d >= 2 ? d : 2);
  if(d < 2) fail(ErrorCode::invalid_dimension, "simulate_computation: d must be at least 2");

  SimTrajectory traj;
  traj.seed = seed;
  traj.length = length;
  traj.eta = options.eta ? *options.eta : eta(d, n);

  Rng gate_rng(stable_hash(seed, 0));
  Rng error_rng(stable_hash(seed, 1));
  Matrix ideal = Matrix::Identity(d, d);
  Matrix noisy = ideal;
  double envelope = 0;
  for(int step = 0; step < length; ++step) {
    Matrix u;
    if(options.gates.empty()) u = haar_su(d, gate_rng);
    else {
      u = options.gates[static_cast<std::size_t>(step)];
      if(u.rows() != d || u.cols() != d) fail(ErrorCode::dimension_mismatch, "simulate_computation: gate dimension");
      if(!is_unitary(u, 1e-10)) fail(ErrorCode::invalid_unitary, "simulate_computation: gate is not unitary");
    }
    RealVector eps(basis.size());
    Matrix h = Matrix::Zero(d, d);
    for(int k = 0; k < basis.size(); ++k) {
      eps(k) = error_rng.uniform(-options.eps_max, options.eps_max);
      h += eps(k) * basis.generator(k);
    }
    Matrix e = expi_hermitian(h, traj.eta);
    ideal = u * ideal;
    noisy = e * (u * noisy);
    envelope += unitary_distance(e, Matrix::Identity(d, d));
    traj.distances.push_back(unitary_distance(noisy, ideal));
    traj.envelope.push_back(envelope);
    traj.gates.push_back(std::move(u));
    traj.exponents.push_back(std::move(eps));
  }
  return traj;
}

void write_trajectory_csv(std::ostream &out, const SimTrajectory &trajectory) {
  out << "step,ideal_vs_noisy_distance,envelope\n";
  for(std::size_t k = 0; k < trajectory.distances.size(); ++k)
    out << (k + 1) << ',' << fmt_num(trajectory.distances[k]) << ',' << fmt_num(trajectory.envelope[k]) << '\n';
}

} // namespace qx
