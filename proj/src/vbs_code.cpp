#include "qx/vbs_code.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace qx {

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

void check_logical_index(const VbsCode &code, int alpha) {
  if(alpha < 0 || alpha >= code.d()) fail(ErrorCode::index_out_of_range, "logical index out of range");
}
void check_generator(const VbsCode &code, int a) {
  if(a < 0 || a >= code.site_dim()) fail(ErrorCode::index_out_of_range, "generator index out of range");
}

struct SiteOps {
  Matrix ket;
  Matrix bra;
  bool has_ket = false;
  bool has_bra = false;
};

} // namespace

VbsCode::VbsCode(int d, int n) : d_(d), n_(n), basis_(d >= 2 ? d : 2) {
  if(d < 2) fail(ErrorCode::invalid_dimension, "VbsCode: d must be at least 2");
  if(n < 1) fail(ErrorCode::invalid_dimension, "VbsCode: N must be at least 1");
  const double scale = std::sqrt(2.0 * d / (d * d - 1.0));
  for(const auto &t : basis_.generators()) kraus_.push_back(scale * t);

  Matrix tp = Matrix::Zero(d, d);
  Matrix unital = Matrix::Zero(d, d);
  for(const auto &a : kraus_) {
    tp += a.adjoint() * a;
    unital += a * a.adjoint();
    // Heisenberg and Schrodinger pictures coincide only for Hermitian Kraus operators.
    if(!is_hermitian(a, 1e-14)) fail(ErrorCode::numerical_failure, "VbsCode: Kraus operator is not Hermitian");
  }
  if((tp - identity(d)).cwiseAbs().maxCoeff() > 1e-12 || (unital - identity(d)).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorCode::numerical_failure, "VbsCode: transfer channel is not unital and trace preserving");

  Matrix super = Matrix::Zero(d * d, d * d);
  for(const auto &a : kraus_) super += kron(a.transpose(), a.adjoint());
  powers_.reserve(static_cast<std::size_t>(n) + 1);
  powers_.push_back(identity(d * d));
  for(int k = 1; k <= n; ++k) powers_.push_back(super * powers_.back());
}

double VbsCode::dense_dim() const { return std::pow(double(site_dim()), n_) * d_; }

std::vector<int> VbsCode::site_dims() const {
  std::vector<int> dims(static_cast<std::size_t>(n_), site_dim());
  dims.push_back(d_);
  return dims;
}

Matrix VbsCode::heisenberg_power(const Matrix &x, int k) const {
  if(k < 0) fail(ErrorCode::invalid_argument, "heisenberg_power: negative exponent");
  Matrix out = x;
  while(k > 0) {
    int step = std::min(k, n_);
    Eigen::Map<Vector> flat(out.data(), out.size());
    Vector next = powers_[static_cast<std::size_t>(step)] * flat;
    out = Eigen::Map<Matrix>(next.data(), d_, d_);
    k -= step;
  }
  return out;
}

Matrix VbsCode::contract(std::span<const BondInsertion> insertions, std::span<const SiteOperator> sites) const {
  std::vector<std::vector<const BondInsertion *>> by_bond(static_cast<std::size_t>(n_) + 1);
  for(const auto &ins : insertions) {
    if(ins.bond < 0 || ins.bond > n_) fail(ErrorCode::index_out_of_range, "bond index out of range");
    if(ins.op.rows() != d_ || ins.op.cols() != d_) fail(ErrorCode::dimension_mismatch, "bond operator must be d x d");
    by_bond[static_cast<std::size_t>(ins.bond)].push_back(&ins);
  }
  const int q = site_dim();
  std::map<int, SiteOps> site_ops;
  for(const auto &s : sites) {
    if(s.site < 1 || s.site > n_) fail(ErrorCode::index_out_of_range, "site index out of range");
    if(s.op.rows() != q || s.op.cols() != q) fail(ErrorCode::dimension_mismatch, "site operator must be (d^2-1) x (d^2-1)");
    auto &slot = site_ops[s.site];
    if(s.side == Side::ket) {
      slot.ket = slot.has_ket ? Matrix(s.op * slot.ket) : s.op;
      slot.has_ket = true;
    } else {
      slot.bra = slot.has_bra ? Matrix(s.op * slot.bra) : s.op;
      slot.has_bra = true;
    }
  }

  auto transformed = [&](const Matrix &o) {
    std::vector<Matrix> out(static_cast<std::size_t>(q), Matrix::Zero(d_, d_));
    for(int j = 0; j < q; ++j)
      for(int i = 0; i < q; ++i)
        if(o(j, i) != cplx(0)) out[static_cast<std::size_t>(j)] += o(j, i) * kraus_[static_cast<std::size_t>(i)];
    return out;
  };

  Matrix x = identity(d_);
  int pos = n_;
  for(;;) {
    const auto &here = by_bond[static_cast<std::size_t>(pos)];
    for(auto it = here.rbegin(); it != here.rend(); ++it) {
      if((*it)->side == Side::ket) x = x * (*it)->op;
      else x = (*it)->op.adjoint() * x;
    }
    if(pos == 0) break;
    auto found = site_ops.find(pos);
    if(found != site_ops.end()) {
      auto ket = found->second.has_ket ? transformed(found->second.ket) : kraus_;
      auto bra = found->second.has_bra ? transformed(found->second.bra) : kraus_;
      Matrix next = Matrix::Zero(d_, d_);
      for(int j = 0; j < q; ++j) next += bra[static_cast<std::size_t>(j)].adjoint() * x * ket[static_cast<std::size_t>(j)];
      x = std::move(next);
      --pos;
      continue;
    }
    int k = 0;
    while(pos > 0 && !site_ops.count(pos)) {
      ++k;
      --pos;
      if(!by_bond[static_cast<std::size_t>(pos)].empty()) break;
    }
    x = heisenberg_power(x, k);
  }
  return x;
}

void VbsCode::require_dense() const {
  if(!fits_dense())
    fail(ErrorCode::dense_cap_exceeded, "dense VBS state would need " + std::to_string(dense_dim()) +
                                            " amplitudes; use transfer contraction instead");
}

Vector VbsCode::encode_dense(const Vector &alpha, std::span<const BondInsertion> insertions) const {
  require_dense();
  if(alpha.size() != d_) fail(ErrorCode::dimension_mismatch, "encode_dense: logical vector must have length d");
  std::vector<std::vector<const Matrix *>> by_bond(static_cast<std::size_t>(n_) + 1);
  for(const auto &ins : insertions) {
    if(ins.side != Side::ket) fail(ErrorCode::invalid_argument, "encode_dense: only ket-side insertions apply to a state");
    if(ins.bond < 0 || ins.bond > n_) fail(ErrorCode::index_out_of_range, "bond index out of range");
    if(ins.op.rows() != d_ || ins.op.cols() != d_) fail(ErrorCode::dimension_mismatch, "bond operator must be d x d");
    by_bond[static_cast<std::size_t>(ins.bond)].push_back(&ins.op);
  }
  const int q = site_dim();
  Vector state = alpha;
  long count = 1;
  auto insert = [&](int bond) {
    for(const Matrix *op : by_bond[static_cast<std::size_t>(bond)]) {
      Eigen::Map<Matrix> blocks(state.data(), d_, count);
      blocks = (*op) * blocks;
    }
  };
  insert(0);
  for(int s = 1; s <= n_; ++s) {
    Vector next(count * q * d_);
    Eigen::Map<const Matrix> prev(state.data(), d_, count);
    for(int i = 0; i < q; ++i) {
      Matrix img = kraus_[static_cast<std::size_t>(i)] * prev;
      for(long p = 0; p < count; ++p) next.segment((p * q + i) * d_, d_) = img.col(p);
    }
    state = std::move(next);
    count *= q;
    insert(s);
  }
  return state;
}

Matrix VbsCode::dense_images(std::span<const BondInsertion> insertions) const {
  require_dense();
  Matrix v(static_cast<Eigen::Index>(dense_dim()), d_);
  for(int a = 0; a < d_; ++a) v.col(a) = encode_dense(Vector::Unit(d_, a), insertions);
  return v;
}

CodeIsometry VbsCode::dense_isometry() const { return CodeIsometry(dense_images()); }

EdgeState edge_state(const VbsCode &code, int alpha, int n) {
  check_logical_index(code, alpha);
  if(n < 0 || n > code.n()) fail(ErrorCode::index_out_of_range, "edge_state: n must lie in [0, N]");
  const int d = code.d();
  Matrix rho = Matrix::Zero(d, d);
  rho(alpha, alpha) = 1;
  auto ch = code.channel();
  for(int k = 0; k < n; ++k) rho = apply_channel(ch, rho);
  Matrix closed = identity(d) / double(d);
  const double chin = std::pow(code.chi(), n);
  for(const auto &t : code.basis().generators()) closed += 2.0 * chin * t(alpha, alpha) * t;
  return {rho, closed};
}

Matrix bulk_state(const VbsCode &code, int alpha, int n) {
  check_logical_index(code, alpha);
  if(n < 1 || n > code.n()) fail(ErrorCode::index_out_of_range, "bulk_state: n must lie in [1, N]");
  const int d = code.d();
  Matrix sigma = Matrix::Zero(d, d);
  sigma(alpha, alpha) = 1;
  auto ch = code.channel();
  for(int k = 0; k < n - 1; ++k) sigma = apply_channel(ch, sigma);
  const auto &a = code.kraus();
  const int q = code.site_dim();
  Matrix rho(q, q);
  for(int i = 0; i < q; ++i)
    for(int j = 0; j < q; ++j)
      rho(i, j) = (sigma * a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(i)]).trace();
  return rho;
}

OverlapValue detection_overlap(const VbsCode &code, int alpha, int beta, int a, int bond) {
  check_logical_index(code, alpha);
  check_logical_index(code, beta);
  check_generator(code, a);
  if(bond < 0 || bond > code.n()) fail(ErrorCode::index_out_of_range, "detection_overlap: bond must lie in [0, N]");
  const Matrix &t = code.basis().generator(a);
  const BondInsertion ins[] = {{bond, t}};
  return {code.contract(ins)(alpha, beta), std::pow(code.chi(), bond) * t(alpha, beta)};
}

OverlapValue correlation(const VbsCode &code, int alpha, int beta, int a, int b, int m, int n) {
  check_logical_index(code, alpha);
  check_logical_index(code, beta);
  check_generator(code, a);
  check_generator(code, b);
  if(m < 0 || n > code.n() || m >= n) fail(ErrorCode::index_out_of_range, "correlation: need 0 <= m < n <= N");
  const auto &basis = code.basis();
  const BondInsertion ins[] = {{m, basis.generator(a)}, {n, basis.generator(b)}};
  const double chi = code.chi();
  const int d = code.d();
  cplx closed = (a == b && alpha == beta) ? std::pow(chi, n - m) / (2.0 * d) : 0.0;
  for(int c = 0; c < basis.size(); ++c)
    closed += std::pow(chi, n) * basis.h(b, a, c) * basis.generator(c)(alpha, beta) / 2.0;
  return {code.contract(ins)(alpha, beta), closed};
}

namespace {

// <T_n^a> through t^a at bond n-1 minus t^a at bond n; `tail` is appended after
// the site-derived insertion on every term.
cplx expanded(const VbsCode &code, int alpha, int beta, const Matrix &t, int n, std::span<const BondInsertion> tail) {
  cplx total = 0;
  for(int shift = 0; shift < 2; ++shift) {
    std::vector<BondInsertion> ins{{n - 1 + shift, t}};
    ins.insert(ins.end(), tail.begin(), tail.end());
    cplx v = code.contract(ins)(alpha, beta);
    total += shift == 0 ? v : -v;
  }
  return total;
}

} // namespace

double SiteOverlaps::max_residual() const {
  double r = 0;
  for(auto [x, y] : {std::pair{single, single_closed}, {single_site, single_closed}, {with_edge, with_edge_closed},
                     {with_edge_site, with_edge_closed}, {pair, pair_closed}, {pair_site, pair_closed}})
    r = std::max(r, std::abs(x - y));
  return r;
}

SiteOverlaps site_operator_overlaps(const VbsCode &code, int alpha, int beta, int a, int b, int m, int n) {
  check_logical_index(code, alpha);
  check_logical_index(code, beta);
  check_generator(code, a);
  check_generator(code, b);
  if(m < 1 || n > code.n() || m >= n) fail(ErrorCode::index_out_of_range, "site_operator_overlaps: need 1 <= m < n <= N");
  const auto &basis = code.basis();
  const Matrix &ta = basis.generator(a);
  const Matrix &tb = basis.generator(b);
  const int d = code.d();
  const int big_n = code.n();
  const double chi = code.chi();
  const double q = d * d - 1.0;
  const bool delta = a == b && alpha == beta;

  SiteOverlaps out;
  out.single = expanded(code, alpha, beta, ta, n, {});
  const BondInsertion edge[] = {{big_n, tb}};
  out.with_edge = expanded(code, alpha, beta, ta, n, edge);
  // T_m^a T_n^b: T_m's insertions act first when the two share bond m = n-1.
  out.pair = 0;
  for(int sm = 0; sm < 2; ++sm)
    for(int sn = 0; sn < 2; ++sn) {
      const BondInsertion ins[] = {{m - 1 + sm, ta}, {n - 1 + sn, tb}};
      cplx v = code.contract(ins)(alpha, beta);
      out.pair += (sm + sn) % 2 ? -v : v;
    }

  const Matrix adj_a = adjoint_generator(basis, a);
  const Matrix adj_b = adjoint_generator(basis, b);
  const SiteOperator on_n[] = {{n, adj_a}};
  out.single_site = code.contract({}, on_n)(alpha, beta);
  out.with_edge_site = code.contract(edge, on_n)(alpha, beta);
  const SiteOperator on_mn[] = {{m, adj_a}, {n, adj_b}};
  out.pair_site = code.contract({}, on_mn)(alpha, beta);

  out.single_closed = d * d * std::pow(chi, n - 1) / q * ta(alpha, beta);
  out.with_edge_closed = delta ? -d * std::pow(chi, big_n - n) / (2.0 * q) : 0.0;
  out.pair_closed = delta ? -std::pow(d, 3) * std::pow(chi, n - m - 1) / (2.0 * q * q) : 0.0;
  return out;
}

double sum_rule_check(const VbsCode &code, int a, int alpha, int beta) {
  check_logical_index(code, alpha);
  check_logical_index(code, beta);
  check_generator(code, a);
  const Matrix &t = code.basis().generator(a);
  const BondInsertion edge[] = {{code.n(), t}};
  cplx total = code.contract(edge)(alpha, beta);
  for(int n = 1; n <= code.n(); ++n) total += expanded(code, alpha, beta, t, n, {});
  return std::abs(t(alpha, beta) - total);
}

double eta(int d, int n) {
  if(d < 2) fail(ErrorCode::invalid_dimension, "eta: d must be at least 2");
  if(n < 1) fail(ErrorCode::invalid_dimension, "eta: N must be at least 1");
  const double chi = -1.0 / (double(d) * d - 1.0);
  return chi / n * (1.0 - std::pow(chi, n)) / (1.0 - chi);
}

double eta_bound(int d, int n) {
  if(d < 2 || n < 1) fail(ErrorCode::invalid_dimension, "eta_bound: need d >= 2 and N >= 1");
  const double abs_chi = 1.0 / (double(d) * d - 1.0);
  return abs_chi / (n * (1.0 - abs_chi));
}

EffectiveNoise effective_noise_channel(const VbsCode &code, std::span<const double> eps, std::span<const int> bonds) {
  const auto &basis = code.basis();
  if(static_cast<int>(eps.size()) != basis.size())
    fail(ErrorCode::dimension_mismatch, "effective_noise_channel: need one coefficient per generator");
  std::vector<int> used(bonds.begin(), bonds.end());
  if(bonds.empty())
    for(int n = 1; n <= code.n(); ++n) used.push_back(n);
  const int d = code.d();
  Matrix h = Matrix::Zero(d, d);
  for(int k = 0; k < basis.size(); ++k) h += eps[static_cast<std::size_t>(k)] * basis.generator(k);

  std::vector<Matrix> kraus;
  double mean = 0;
  const double weight = 1.0 / std::sqrt(double(used.size()));
  for(int n : used) {
    if(n < 0 || n > code.n()) fail(ErrorCode::index_out_of_range, "effective_noise_channel: bond out of range");
    const double s = std::pow(code.chi(), n);
    mean += s;
    kraus.push_back(weight * expi_hermitian(h, s));
  }
  if(used.empty()) fail(ErrorCode::invalid_argument, "effective_noise_channel: empty bond list");
  mean /= double(used.size());
  KrausChannel mixture(d, d, std::move(kraus));
  Matrix u = expi_hermitian(h, mean);
  double disc = trace_distance(choi_matrix(mixture), choi_matrix(KrausChannel::unitary(u)));
  return {std::move(mixture), std::move(u), disc};
}

namespace {

CovariantGate gate_factors(const VbsCode &code, const Matrix &g) {
  if(g.rows() != code.d() || g.cols() != code.d()) fail(ErrorCode::dimension_mismatch, "covariant_gate: g must be d x d");
  if(!is_unitary(g, 1e-10)) fail(ErrorCode::invalid_unitary, "covariant_gate: g is not unitary");
  CovariantGate out;
  Matrix r = adjoint_group_element(code.basis(), g).cast<cplx>();
  out.physical_factors.assign(static_cast<std::size_t>(code.n()), r);
  out.physical_factors.push_back(g);
  return out;
}

void finish_gate(CovariantGate &out, const Matrix &g) {
  Matrix overlap = g.adjoint() * out.logical;
  out.covariance_residual = 0;
  for(Eigen::Index a = 0; a < overlap.rows(); ++a)
    out.covariance_residual = std::max(out.covariance_residual, 1.0 - std::abs(overlap(a, a)));
}

} // namespace

CovariantGate covariant_gate(const VbsCode &code, const Matrix &g) {
  CovariantGate out = gate_factors(code, g);
  std::vector<SiteOperator> sites;
  for(int n = 1; n <= code.n(); ++n) sites.push_back({n, out.physical_factors[static_cast<std::size_t>(n - 1)]});
  const BondInsertion edge[] = {{code.n(), g}};
  out.logical = code.contract(edge, sites);
  // || U V - V L ||^2 = lambda_max(1 - L† L) because U is unitary and V isometric.
  double top = hermitian_eigen(identity(code.d()) - out.logical.adjoint() * out.logical).values.maxCoeff();
  out.leakage = std::sqrt(std::max(0.0, top));
  finish_gate(out, g);
  return out;
}

CovariantGate covariant_gate_dense(const VbsCode &code, const Matrix &g) {
  CovariantGate out = gate_factors(code, g);
  Matrix v = code.dense_images();
  auto dims = code.site_dims();
  Matrix uv = apply_product(v, dims, out.physical_factors);
  out.logical = v.adjoint() * uv;
  out.leakage = operator_norm(uv - v * out.logical);
  finish_gate(out, g);
  return out;
}

ErasureBound erasure_bound(const VbsCode &code) {
  double range = 0;
  for(int a = 0; a < code.site_dim(); ++a) {
    auto values = hermitian_eigen(adjoint_generator(code.basis(), a)).values;
    range = std::max(range, values.maxCoeff() - values.minCoeff());
  }
  return {range, 1.0 / (code.n() * range)};
}

std::vector<BondInsertion> bond_errors(const VbsCode &code, double p) {
  if(!(p >= 0 && p <= 1)) fail(ErrorCode::invalid_argument, "bond error probability must lie in [0, 1]");
  std::vector<BondInsertion> out;
  out.push_back({0, std::sqrt(1 - p) * identity(code.d())});
  const double w = std::sqrt(p / code.n());
  for(int n = 1; n <= code.n(); ++n)
    for(const auto &a : code.kraus()) out.push_back({n, w * a});
  return out;
}

ErrorGram bond_error_gram(const VbsCode &code, double p) {
  auto errors = bond_errors(code, p);
  const int count = static_cast<int>(errors.size());
  ErrorGram gram(count, code.d());
  for(int i = 0; i < count; ++i)
    for(int j = i; j < count; ++j) {
      BondInsertion bra = errors[static_cast<std::size_t>(i)];
      bra.side = Side::bra;
      const BondInsertion pair[] = {bra, errors[static_cast<std::size_t>(j)]};
      gram.block(i, j) = code.contract(pair);
      if(i != j) gram.block(j, i) = gram.block(i, j).adjoint();
    }
  return gram;
}

ErrorGram bond_error_gram_dense(const VbsCode &code, double p) {
  auto errors = bond_errors(code, p);
  std::vector<Matrix> images;
  for(const auto &e : errors) {
    const BondInsertion one[] = {e};
    images.push_back(code.dense_images(one));
  }
  return ErrorGram::from_images(images);
}

} // namespace qx

namespace qx {

double ClosedFormResiduals::max() const { return std::max({edge, detect, corr, site, sum_rule}); }

ClosedFormResiduals closed_form_residuals(const VbsCode &code, bool include_site) {
  const auto &basis = code.basis();
  const int d = code.d();
  const int big_n = code.n();
  const int q = code.site_dim();
  const double chi = code.chi();
  const double qd = q;
  auto worst = [](double &slot, const Matrix &diff) { slot = std::max(slot, diff.cwiseAbs().maxCoeff()); };
  auto single = [&](int a, int bond) {
    const BondInsertion ins[] = {{bond, basis.generator(a)}};
    return code.contract(ins);
  };

  ClosedFormResiduals r;
  for(int alpha = 0; alpha < d; ++alpha)
    for(int n = 0; n <= big_n; ++n) {
      auto e = edge_state(code, alpha, n);
      worst(r.edge, e.iterated - e.closed_form);
    }

  // bond_values[a][n] = <psi| t^a at bond n |psi>
  std::vector<std::vector<Matrix>> bond_values(static_cast<std::size_t>(q));
  for(int a = 0; a < q; ++a)
    for(int n = 0; n <= big_n; ++n) {
      Matrix v = single(a, n);
      worst(r.detect, v - std::pow(chi, n) * basis.generator(a));
      bond_values[static_cast<std::size_t>(a)].push_back(std::move(v));
    }

  // t^b t^a = delta_ab/(2d) + h_bac t^c / 2
  std::vector<Matrix> products(static_cast<std::size_t>(q * q));
  for(int a = 0; a < q; ++a)
    for(int b = 0; b < q; ++b) {
      Matrix h = Matrix::Zero(d, d);
      for(int c = 0; c < q; ++c) h += basis.h(b, a, c) * basis.generator(c) / 2.0;
      products[static_cast<std::size_t>(a * q + b)] = h;
    }
  for(int m = 0; m <= big_n; ++m)
    for(int n = m + 1; n <= big_n; ++n)
      for(int a = 0; a < q; ++a)
        for(int b = 0; b < q; ++b) {
          const BondInsertion ins[] = {{m, basis.generator(a)}, {n, basis.generator(b)}};
          Matrix closed = std::pow(chi, n) * products[static_cast<std::size_t>(a * q + b)];
          if(a == b) closed += std::pow(chi, n - m) / (2.0 * d) * Matrix::Identity(d, d);
          worst(r.corr, code.contract(ins) - closed);
        }

  for(int a = 0; a < q; ++a) {
    const auto &vals = bond_values[static_cast<std::size_t>(a)];
    Matrix total = vals[static_cast<std::size_t>(big_n)];
    for(int n = 1; n <= big_n; ++n) total += vals[static_cast<std::size_t>(n - 1)] - vals[static_cast<std::size_t>(n)];
    worst(r.sum_rule, total - basis.generator(a));
  }

  if(!include_site) return r;
  std::vector<Matrix> adjoint;
  for(int a = 0; a < q; ++a) adjoint.push_back(adjoint_generator(basis, a));
  const Matrix one = Matrix::Identity(d, d);
  for(int n = 1; n <= big_n; ++n)
    for(int a = 0; a < q; ++a) {
      const SiteOperator on_n[] = {{n, adjoint[static_cast<std::size_t>(a)]}};
      const auto &vals = bond_values[static_cast<std::size_t>(a)];
      Matrix closed = d * d * std::pow(chi, n - 1) / qd * basis.generator(a);
      worst(r.site, vals[static_cast<std::size_t>(n - 1)] - vals[static_cast<std::size_t>(n)] - closed);
      worst(r.site, code.contract({}, on_n) - closed);
      for(int b = 0; b < q; ++b) {
        const Matrix &tb = basis.generator(b);
        Matrix closed_edge = a == b ? Matrix(-d * std::pow(chi, big_n - n) / (2.0 * qd) * one) : Matrix::Zero(d, d);
        Matrix expanded_edge = Matrix::Zero(d, d);
        for(int shift = 0; shift < 2; ++shift) {
          const BondInsertion ins[] = {{n - 1 + shift, basis.generator(a)}, {big_n, tb}};
          expanded_edge += shift == 0 ? code.contract(ins) : Matrix(-code.contract(ins));
        }
        const BondInsertion edge[] = {{big_n, tb}};
        worst(r.site, expanded_edge - closed_edge);
        worst(r.site, code.contract(edge, on_n) - closed_edge);
      }
    }
  for(int m = 1; m <= big_n; ++m)
    for(int n = m + 1; n <= big_n; ++n)
      for(int a = 0; a < q; ++a)
        for(int b = 0; b < q; ++b) {
          Matrix closed = a == b ? Matrix(-std::pow(d, 3) * std::pow(chi, n - m - 1) / (2.0 * qd * qd) * one)
                                 : Matrix::Zero(d, d);
          Matrix expanded_pair = Matrix::Zero(d, d);
          for(int sm = 0; sm < 2; ++sm)
            for(int sn = 0; sn < 2; ++sn) {
              const BondInsertion ins[] = {{m - 1 + sm, basis.generator(a)}, {n - 1 + sn, basis.generator(b)}};
              Matrix v = code.contract(ins);
              expanded_pair += (sm + sn) % 2 ? Matrix(-v) : v;
            }
          const SiteOperator on_mn[] = {{m, adjoint[static_cast<std::size_t>(a)]}, {n, adjoint[static_cast<std::size_t>(b)]}};
          worst(r.site, expanded_pair - closed);
          worst(r.site, code.contract({}, on_mn) - closed);
        }
  return r;
}

} // namespace qx
