#include "qx/quantum_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qx {

KrausChannel::KrausChannel(int in_dim, int out_dim, std::vector<Matrix> kraus)
    : in_dim_(in_dim), out_dim_(out_dim), kraus_(std::move(kraus)) {
  if(in_dim < 1 || out_dim < 1) fail(ErrorCode::invalid_dimension, "KrausChannel: dimensions must be positive");
  for(const auto &k : kraus_)
    if(k.rows() != out_dim || k.cols() != in_dim)
      fail(ErrorCode::dimension_mismatch, "KrausChannel: Kraus operator has wrong shape");
}

KrausChannel KrausChannel::identity(int dim) { return KrausChannel(dim, dim, {Matrix::Identity(dim, dim)}); }

KrausChannel KrausChannel::unitary(const Matrix &u) {
  return KrausChannel(static_cast<int>(u.cols()), static_cast<int>(u.rows()), {u});
}

KrausChannel KrausChannel::completely_depolarizing(int dim) {
  std::vector<Matrix> ks;
  for(int i = 0; i < dim; ++i)
    for(int j = 0; j < dim; ++j) {
      Matrix k = Matrix::Zero(dim, dim);
      k(i, j) = 1.0 / std::sqrt(double(dim));
      ks.push_back(k);
    }
  return KrausChannel(dim, dim, std::move(ks));
}

Matrix KrausChannel::tp_operator() const {
  Matrix s = Matrix::Zero(in_dim_, in_dim_);
  for(const auto &k : kraus_) s += k.adjoint() * k;
  return s;
}

Matrix apply_channel(const KrausChannel &ch, const Matrix &rho) {
  if(rho.rows() != ch.in_dim() || rho.cols() != ch.in_dim())
    fail(ErrorCode::dimension_mismatch, "apply_channel: state dimension does not match channel input");
  Matrix out = Matrix::Zero(ch.out_dim(), ch.out_dim());
  for(const auto &k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

KrausChannel compose(const KrausChannel &first, const KrausChannel &second) {
  if(first.out_dim() != second.in_dim()) fail(ErrorCode::dimension_mismatch, "compose: dimensions do not chain");
  std::vector<Matrix> ks;
  ks.reserve(first.size() * second.size());
  for(const auto &b : second.kraus())
    for(const auto &a : first.kraus()) ks.push_back(b * a);
  return KrausChannel(first.in_dim(), second.out_dim(), std::move(ks));
}

Matrix dilation_isometry(const KrausChannel &ch, double tolerance) {
  if(cptp_residuals(ch).tp > tolerance)
    fail(ErrorCode::dilation_undefined, "dilation_isometry: channel is not trace preserving");
  const int out = ch.out_dim();
  Matrix w(static_cast<Eigen::Index>(ch.size()) * out, ch.in_dim());
  for(std::size_t k = 0; k < ch.size(); ++k) w.middleRows(static_cast<Eigen::Index>(k) * out, out) = ch.kraus()[k];
  return w;
}

Vector max_entangled(int dim) {
  Vector w = Vector::Zero(dim * dim);
  for(int i = 0; i < dim; ++i) w(i * dim + i) = 1.0 / std::sqrt(double(dim));
  return w;
}

Matrix choi_matrix(const KrausChannel &ch) {
  if(ch.in_dim() != ch.out_dim()) fail(ErrorCode::dimension_mismatch, "choi_matrix: channel must be square");
  const int d = ch.in_dim();
  Vector omega = max_entangled(d);
  Matrix c = Matrix::Zero(d * d, d * d);
  Matrix id = Matrix::Identity(d, d);
  for(const auto &k : ch.kraus()) {
    Vector v = kron(k, id) * omega;
    c += v * v.adjoint();
  }
  return c;
}

double trace_distance(const Matrix &rho, const Matrix &sigma) {
  if(rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    fail(ErrorCode::dimension_mismatch, "trace_distance: operand shapes differ");
  auto eig = hermitian_eigen(rho - sigma);
  return 0.5 * eig.values.cwiseAbs().sum();
}

FidelityResult entanglement_fidelity(const KrausChannel &ch) {
  if(ch.in_dim() != ch.out_dim()) fail(ErrorCode::dimension_mismatch, "entanglement_fidelity: channel must be square");
  const double d = ch.in_dim();
  double f = 0;
  for(const auto &k : ch.kraus()) f += std::norm(k.trace());
  f /= d * d;
  return {f, std::sqrt(std::max(0.0, 1.0 - f))};
}

Matrix partial_trace(const Matrix &rho, std::span<const int> dims, std::span<const int> keep) {
  if(dims.empty()) fail(ErrorCode::invalid_argument, "partial_trace: missing subsystem dimensions");
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if(rho.rows() != total || rho.cols() != total)
    fail(ErrorCode::dimension_mismatch, "partial_trace: dimensions do not multiply to the operator size");
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(nf), false);
  int prev = -1;
  for(int k : keep) {
    if(k < 0 || k >= nf || k <= prev) fail(ErrorCode::invalid_argument, "partial_trace: bad keep index set");
    kept[static_cast<std::size_t>(k)] = true;
    prev = k;
  }
  long keep_dim = 1;
  for(int k : keep) keep_dim *= dims[static_cast<std::size_t>(k)];
  const long traced_dim = total / keep_dim;

  // full index of (kept multi-index, traced multi-index), factor 0 most significant
  std::vector<long> full(static_cast<std::size_t>(total));
  for(long i = 0; i < total; ++i) {
    long rem = i;
    long kept_index = 0, kept_scale = 1, traced_index = 0, traced_scale = 1;
    for(int f = nf - 1; f >= 0; --f) {
      const int dim = dims[static_cast<std::size_t>(f)];
      const long digit = rem % dim;
      rem /= dim;
      if(kept[static_cast<std::size_t>(f)]) {
        kept_index += digit * kept_scale;
        kept_scale *= dim;
      } else {
        traced_index += digit * traced_scale;
        traced_scale *= dim;
      }
    }
    full[static_cast<std::size_t>(traced_index * keep_dim + kept_index)] = i;
  }
  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for(long t = 0; t < traced_dim; ++t)
    for(long a = 0; a < keep_dim; ++a)
      for(long b = 0; b < keep_dim; ++b)
        out(a, b) += rho(full[static_cast<std::size_t>(t * keep_dim + a)], full[static_cast<std::size_t>(t * keep_dim + b)]);
  return out;
}

CptpResiduals cptp_residuals(const KrausChannel &ch) {
  Matrix tp = -Matrix::Identity(ch.in_dim(), ch.in_dim());
  Matrix un = -Matrix::Identity(ch.out_dim(), ch.out_dim());
  for(const auto &k : ch.kraus()) {
    tp += k.adjoint() * k;
    un += k * k.adjoint();
  }
  return {operator_norm(tp), operator_norm(un)};
}

Vector apply_local(const Vector &state, std::span<const int> dims, int site, const Matrix &op) {
  if(site < 0 || site >= static_cast<int>(dims.size()))
    fail(ErrorCode::index_out_of_range, "apply_local: site index out of range");
  const long dim = dims[static_cast<std::size_t>(site)];
  if(op.rows() != dim || op.cols() != dim) fail(ErrorCode::dimension_mismatch, "apply_local: operator shape");
  long inner = 1;
  for(std::size_t f = static_cast<std::size_t>(site) + 1; f < dims.size(); ++f) inner *= dims[f];
  const long outer = state.size() / (dim * inner);
  if(outer * dim * inner != state.size()) fail(ErrorCode::dimension_mismatch, "apply_local: state size");
  Vector out = Vector::Zero(state.size());
  for(long o = 0; o < outer; ++o)
    for(long r = 0; r < dim; ++r)
      for(long c = 0; c < dim; ++c) {
        cplx w = op(r, c);
        if(w == cplx(0)) continue;
        out.segment((o * dim + r) * inner, inner) += w * state.segment((o * dim + c) * inner, inner);
      }
  return out;
}

Matrix apply_product(const Matrix &states, std::span<const int> dims, std::span<const Matrix> factors) {
  if(factors.size() != dims.size()) fail(ErrorCode::dimension_mismatch, "apply_product: one factor per site required");
  Matrix out = states;
  for(Eigen::Index col = 0; col < states.cols(); ++col) {
    Vector v = states.col(col);
    for(std::size_t s = 0; s < dims.size(); ++s) v = apply_local(v, dims, static_cast<int>(s), factors[s]);
    out.col(col) = v;
  }
  return out;
}

} // namespace qx
