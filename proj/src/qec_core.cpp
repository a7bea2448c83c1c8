#include "qx/qec_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace qx {

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

// Inverse square root on the support of a PSD matrix; eigenvalues at or below
// `relative_cutoff * max` are treated as zero.
Matrix pseudo_inverse_sqrt(const Matrix &g, double relative_cutoff = 1e-12) {
  auto eig = hermitian_eigen(g);
  const double top = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  Vector inv(eig.values.size());
  for(Eigen::Index k = 0; k < eig.values.size(); ++k)
    inv(k) = eig.values(k) > relative_cutoff * top ? 1.0 / std::sqrt(eig.values(k)) : 0.0;
  return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

// Square root on the support of a PSD matrix, with the same cutoff as pseudo_inverse_sqrt.
Matrix support_sqrt(const Matrix &g, double relative_cutoff = 1e-12) {
  auto eig = hermitian_eigen(g);
  const double top = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  Vector root(eig.values.size());
  for(Eigen::Index k = 0; k < eig.values.size(); ++k)
    root(k) = eig.values(k) > relative_cutoff * top ? std::sqrt(eig.values(k)) : 0.0;
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

// Gram matrix of the retained vectors F_k V / sqrt(d_k), built from the rotated blocks.
Matrix retained_gram(const ErrorGram &rotated_gram, const RealVector &dk, int retained) {
  const int dl = rotated_gram.logical_dim();
  Matrix g(retained * dl, retained * dl);
  for(int k = 0; k < retained; ++k)
    for(int l = 0; l < retained; ++l)
      g.block(k * dl, l * dl, dl, dl) = rotated_gram.block(k, l) / std::sqrt(dk(k) * dk(l));
  return hermitian_part(g);
}

ErrorGram rotate(const ErrorGram &gram, const Matrix &w) {
  // M'_kl = sum_ij conj(W_ik) W_jl M_ij, done in two passes.
  const int n = gram.error_count();
  const int dl = gram.logical_dim();
  ErrorGram half(n, dl);
  for(int k = 0; k < n; ++k)
    for(int j = 0; j < n; ++j) {
      Matrix acc = Matrix::Zero(dl, dl);
      for(int i = 0; i < n; ++i) acc += std::conj(w(i, k)) * gram.block(i, j);
      half.block(k, j) = acc;
    }
  ErrorGram out(n, dl);
  for(int k = 0; k < n; ++k)
    for(int l = 0; l < n; ++l) {
      Matrix acc = Matrix::Zero(dl, dl);
      for(int j = 0; j < n; ++j) acc += w(j, l) * half.block(k, j);
      out.block(k, l) = acc;
    }
  return out;
}

struct Diagonalized {
  Matrix a;
  RealVector dk;   // descending
  Matrix w;        // columns are eigenvectors; u_kj = w(j, k)
  int retained;
};

Diagonalized diagonalize(const ErrorGram &gram, double cutoff) {
  const int n = gram.error_count();
  const int dl = gram.logical_dim();
  Diagonalized out;
  out.a.resize(n, n);
  for(int i = 0; i < n; ++i)
    for(int j = 0; j < n; ++j) out.a(i, j) = gram.block(i, j).trace() / double(dl);
  auto eig = hermitian_eigen(out.a);
  out.dk = eig.values.reverse();
  out.w = eig.vectors.rowwise().reverse();
  const double top = out.dk.size() ? out.dk(0) : 0.0;
  if(!(top > 1e-14)) fail(ErrorCode::degenerate_noise, "kl_decompose: every eigenvalue of a is below the cutoff");
  out.retained = 0;
  for(int k = 0; k < n; ++k)
    if(out.dk(k) > cutoff * top) ++out.retained;
  return out;
}

KrausChannel compressed_channel(const ErrorGram &rotated_gram, const RealVector &dk, int retained, RecoveryMode mode) {
  const int dl = rotated_gram.logical_dim();
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(retained * retained));
  if(mode == RecoveryMode::literal) {
    Matrix g = retained_gram(rotated_gram, dk, retained);
    double top = hermitian_eigen(g).values.maxCoeff();
    if(top > 1.0 + 1e-10)
      fail(ErrorCode::numerical_failure,
           "recovery completion operand is not PSD (largest eigenvalue of sum R†R is " + std::to_string(top) + ")");
    for(int k = 0; k < retained; ++k)
      for(int l = 0; l < retained; ++l) kraus.push_back(rotated_gram.block(k, l) / std::sqrt(dk(k)));
  } else {
    // V† R_k F_l V = sqrt(d_l) (G^{1/2})_kl; the completion annihilates span{F_l V}.
    Matrix root = support_sqrt(retained_gram(rotated_gram, dk, retained));
    for(int k = 0; k < retained; ++k)
      for(int l = 0; l < retained; ++l) kraus.push_back(std::sqrt(dk(l)) * root.block(k * dl, l * dl, dl, dl));
  }
  return KrausChannel(dl, dl, std::move(kraus));
}

} // namespace

CodeIsometry::CodeIsometry(Matrix v, double tolerance) : v_(std::move(v)) {
  if(v_.cols() < 1 || v_.rows() < v_.cols())
    fail(ErrorCode::invalid_dimension, "CodeIsometry: need d_Q >= d_L >= 1");
  double dev = (v_.adjoint() * v_ - identity(logical_dim())).cwiseAbs().maxCoeff();
  if(dev > tolerance) fail(ErrorCode::invalid_argument, "CodeIsometry: V†V deviates from identity by " + std::to_string(dev));
}

ErrorGram::ErrorGram(int error_count, int logical_dim)
    : n_(error_count), dl_(logical_dim),
      blocks_(static_cast<std::size_t>(error_count) * error_count, Matrix::Zero(logical_dim, logical_dim)) {
  if(error_count < 1) fail(ErrorCode::invalid_argument, "ErrorGram: error list must be nonempty");
}

ErrorGram ErrorGram::from_images(std::span<const Matrix> images) {
  if(images.empty()) fail(ErrorCode::invalid_argument, "ErrorGram: error list must be nonempty");
  const auto rows = images.front().rows();
  const int dl = static_cast<int>(images.front().cols());
  for(const auto &img : images)
    if(img.rows() != rows || img.cols() != dl) fail(ErrorCode::dimension_mismatch, "ErrorGram: image shapes differ");
  const int n = static_cast<int>(images.size());
  ErrorGram g(n, dl);
  for(int i = 0; i < n; ++i)
    for(int j = i; j < n; ++j) {
      g.block(i, j) = images[i].adjoint() * images[j];
      if(j != i) g.block(j, i) = g.block(i, j).adjoint();
    }
  return g;
}

ErrorGram ErrorGram::from_operators(const CodeIsometry &code, std::span<const Matrix> errors) {
  std::vector<Matrix> images;
  images.reserve(errors.size());
  for(const auto &e : errors) {
    if(e.rows() != code.physical_dim() || e.cols() != code.physical_dim())
      fail(ErrorCode::dimension_mismatch, "error operator does not act on the physical space");
    images.push_back(e * code.v());
  }
  return from_images(images);
}

ErrorGram ErrorGram::transformed(const Matrix &upsilon) const {
  if(upsilon.cols() != n_) fail(ErrorCode::dimension_mismatch, "span transform: column count must equal error count");
  const int m = static_cast<int>(upsilon.rows());
  if(m < 1) fail(ErrorCode::dimension_mismatch, "span transform: empty transformation");
  ErrorGram out(m, dl_);
  for(int l = 0; l < m; ++l)
    for(int p = 0; p < m; ++p) {
      Matrix acc = Matrix::Zero(dl_, dl_);
      for(int i = 0; i < n_; ++i) {
        cplx yl = std::conj(upsilon(l, i));
        if(yl == cplx(0)) continue;
        for(int j = 0; j < n_; ++j) acc += yl * upsilon(p, j) * block(i, j);
      }
      out.block(l, p) = acc;
    }
  return out;
}

std::vector<Detection> detect_condition(const CodeIsometry &code, std::span<const Matrix> errors) {
  std::vector<Detection> out;
  const int dl = code.logical_dim();
  for(const auto &e : errors) {
    if(e.rows() != code.physical_dim() || e.cols() != code.physical_dim())
      fail(ErrorCode::dimension_mismatch, "detect_condition: operator does not act on the physical space");
    Matrix m = code.v().adjoint() * e * code.v();
    cplx ev = m.trace() / double(dl);
    out.push_back({ev, operator_norm(m - ev * identity(dl))});
  }
  return out;
}

KLReport kl_decompose(const ErrorGram &gram, const KLOptions &options) {
  const int n = gram.error_count();
  const int dl = gram.logical_dim();
  auto diag = diagonalize(gram, options.cutoff);

  KLReport r;
  r.error_count = n;
  r.logical_dim = dl;
  r.a = diag.a;
  r.eigenvalues = diag.dk;
  r.rotation = diag.w.transpose();
  r.environment_size = diag.retained;

  r.residuals.reserve(static_cast<std::size_t>(n * n));
  for(int i = 0; i < n; ++i)
    for(int j = 0; j < n; ++j) r.residuals.push_back(gram.block(i, j) - diag.a(i, j) * identity(dl));

  ErrorGram rotated = rotate(gram, diag.w);
  Matrix a_rot = diag.w.adjoint() * diag.a * diag.w;
  r.rotated.reserve(static_cast<std::size_t>(n * n));
  r.beta.resize(n, n);
  for(int k = 0; k < n; ++k)
    for(int l = 0; l < n; ++l) {
      Matrix b = rotated.block(k, l) - a_rot(k, l) * identity(dl);
      r.beta(k, l) = b.squaredNorm();
      r.rotated.push_back(std::move(b));
    }

  double sum = 0;
  for(int k = 0; k < diag.retained; ++k)
    for(int l = 0; l < n; ++l) sum += r.beta(k, l) / diag.dk(k);
  r.dt_first_order = sum / (2.0 * dl);

  auto q = compressed_channel(rotated, diag.dk, diag.retained, options.mode);
  auto err = recovery_error(q);
  r.dt_exact = err.dt_exact;
  r.diamond_lower = err.diamond_lower;
  r.diamond_upper = err.diamond_upper;
  r.fidelity = err.fidelity;
  r.bures = err.bures;
  r.epsilon = correctability_epsilon(gram);
  return r;
}

KLReport kl_decompose(const CodeIsometry &code, std::span<const Matrix> errors, const KLOptions &options) {
  return kl_decompose(ErrorGram::from_operators(code, errors), options);
}

KrausChannel recovery_from_kl(const CodeIsometry &code, std::span<const Matrix> errors, const KLReport &report,
                              const KLOptions &options) {
  if(static_cast<int>(errors.size()) != report.error_count)
    fail(ErrorCode::dimension_mismatch, "recovery_from_kl: report was built for a different error set");
  if(report.environment_size < 1) fail(ErrorCode::degenerate_noise, "recovery_from_kl: no retained eigenvalue");
  const int dq = code.physical_dim();
  const int dl = code.logical_dim();
  const int kept = report.environment_size;

  // X = [F_k V / sqrt(d_k)]_k
  Matrix x = Matrix::Zero(dq, kept * dl);
  for(int k = 0; k < kept; ++k) {
    Matrix fk = Matrix::Zero(dq, dl);
    for(std::size_t j = 0; j < errors.size(); ++j) {
      cplx u = report.rotation(k, static_cast<Eigen::Index>(j));
      if(u != cplx(0)) fk += u * (errors[j] * code.v());
    }
    x.middleCols(k * dl, dl) = fk / std::sqrt(report.eigenvalues(k));
  }
  if(options.mode == RecoveryMode::normalized) x = x * pseudo_inverse_sqrt(hermitian_part(x.adjoint() * x));

  std::vector<Matrix> kraus;
  Matrix used = Matrix::Zero(dq, dq);
  for(int k = 0; k < kept; ++k) {
    Matrix rk = code.v() * x.middleCols(k * dl, dl).adjoint();
    used += rk.adjoint() * rk;
    kraus.push_back(std::move(rk));
  }
  // After normalization 1 - sum R†R is a projector and is its own square root; taking
  // sqrt_psd would turn rounding noise on its kernel into 1e-8 sized entries.
  if(options.mode == RecoveryMode::normalized) kraus.push_back(hermitian_part(identity(dq) - used));
  else kraus.push_back(sqrt_psd(identity(dq) - used, 1e-10));
  return KrausChannel(dq, dq, std::move(kraus));
}

KrausChannel logical_recovered_channel(const ErrorGram &gram, const KLReport &report, const KLOptions &options) {
  auto diag = diagonalize(gram, options.cutoff);
  (void)report;
  return compressed_channel(rotate(gram, diag.w), diag.dk, diag.retained, options.mode);
}

KrausChannel uncompleted_logical_map(const ErrorGram &gram, const KLReport &report) {
  const int dl = gram.logical_dim();
  ErrorGram rotated = rotate(gram, report.rotation.transpose());
  std::vector<Matrix> kraus;
  for(int k = 0; k < report.environment_size; ++k)
    for(int l = 0; l < gram.error_count(); ++l)
      kraus.push_back(rotated.block(k, l) / std::sqrt(report.eigenvalues(k)));
  return KrausChannel(dl, dl, std::move(kraus));
}

KrausChannel recovered_logical_channel(const CodeIsometry &code, const KrausChannel &noise,
                                       const KrausChannel &recovery) {
  const int dq = code.physical_dim();
  if(noise.in_dim() != dq || noise.out_dim() != recovery.in_dim() || recovery.out_dim() != dq)
    fail(ErrorCode::dimension_mismatch, "recovered_logical_channel: dimensions do not chain");
  const Matrix vd = code.v().adjoint();
  std::vector<Matrix> kraus;
  kraus.reserve(noise.size() * recovery.size());
  for(const auto &n : noise.kraus()) {
    Matrix nv = n * code.v();
    for(const auto &r : recovery.kraus()) kraus.push_back(vd * (r * nv));
  }
  return KrausChannel(code.logical_dim(), code.logical_dim(), std::move(kraus));
}

RecoveryError recovery_error(const KrausChannel &q) {
  if(q.in_dim() != q.out_dim()) fail(ErrorCode::dimension_mismatch, "recovery_error: channel must be square");
  const int dl = q.in_dim();
  Vector omega = max_entangled(dl);
  double dt = trace_distance(choi_matrix(q), omega * omega.adjoint());
  auto fid = entanglement_fidelity(q);
  return {dt, 2.0 * dt, 2.0 * dl * dt, fid.fidelity, fid.bures};
}

double correctability_epsilon(const ErrorGram &gram) {
  // Choi difference entry ((i, alpha), (j, beta)) = B_ij(beta, alpha) / d_L
  const int n = gram.error_count();
  const int dl = gram.logical_dim();
  Matrix diff(n * dl, n * dl);
  for(int i = 0; i < n; ++i)
    for(int j = 0; j < n; ++j) {
      const Matrix &m = gram.block(i, j);
      cplx aij = m.trace() / double(dl);
      Matrix b = m - aij * identity(dl);
      diff.block(i * dl, j * dl, dl, dl) = b.transpose() / double(dl);
    }
  return 0.5 * hermitian_eigen(diff).values.cwiseAbs().sum();
}

double correctability_epsilon(const CodeIsometry &code, std::span<const Matrix> errors) {
  return correctability_epsilon(ErrorGram::from_operators(code, errors));
}

std::vector<Matrix> span_transform(std::span<const Matrix> errors, const Matrix &upsilon) {
  if(upsilon.cols() != static_cast<Eigen::Index>(errors.size()))
    fail(ErrorCode::dimension_mismatch, "span_transform: column count must equal error count");
  std::vector<Matrix> out;
  for(Eigen::Index l = 0; l < upsilon.rows(); ++l) {
    Matrix f = Matrix::Zero(errors.front().rows(), errors.front().cols());
    for(std::size_t i = 0; i < errors.size(); ++i) f += upsilon(l, static_cast<Eigen::Index>(i)) * errors[i];
    out.push_back(std::move(f));
  }
  return out;
}

LogicalCheck logical_operator_check(const Matrix &u, const CodeIsometry &code, double tolerance) {
  if(u.rows() != code.physical_dim() || u.cols() != code.physical_dim())
    fail(ErrorCode::dimension_mismatch, "logical_operator_check: operator does not act on the physical space");
  if(!is_unitary(u, 1e-10)) fail(ErrorCode::invalid_unitary, "logical_operator_check: operator is not unitary");
  Matrix uv = u * code.v();
  Matrix logical = code.v().adjoint() * uv;
  double dev = operator_norm(uv - code.v() * logical);
  return {dev, logical, dev < tolerance};
}

CollapseCheck transversal_collapse_check(const CodeIsometry &code, std::span<const int> site_dims,
                                         std::span<const LocalTerm> terms, std::span<const double> alpha, double xi) {
  if(alpha.size() != terms.size()) fail(ErrorCode::dimension_mismatch, "transversal_collapse_check: one alpha per term");
  const long total = std::accumulate(site_dims.begin(), site_dims.end(), 1L, std::multiplies<>());
  if(total != code.physical_dim()) fail(ErrorCode::dimension_mismatch, "transversal_collapse_check: site dimensions");
  std::set<int> used;
  const int dq = code.physical_dim();
  Matrix d = Matrix::Zero(dq, dq);
  for(std::size_t j = 0; j < terms.size(); ++j) {
    const auto &term = terms[j];
    if(term.site < 0 || term.site >= static_cast<int>(site_dims.size()))
      fail(ErrorCode::index_out_of_range, "transversal_collapse_check: site index");
    if(!used.insert(term.site).second)
      fail(ErrorCode::overlapping_support, "transversal_collapse_check: two terms act on site " + std::to_string(term.site));
    const int sd = site_dims[static_cast<std::size_t>(term.site)];
    if(term.h.rows() != sd || term.h.cols() != sd) fail(ErrorCode::dimension_mismatch, "transversal_collapse_check: term shape");
    if(!is_hermitian(term.h, 1e-12)) fail(ErrorCode::non_hermitian, "transversal_collapse_check: H_j is not Hermitian");
    long left = 1, right = 1;
    for(int s = 0; s < term.site; ++s) left *= site_dims[static_cast<std::size_t>(s)];
    for(std::size_t s = static_cast<std::size_t>(term.site) + 1; s < site_dims.size(); ++s) right *= site_dims[s];
    d += alpha[j] * kron(kron(identity(static_cast<int>(left)), term.h), identity(static_cast<int>(right)));
  }
  const int dl = code.logical_dim();
  Matrix vdv = code.v().adjoint() * d * code.v();
  CollapseCheck out;
  out.h = (vdv.trace() / double(dl)).real();
  out.logical_residual = vdv - out.h * identity(dl);
  out.collapse_deviation = operator_norm(out.logical_residual);
  Matrix compressed = code.v().adjoint() * expi_hermitian(d, xi) * code.v();
  Matrix factored = std::exp(kI * (xi * out.h)) * expi_hermitian(out.logical_residual, xi);
  out.factorization_deviation = operator_norm(compressed - factored);
  return out;
}

SubsystemSplit::SubsystemSplit(int d_t, int d_j, Matrix basis, double tolerance)
    : d_t_(d_t), d_j_(d_j), basis_(std::move(basis)) {
  if(d_t < 1 || d_j < 1 || basis_.cols() != static_cast<Eigen::Index>(d_t) * d_j || basis_.rows() < basis_.cols())
    fail(ErrorCode::degenerate_split, "SubsystemSplit: basis shape does not match d_T * d_J");
  double dev = (basis_.adjoint() * basis_ - identity(d_t * d_j)).cwiseAbs().maxCoeff();
  if(dev > tolerance) fail(ErrorCode::degenerate_split, "SubsystemSplit: basis is not orthonormal");
}

SubsystemKL subsystem_kl_check(const SubsystemSplit &split, std::span<const Matrix> errors,
                               std::span<const Vector> gauge_states) {
  if(errors.empty()) fail(ErrorCode::invalid_argument, "subsystem_kl_check: error list must be nonempty");
  const int dt = split.d_t();
  const int dj = split.d_j();
  const Matrix &c = split.basis();
  const std::array<int, 2> dims{dt, dj};
  const std::array<int, 1> keep_j{1};

  std::vector<Matrix> images;
  for(const auto &e : errors) {
    if(e.rows() != c.rows() || e.cols() != c.rows())
      fail(ErrorCode::dimension_mismatch, "subsystem_kl_check: error does not act on the physical space");
    images.push_back(e * c);
  }
  const int n = static_cast<int>(errors.size());
  SubsystemKL out;
  out.residual = 0;
  for(int i = 0; i < n; ++i)
    for(int j = 0; j < n; ++j) {
      Matrix m = images[i].adjoint() * images[j];
      Matrix jij = partial_trace(m, dims, keep_j) / double(dt);
      out.residual = std::max(out.residual, operator_norm(m - kron(identity(dt), jij)));
      out.j_blocks.push_back(std::move(jij));
    }

  std::vector<Vector> gauges(gauge_states.begin(), gauge_states.end());
  if(gauges.empty())
    for(int g = 0; g < dj; ++g) gauges.push_back(Vector::Unit(dj, g));
  std::vector<Matrix> rect;  // E_i (V_T ⊗ |g>)
  for(const auto &g : gauges) {
    if(g.size() != dj) fail(ErrorCode::dimension_mismatch, "subsystem_kl_check: gauge state dimension");
    Matrix embed = kron(identity(dt), Matrix(g));
    for(const auto &img : images) rect.push_back(img * embed);
  }
  out.gauge_residual = 0;
  for(const auto &x : rect)
    for(const auto &y : rect) {
      Matrix m = x.adjoint() * y;
      cplx a = m.trace() / double(dt);
      out.gauge_residual = std::max(out.gauge_residual, operator_norm(m - a * identity(dt)));
    }
  return out;
}

SubsystemGate subsystem_gate_factorization(const Matrix &u, const SubsystemSplit &split, double tolerance) {
  const Matrix &c = split.basis();
  if(u.rows() != c.rows() || u.cols() != c.rows())
    fail(ErrorCode::dimension_mismatch, "subsystem_gate_factorization: operator shape");
  Matrix uc = u * c;
  Matrix compressed = c.adjoint() * uc;
  if(operator_norm(uc - c * compressed) > tolerance)
    fail(ErrorCode::not_logical, "subsystem_gate_factorization: operator leaks out of the code space");
  const std::array<int, 2> dims{split.d_t(), split.d_j()};
  const std::array<int, 1> keep_t{0};
  Matrix ut = nearest_unitary(partial_trace(compressed, dims, keep_t) / double(split.d_j()));
  double dev = operator_norm(compressed - kron(ut, identity(split.d_j())));
  return {ut, dev};
}

} // namespace qx
