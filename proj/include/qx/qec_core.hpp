#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qx/linalg.hpp"
#include "qx/quantum_ops.hpp"

namespace qx {

/// Encoding isometry V : H_L -> H with code-space projector P = V V†.
class CodeIsometry {
public:
  explicit CodeIsometry(Matrix v, double tolerance = 1e-12);

  int logical_dim() const { return static_cast<int>(v_.cols()); }
  int physical_dim() const { return static_cast<int>(v_.rows()); }
  const Matrix &v() const { return v_; }
  Matrix projector() const { return v_ * v_.adjoint(); }

private:
  Matrix v_;
};

/// Compressed Knill-Laflamme data: blocks M_ij = V† E_i† E_j V (each d_L x d_L).
///
/// Everything in the KL analysis, the canonical recovery and the correctability
/// measure depends on the errors only through these blocks, so large codes can
/// supply them by contraction instead of dense physical operators.
class ErrorGram {
public:
  ErrorGram(int error_count, int logical_dim);

  static ErrorGram from_operators(const CodeIsometry &code, std::span<const Matrix> errors);
  /// `images[j]` is E_j V (d_Q x d_L).
  static ErrorGram from_images(std::span<const Matrix> images);

  int error_count() const { return n_; }
  int logical_dim() const { return dl_; }
  Matrix &block(int i, int j) { return blocks_[index(i, j)]; }
  const Matrix &block(int i, int j) const { return blocks_[index(i, j)]; }

  /// Blocks of F_l = sum_i y_li E_i: M'_lm = sum_ij conj(y_li) y_mj M_ij.
  ErrorGram transformed(const Matrix &upsilon) const;

private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  int n_;
  int dl_;
  std::vector<Matrix> blocks_;
};

struct Detection {
  cplx e;
  double residual;
};

/// e_i = tr(V† E_i V) / d_L and residual_i = || V† E_i V - e_i 1 ||.
std::vector<Detection> detect_condition(const CodeIsometry &code, std::span<const Matrix> errors);

/// How the canonical recovery R_k = P F_k† / sqrt(d_k) is made trace non-increasing.
enum class RecoveryMode {
  /// Symmetric (Lowdin) orthonormalization of the vectors F_k V / sqrt(d_k); equal to the
  /// literal construction whenever the exact KL conditions hold.
  normalized,
  /// Literal R_k; fails with numerical_failure when 1 - sum R_k† R_k is not PSD.
  literal,
};

struct KLOptions {
  /// d_k is retained iff d_k > cutoff * max_k d_k.
  double cutoff = 1e-12;
  RecoveryMode mode = RecoveryMode::normalized;
};

struct KLReport {
  int error_count = 0;
  int logical_dim = 0;
  Matrix a;                         ///< a_ij = tr(M_ij) / d_L
  RealVector eigenvalues;           ///< d_k, descending
  Matrix rotation;                  ///< u_kj with F_k = sum_j u_kj E_j
  std::vector<Matrix> residuals;    ///< B_ij = M_ij - a_ij 1 (row-major n x n)
  std::vector<Matrix> rotated;      ///< rotated residuals B_kl (row-major n x n)
  RealMatrix beta;                  ///< beta_kl = tr(B_kl† B_kl)
  int environment_size = 0;         ///< d_E = #{k : d_k retained}
  double dt_first_order = 0;        ///< (1/2d_L) sum_{k retained, l} beta_kl / d_k
  double dt_exact = 0;              ///< Choi trace distance of the recovered channel to omega
  double diamond_lower = 0;         ///< 2 * dt_exact
  double diamond_upper = 0;         ///< 2 d_L * dt_exact
  double epsilon = 0;               ///< Choi trace distance between D + B and D
  double fidelity = 1;
  double bures = 0;

  const Matrix &residual(int i, int j) const { return residuals[static_cast<std::size_t>(i * error_count + j)]; }
  const Matrix &rotated_residual(int k, int l) const { return rotated[static_cast<std::size_t>(k * error_count + l)]; }
  bool retained(int k) const { return k < environment_size; }
  double max_beta() const { return beta.size() ? beta.maxCoeff() : 0.0; }
};

KLReport kl_decompose(const ErrorGram &gram, const KLOptions &options = {});
KLReport kl_decompose(const CodeIsometry &code, std::span<const Matrix> errors, const KLOptions &options = {});

/// Physical recovery channel on H (d_Q -> d_Q): Kraus set {R_k} plus the completion
/// K_0 = (1 - sum R_k† R_k)^{1/2}.
KrausChannel recovery_from_kl(const CodeIsometry &code, std::span<const Matrix> errors, const KLReport &report,
                              const KLOptions &options = {});

/// Q = V† R N V computed directly from the Gram blocks (d_L -> d_L). Equals
/// recovered_logical_channel(code, noise, recovery_from_kl(...)) up to Kraus ordering.
KrausChannel logical_recovered_channel(const ErrorGram &gram, const KLReport &report, const KLOptions &options = {});

/// The map sigma -> sum_{kl} V† R_k F_l V sigma (...)† with the literal, uncompleted R_k.
/// Not trace preserving for quasi codes; its Choi distance equals dt_first_order.
KrausChannel uncompleted_logical_map(const ErrorGram &gram, const KLReport &report);

/// Kraus composition V† R N V.
KrausChannel recovered_logical_channel(const CodeIsometry &code, const KrausChannel &noise,
                                       const KrausChannel &recovery);

struct RecoveryError {
  double dt_exact;
  double diamond_lower;
  double diamond_upper;
  double fidelity;
  double bures;
};
RecoveryError recovery_error(const KrausChannel &q);

/// Trace distance between the Choi matrices of the system-to-environment maps
/// D + B : rho -> sum_ij tr(rho M_ij)|i><j| and D : rho -> tr(rho) sum_ij a_ij |i><j|.
double correctability_epsilon(const ErrorGram &gram);
double correctability_epsilon(const CodeIsometry &code, std::span<const Matrix> errors);

/// F_l = sum_i y_li E_i.
std::vector<Matrix> span_transform(std::span<const Matrix> errors, const Matrix &upsilon);

struct LogicalCheck {
  double deviation;   ///< || U P - P U P ||
  Matrix logical;     ///< V† U V
  bool is_logical;
};
LogicalCheck logical_operator_check(const Matrix &u, const CodeIsometry &code, double tolerance = 1e-10);

/// One term H_j of D = sum_j alpha_j H_j, supported on tensor factor `site`.
struct LocalTerm {
  int site;
  Matrix h;
};

struct CollapseCheck {
  double h;                       ///< tr(V† D V) / d_L (real for Hermitian D)
  Matrix logical_residual;        ///< V† D V - h 1
  double collapse_deviation;      ///< || V† D V - h 1 ||
  double factorization_deviation; ///< || V† e^{i xi D} V - e^{i xi h} e^{i xi B} ||
};
CollapseCheck transversal_collapse_check(const CodeIsometry &code, std::span<const int> site_dims,
                                         std::span<const LocalTerm> terms, std::span<const double> alpha,
                                         double xi);

/// Code space C = T ⊗ J embedded by `basis` (d_Q x d_T d_J, column t * d_J + j).
class SubsystemSplit {
public:
  SubsystemSplit(int d_t, int d_j, Matrix basis, double tolerance = 1e-12);

  int d_t() const { return d_t_; }
  int d_j() const { return d_j_; }
  const Matrix &basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.adjoint(); }

private:
  int d_t_;
  int d_j_;
  Matrix basis_;
};

struct SubsystemKL {
  std::vector<Matrix> j_blocks;  ///< J_ij (d_J x d_J), row-major n x n
  double residual;               ///< max_ij || M_ij - 1_T ⊗ J_ij ||
  double gauge_residual;         ///< max || (V_T ⊗ g)† E_i† E_j (V_T ⊗ h) - a 1_T || over gauge-state pairs
};
/// `gauge_states` are vectors in J; when empty the computational basis of J is used.
SubsystemKL subsystem_kl_check(const SubsystemSplit &split, std::span<const Matrix> errors,
                               std::span<const Vector> gauge_states = {});

struct SubsystemGate {
  Matrix u_t;
  double deviation;  ///< || V_C† U V_C - U_T ⊗ 1_J ||
};
SubsystemGate subsystem_gate_factorization(const Matrix &u, const SubsystemSplit &split, double tolerance = 1e-10);

} // namespace qx
