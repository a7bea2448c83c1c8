#pragma once

#include <span>
#include <vector>

#include "qx/qec_core.hpp"
#include "qx/su_algebra.hpp"

namespace qx {

enum class Side { ket, bra };

/// Operator on the virtual edge space at bond n. Bond n lies between sites n and
/// n+1 and is separated from the logical ket by n channel applications; bond N is
/// the physical edge site. Several insertions on one bond act in list order.
struct BondInsertion {
  int bond;
  Matrix op;
  Side side = Side::ket;
};

/// Operator on physical bulk site n (1-based), acting on the adjoint index.
struct SiteOperator {
  int site;
  Matrix op;
  Side side = Side::ket;
};

/// SU(d)-covariant valence-bond-solid code with N bulk sites of dimension d^2-1 and a
/// d-dimensional edge. Immutable after construction.
class VbsCode {
public:
  static constexpr double kDenseCap = 2'000'000;

  VbsCode(int d, int n);

  int d() const { return d_; }
  int n() const { return n_; }
  int site_dim() const { return d_ * d_ - 1; }
  double chi() const { return -1.0 / (d_ * d_ - 1); }
  const SuBasis &basis() const { return basis_; }
  const std::vector<Matrix> &kraus() const { return kraus_; }
  KrausChannel channel() const { return KrausChannel(d_, d_, kraus_); }

  /// (d^2-1)^N * d, as a double so that huge codes do not overflow.
  double dense_dim() const;
  bool fits_dense() const { return dense_dim() <= kDenseCap; }
  /// Tensor factor dimensions of the dense layout: N bulk sites then the edge.
  std::vector<int> site_dims() const;

  /// X(alpha, beta) = <psi_alpha^bra| psi_beta^ket>, where each side carries its own
  /// insertions and site operators. Cost is linear in N.
  Matrix contract(std::span<const BondInsertion> insertions, std::span<const SiteOperator> sites = {}) const;

  /// Dense state with optional ket-side insertions; layout ((i_1 q + i_2) ... + i_N) d + edge.
  Vector encode_dense(const Vector &alpha, std::span<const BondInsertion> insertions = {}) const;
  /// Columns V|alpha> for the computational logical basis (images under insertions).
  Matrix dense_images(std::span<const BondInsertion> insertions = {}) const;
  CodeIsometry dense_isometry() const;

  /// X <- sum_i A^i† X A^i applied k times.
  Matrix heisenberg_power(const Matrix &x, int k) const;

private:
  void require_dense() const;

  int d_;
  int n_;
  SuBasis basis_;
  std::vector<Matrix> kraus_;
  std::vector<Matrix> powers_;  // vec-form superoperator powers, d^2 x d^2
};

struct EdgeState {
  Matrix iterated;
  Matrix closed_form;
};
/// E^n(|alpha><alpha|) and 1/d + 2 chi^n sum_a t^a t^a_{alpha alpha}.
EdgeState edge_state(const VbsCode &code, int alpha, int n);

/// rho_n(i, j) = tr[sigma_n A^j A^i] with sigma_n = E^{n-1}(|alpha><alpha|).
Matrix bulk_state(const VbsCode &code, int alpha, int n);

struct OverlapValue {
  cplx transfer;
  cplx closed_form;
  double residual() const { return std::abs(transfer - closed_form); }
};

/// <psi_alpha| t^a at bond n |psi_beta> against chi^n t^a_{alpha beta}.
OverlapValue detection_overlap(const VbsCode &code, int alpha, int beta, int a, int bond);

/// <psi_alpha| t^a_{m+} t^b_{n+} |psi_beta> for m < n.
OverlapValue correlation(const VbsCode &code, int alpha, int beta, int a, int b, int m, int n);

struct SiteOverlaps {
  /// <T_n^a>, <T_n^a t^b_{N+1}>, <T_m^a T_n^b>, each from bond-insertion expansion.
  cplx single, with_edge, pair;
  /// Same quantities contracted with the adjoint generators placed directly on the sites.
  cplx single_site, with_edge_site, pair_site;
  cplx single_closed, with_edge_closed, pair_closed;
  double max_residual() const;
};
/// Requires 1 <= m < n <= N.
SiteOverlaps site_operator_overlaps(const VbsCode &code, int alpha, int beta, int a, int b, int m, int n);

struct ClosedFormResiduals {
  double edge = 0;    ///< iterated channel vs closed form, every alpha and n
  double detect = 0;  ///< every a and bond
  double corr = 0;    ///< every a, b and m < n
  double site = 0;    ///< every a, b and 1 <= m < n <= N, all three correlators
  double sum_rule = 0;
  double max() const;
};
/// Worst closed-form residual of every overlap family over all indices and logical
/// entries. `include_site` toggles the (costlier) site-operator correlators.
ClosedFormResiduals closed_form_residuals(const VbsCode &code, bool include_site = true);

/// |t^a_{alpha beta} - (edge term + sum_n <T_n^a>)|.
double sum_rule_check(const VbsCode &code, int a, int alpha, int beta);

/// (chi/N)(1 - chi^N)/(1 - chi).
double eta(int d, int n);
/// |chi| / (N (1 - |chi|)).
double eta_bound(int d, int n);

struct EffectiveNoise {
  KrausChannel mixture;
  Matrix unitary_approx;
  double discrepancy;
};
/// Mixture of e^{i chi^n sum_k eps_k t^k} over `bonds` (default 1..N) against
/// e^{i eta sum_k eps_k t^k}, with eta the mean of chi^n over the bonds.
EffectiveNoise effective_noise_channel(const VbsCode &code, std::span<const double> eps,
                                       std::span<const int> bonds = {});

struct CovariantGate {
  std::vector<Matrix> physical_factors;  ///< N adjoint factors, then the edge factor g
  Matrix logical;                        ///< V† (R^{⊗N} ⊗ g) V
  double covariance_residual;            ///< max_alpha 1 - |<psi_{g alpha}| U |psi_alpha>|
  double leakage;                        ///< || U V - V logical ||
};
CovariantGate covariant_gate(const VbsCode &code, const Matrix &g);
/// Dense oracle for the same quantities; requires the code to fit the dense cap.
CovariantGate covariant_gate_dense(const VbsCode &code, const Matrix &g);

struct ErasureBound {
  double delta_t;
  double bound;
};
/// 1 / (N * max_a spectral range of T^a); scale only.
ErasureBound erasure_bound(const VbsCode &code);

/// Bond-error model: E_0 = sqrt(1-p) 1 and sqrt(p/N) A^a at bond n for n = 1..N.
/// Error j >= 1 is (n, a) with j = 1 + (n-1)(d^2-1) + a.
std::vector<BondInsertion> bond_errors(const VbsCode &code, double p);
ErrorGram bond_error_gram(const VbsCode &code, double p);
/// Same blocks through dense images; requires the dense cap.
ErrorGram bond_error_gram_dense(const VbsCode &code, double p);

} // namespace qx
