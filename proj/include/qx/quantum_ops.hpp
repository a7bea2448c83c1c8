#pragma once

#include <span>
#include <vector>

#include "qx/linalg.hpp"

namespace qx {

/// Completely positive map stored as a Kraus list of out_dim x in_dim matrices.
/// Trace preservation is checked on demand (see cptp_residuals), never assumed.
class KrausChannel {
public:
  KrausChannel(int in_dim, int out_dim, std::vector<Matrix> kraus = {});

  static KrausChannel identity(int dim);
  static KrausChannel unitary(const Matrix &u);
  /// rho -> tr(rho) 1/d, built from the d^2 matrix units |i><j| / sqrt(d).
  static KrausChannel completely_depolarizing(int dim);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const std::vector<Matrix> &kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  /// Sum K† K; should equal the identity for trace-preserving channels.
  Matrix tp_operator() const;

private:
  int in_dim_;
  int out_dim_;
  std::vector<Matrix> kraus_;
};

Matrix apply_channel(const KrausChannel &ch, const Matrix &rho);

/// Kraus composition `second ∘ first`.
KrausChannel compose(const KrausChannel &first, const KrausChannel &second);

/// Stinespring isometry W = [K_0; K_1; ...] of size (#Kraus * out_dim) x in_dim.
/// Environment index is the leading tensor factor: row = k * out_dim + r.
Matrix dilation_isometry(const KrausChannel &ch, double tolerance = 1e-10);

/// |omega> = sum_i |ii> / sqrt(d); the system factor comes first.
Vector max_entangled(int dim);

/// C = (ch ⊗ id)(omega), system factor first, reference second.
Matrix choi_matrix(const KrausChannel &ch);

/// (1/2) * trace norm of (rho - sigma), computed on the Hermitian part of the difference.
double trace_distance(const Matrix &rho, const Matrix &sigma);

struct FidelityResult {
  double fidelity;
  double bures;
};
/// F = <omega| C |omega> and d_B = sqrt(1 - F).
FidelityResult entanglement_fidelity(const KrausChannel &ch);

/// Partial trace keeping the factors listed in `keep` (in ascending order of the result).
Matrix partial_trace(const Matrix &rho, std::span<const int> dims, std::span<const int> keep);

struct CptpResiduals {
  double tp;
  double unital;
};
/// Operator norms of sum K†K - 1 and sum K K† - 1.
CptpResiduals cptp_residuals(const KrausChannel &ch);

/// Applies `op` to tensor factor `site` of a state vector with factor dimensions `dims`.
Vector apply_local(const Vector &state, std::span<const int> dims, int site, const Matrix &op);

/// Applies a product operator (one factor per tensor site) to every column of `states`.
Matrix apply_product(const Matrix &states, std::span<const int> dims, std::span<const Matrix> factors);

} // namespace qx
