#pragma once

#include <vector>

#include "qx/linalg.hpp"

namespace qx {

/// Dense rank-3 real tensor indexed (a, b, c), each in [0, n).
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int extent() const { return n_; }
  double &operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Generalized Gell-Mann basis of su(d) together with its structure constants.
///
/// Generators are 0-indexed here; the mathematical label a corresponds to index a-1.
/// Order: for k = 1..d-1, the symmetric then antisymmetric generator of every pair
/// (j, k) with j < k (j ascending), followed by the k-th diagonal generator
///   diag(1, ..., 1, -k, 0, ..., 0) / sqrt(2k(k+1)).
/// At d = 2 this gives Pauli/2 in x, y, z order; at d = 3 the standard lambda_1..lambda_8 / 2.
/// Normalization: tr(t^a t^b) = delta_ab / 2.
class SuBasis {
public:
  explicit SuBasis(int d);

  int dim() const { return d_; }
  int size() const { return static_cast<int>(generators_.size()); }
  const Matrix &generator(int a) const { return generators_.at(static_cast<std::size_t>(a)); }
  const std::vector<Matrix> &generators() const { return generators_; }

  /// f_abc = -2i tr([t^a, t^b] t^c)
  const Tensor3 &f() const { return f_; }
  /// d_abc = 2 tr({t^a, t^b} t^c)
  const Tensor3 &d_sym() const { return d_sym_; }
  /// h_abc = d_abc + i f_abc, so that t^a t^b = delta_ab/(2d) + h_abc t^c / 2.
  cplx h(int a, int b, int c) const { return {d_sym_(a, b, c), f_(a, b, c)}; }

  /// Coefficients x_a = 2 tr(t^a m) of the traceless part of m.
  RealVector coordinates(const Matrix &m) const;

private:
  int d_;
  std::vector<Matrix> generators_;
  Tensor3 f_;
  Tensor3 d_sym_;
};

SuBasis gell_mann_basis(int d);

struct StructureConstants {
  Tensor3 f;
  Tensor3 d_sym;
};

/// Recomputes f and d_sym from the generator traces. Throws inconsistent_basis if either
/// has an imaginary residue above `tolerance`.
StructureConstants structure_constants(const std::vector<Matrix> &generators, double tolerance = 1e-12);

/// Adjoint-representation generator (T^a)_bc = -i f_abc. Hermitian, purely imaginary.
Matrix adjoint_generator(const SuBasis &basis, int a);

/// Adjoint representation R(g) of a d x d unitary: g t^i g† = sum_j R_ji t^j.
/// R is real special orthogonal and R(g1 g2) = R(g1) R(g2).
RealMatrix adjoint_group_element(const SuBasis &basis, const Matrix &g, double tolerance = 1e-10);

/// Residuals of every SuBasis invariant, each the maximal entrywise deviation.
struct AlgebraResiduals {
  double hermitian = 0;
  double traceless = 0;
  double orthonormality = 0;
  double commutator = 0;
  double anticommutator = 0;
  double casimir = 0;
  double f_antisymmetry = 0;
  double d_symmetry = 0;
  double jacobi = 0;
  double fierz = 0;

  double max() const;
};

AlgebraResiduals algebra_residuals(const SuBasis &basis);

} // namespace qx
