#include "qx/su_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qx {

namespace {

std::vector<Matrix> build_generators(int d) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d * d - 1));
  for(int k = 1; k < d; ++k) {
    for(int j = 0; j < k; ++j) {
      Matrix s = Matrix::Zero(d, d);
      s(j, k) = s(k, j) = 0.5;
      out.push_back(s);
      Matrix a = Matrix::Zero(d, d);
      a(j, k) = -0.5 * kI;
      a(k, j) = 0.5 * kI;
      out.push_back(a);
    }
    Matrix diag = Matrix::Zero(d, d);
    double norm = std::sqrt(2.0 * k * (k + 1));
    for(int i = 0; i < k; ++i) diag(i, i) = 1.0 / norm;
    diag(k, k) = -static_cast<double>(k) / norm;
    out.push_back(diag);
  }
  return out;
}

} // namespace

SuBasis::SuBasis(int d) : d_(d) {
  if(d < 2) fail(ErrorCode::invalid_dimension, "su(d) basis requires d >= 2, got " + std::to_string(d));
  generators_ = build_generators(d);
  auto sc = structure_constants(generators_);
  f_ = std::move(sc.f);
  d_sym_ = std::move(sc.d_sym);
}

RealVector SuBasis::coordinates(const Matrix &m) const {
  RealVector x(size());
  for(int a = 0; a < size(); ++a) x(a) = 2.0 * (generators_[a] * m).trace().real();
  return x;
}

SuBasis gell_mann_basis(int d) { return SuBasis(d); }

StructureConstants structure_constants(const std::vector<Matrix> &generators, double tolerance) {
  int n = static_cast<int>(generators.size());
  StructureConstants sc{Tensor3(n), Tensor3(n)};
  for(int a = 0; a < n; ++a) {
    for(int b = 0; b < n; ++b) {
      Matrix ab = generators[a] * generators[b];
      Matrix ba = generators[b] * generators[a];
      Matrix comm = ab - ba;
      Matrix anti = ab + ba;
      for(int c = 0; c < n; ++c) {
        cplx fv = -2.0 * kI * (comm * generators[c]).trace();
        cplx dv = 2.0 * (anti * generators[c]).trace();
        if(std::abs(fv.imag()) > tolerance || std::abs(dv.imag()) > tolerance)
          fail(ErrorCode::inconsistent_basis, "structure constants have an imaginary residue");
        sc.f(a, b, c) = fv.real();
        sc.d_sym(a, b, c) = dv.real();
      }
    }
  }
  return sc;
}

Matrix adjoint_generator(const SuBasis &basis, int a) {
  int n = basis.size();
  if(a < 0 || a >= n) fail(ErrorCode::index_out_of_range, "adjoint_generator: index " + std::to_string(a));
  Matrix t(n, n);
  for(int b = 0; b < n; ++b)
    for(int c = 0; c < n; ++c) t(b, c) = -kI * basis.f()(a, b, c);
  return t;
}

RealMatrix adjoint_group_element(const SuBasis &basis, const Matrix &g, double tolerance) {
  if(g.rows() != basis.dim() || g.cols() != basis.dim())
    fail(ErrorCode::dimension_mismatch, "adjoint_group_element: unitary has wrong dimension");
  if(!is_unitary(g, tolerance)) fail(ErrorCode::invalid_unitary, "adjoint_group_element: input is not unitary");
  int n = basis.size();
  RealMatrix r(n, n);
  for(int i = 0; i < n; ++i) {
    Matrix rotated = g * basis.generator(i) * g.adjoint();
    for(int j = 0; j < n; ++j) r(j, i) = 2.0 * (basis.generator(j) * rotated).trace().real();
  }
  return r;
}

double AlgebraResiduals::max() const {
  return std::max({hermitian, traceless, orthonormality, commutator, anticommutator, casimir, f_antisymmetry,
                   d_symmetry, jacobi, fierz});
}

AlgebraResiduals algebra_residuals(const SuBasis &basis) {
  AlgebraResiduals r;
  const int d = basis.dim();
  const int n = basis.size();
  const auto &t = basis.generators();
  const auto &f = basis.f();
  const auto &ds = basis.d_sym();
  const Matrix id = Matrix::Identity(d, d);

  Matrix casimir = Matrix::Zero(d, d);
  for(int a = 0; a < n; ++a) {
    r.hermitian = std::max(r.hermitian, (t[a] - t[a].adjoint()).cwiseAbs().maxCoeff());
    r.traceless = std::max(r.traceless, std::abs(t[a].trace()));
    casimir += t[a] * t[a];
    for(int b = 0; b < n; ++b) {
      double expected = a == b ? 0.5 : 0.0;
      r.orthonormality = std::max(r.orthonormality, std::abs((t[a] * t[b]).trace() - expected));
      Matrix comm = t[a] * t[b] - t[b] * t[a];
      Matrix anti = t[a] * t[b] + t[b] * t[a];
      Matrix comm_expansion = Matrix::Zero(d, d);
      Matrix anti_expansion = (a == b ? 1.0 / d : 0.0) * id;
      for(int c = 0; c < n; ++c) {
        comm_expansion += kI * f(a, b, c) * t[c];
        anti_expansion += ds(a, b, c) * t[c];
        // totally antisymmetric / symmetric under the two generating transpositions
        r.f_antisymmetry = std::max({r.f_antisymmetry, std::abs(f(a, b, c) + f(b, a, c)),
                                     std::abs(f(a, b, c) + f(a, c, b))});
        r.d_symmetry = std::max({r.d_symmetry, std::abs(ds(a, b, c) - ds(b, a, c)),
                                 std::abs(ds(a, b, c) - ds(a, c, b))});
      }
      r.commutator = std::max(r.commutator, (comm - comm_expansion).cwiseAbs().maxCoeff());
      r.anticommutator = std::max(r.anticommutator, (anti - anti_expansion).cwiseAbs().maxCoeff());
    }
  }
  r.casimir = (casimir - (double(n) / (2.0 * d)) * id).cwiseAbs().maxCoeff();

  // Jacobi: sum_e f_abe f_ecd + f_bce f_ead + f_cae f_ebd = 0
  for(int a = 0; a < n; ++a)
    for(int b = 0; b < n; ++b)
      for(int c = 0; c < n; ++c)
        for(int dd = 0; dd < n; ++dd) {
          double s = 0;
          for(int e = 0; e < n; ++e) s += f(a, b, e) * f(e, c, dd) + f(b, c, e) * f(e, a, dd) + f(c, a, e) * f(e, b, dd);
          r.jacobi = std::max(r.jacobi, std::abs(s));
        }

  // Fierz: sum_a (t^a)_ij (t^a)_kl = (delta_il delta_jk - delta_ij delta_kl / d) / 2
  for(int i = 0; i < d; ++i)
    for(int j = 0; j < d; ++j)
      for(int k = 0; k < d; ++k)
        for(int l = 0; l < d; ++l) {
          cplx s = 0;
          for(int a = 0; a < n; ++a) s += t[a](i, j) * t[a](k, l);
          double expected = 0.5 * ((i == l && j == k ? 1.0 : 0.0) - (i == j && k == l ? 1.0 / d : 0.0));
          r.fierz = std::max(r.fierz, std::abs(s - expected));
        }
  return r;
}

} // namespace qx
