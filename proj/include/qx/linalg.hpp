#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qx/error.hpp"

namespace qx {

using cplx   = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Largest singular value.
double operator_norm(const Matrix &m);

// Sum of singular values.
double trace_norm(const Matrix &m);

// (m + m†)/2
Matrix hermitian_part(const Matrix &m);

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix &m);

/// exp(i * scale * h) for Hermitian h.
Matrix expi_hermitian(const Matrix &h, double scale = 1.0);

/// Principal square root of a positive semidefinite matrix. Eigenvalues below
/// -tolerance raise numerical_failure; those in (-tolerance, 0) are clipped.
Matrix sqrt_psd(const Matrix &m, double tolerance = 1e-10);

/// Nearest unitary in the Frobenius sense (unitary factor of the polar decomposition).
Matrix nearest_unitary(const Matrix &m);

Matrix kron(const Matrix &a, const Matrix &b);
Matrix kron_all(std::span<const Matrix> factors);

bool is_unitary(const Matrix &u, double tolerance);
bool is_hermitian(const Matrix &h, double tolerance);

/// Complex determinant; used for special-unitary checks.
cplx determinant(const Matrix &m);

} // namespace qx
