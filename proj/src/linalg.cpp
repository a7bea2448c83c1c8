#include "qx/linalg.hpp"

#include <cmath>

namespace qx {

double operator_norm(const Matrix &m) {
  if(m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const Matrix &m) {
  if(m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix hermitian_part(const Matrix &m) { return 0.5 * (m + m.adjoint()); }

HermitianEigen hermitian_eigen(const Matrix &m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if(es.info() != Eigen::Success) fail(ErrorCode::numerical_failure, "hermitian eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix expi_hermitian(const Matrix &h, double scale) {
  auto eig = hermitian_eigen(h);
  Vector phases(eig.values.size());
  for(Eigen::Index k = 0; k < eig.values.size(); ++k) phases(k) = std::exp(kI * (scale * eig.values(k)));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix sqrt_psd(const Matrix &m, double tolerance) {
  auto eig = hermitian_eigen(m);
  Vector roots(eig.values.size());
  for(Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double v = eig.values(k);
    if(v < -tolerance) fail(ErrorCode::numerical_failure, "sqrt_psd: operand has eigenvalue " + std::to_string(v));
    roots(k) = std::sqrt(std::max(v, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

Matrix nearest_unitary(const Matrix &m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for(Eigen::Index i = 0; i < a.rows(); ++i)
    for(Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for(const auto &f : factors) out = kron(out, f);
  return out;
}

bool is_unitary(const Matrix &u, double tolerance) {
  if(u.rows() != u.cols()) return false;
  if(u.size() == 0) return true;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_hermitian(const Matrix &h, double tolerance) {
  if(h.rows() != h.cols()) return false;
  if(h.size() == 0) return true;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

cplx determinant(const Matrix &m) { return m.determinant(); }

} // namespace qx
