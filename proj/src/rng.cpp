#include "qx/rng.hpp"

#include <cmath>
#include <numbers>

namespace qx {

std::uint64_t stable_hash(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix haar_su(int d, Rng &rng) {
  if(d < 1) fail(ErrorCode::invalid_dimension, "haar_su: d must be positive");
  Matrix z(d, d);
  for(int i = 0; i < d; ++i)
    for(int j = 0; j < d; ++j) z(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for(int k = 0; k < d; ++k) {
    cplx diag = r(k, k);
    double mag = std::abs(diag);
    q.col(k) *= mag > 0 ? diag / mag : cplx(1);
  }
  cplx det = determinant(q);
  return q * std::pow(det, -1.0 / d);
}

Matrix random_su_exp(const SuBasis &basis, Rng &rng, double scale) {
  Matrix h = Matrix::Zero(basis.dim(), basis.dim());
  for(const auto &t : basis.generators()) h += rng.normal() * scale * t;
  return expi_hermitian(h);
}

} // namespace qx
