#include <cmath>

#include "doctest.h"
#include "qx/quantum_ops.hpp"
#include "qx/rng.hpp"
#include "qx/vbs_code.hpp"

using namespace qx;

namespace {

double max_abs(const Matrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix random_density(int d, Rng &rng) {
  Matrix g(d, d);
  for(int i = 0; i < d; ++i)
    for(int j = 0; j < d; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

KrausChannel amplitude_damping(double gamma) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel(2, 2, {k0, k1});
}

} // namespace

TEST_CASE("apply_channel") {
  Rng rng(5);
  Matrix rho = random_density(3, rng);
  CHECK(max_abs(apply_channel(KrausChannel::identity(3), rho) - rho) < 1e-15);

  VbsCode code(2, 1);
  auto e = code.channel();
  Matrix half = Matrix::Identity(2, 2) / 2.0;
  CHECK(max_abs(apply_channel(e, half) - half) < 1e-15);
  const Matrix &t3 = code.basis().generator(2);
  CHECK(max_abs(apply_channel(e, t3) + t3 / 3.0) < 1e-15);

  CHECK_THROWS_AS(apply_channel(e, Matrix::Identity(3, 3)), Error);
}

TEST_CASE("channel preserves trace and hermiticity") {
  Rng rng(6);
  auto ch = amplitude_damping(0.3);
  Matrix rho = random_density(2, rng);
  Matrix out = apply_channel(ch, rho);
  CHECK(std::abs(out.trace() - cplx(1)) < 1e-14);
  CHECK(max_abs(out - out.adjoint()) < 1e-15);
}

TEST_CASE("dilation isometry") {
  Matrix u = expi_hermitian(SuBasis(2).generator(0), 0.7);
  CHECK(max_abs(dilation_isometry(KrausChannel::unitary(u)) - u) < 1e-15);

  VbsCode code(2, 1);
  Matrix w = dilation_isometry(code.channel());
  CHECK(w.rows() == 6);
  CHECK(w.cols() == 2);
  CHECK(max_abs(w.adjoint() * w - Matrix::Identity(2, 2)) < 1e-12);

  // Tracing the leading environment factor of W rho W† reproduces the channel.
  Rng rng(7);
  Matrix rho = random_density(2, rng);
  const int dims[] = {3, 2};
  const int keep[] = {1};
  CHECK(max_abs(partial_trace(w * rho * w.adjoint(), dims, keep) - apply_channel(code.channel(), rho)) < 1e-12);

  KrausChannel lossy(2, 2, {Matrix::Identity(2, 2) * 0.5});
  CHECK_THROWS_AS(dilation_isometry(lossy), Error);
}

TEST_CASE("choi matrix") {
  Vector omega = max_entangled(3);
  CHECK(max_abs(choi_matrix(KrausChannel::identity(3)) - omega * omega.adjoint()) < 1e-15);
  CHECK(max_abs(choi_matrix(KrausChannel::completely_depolarizing(2)) - Matrix::Identity(4, 4) / 4.0) < 1e-15);
  auto ch = amplitude_damping(0.4);
  Matrix c = choi_matrix(ch);
  CHECK(std::abs(c.trace() - cplx(1)) < 1e-15);
  CHECK(hermitian_eigen(c).values.minCoeff() > -1e-15);
  KrausChannel rect(2, 3, {Matrix::Zero(3, 2)});
  CHECK_THROWS_AS(choi_matrix(rect), Error);
}

TEST_CASE("choi matrix reproduces the channel action") {
  Rng rng(8);
  for(int d : {2, 3}) {
    std::vector<Matrix> ks;
    for(int k = 0; k < 3; ++k) ks.push_back(random_density(d, rng) * 0.5);
    KrausChannel ch(d, d, ks);
    Matrix c = choi_matrix(ch);
    Matrix rho = random_density(d, rng);
    // system factor first: ch(rho) = d * tr_ref[(1 ⊗ rho^T) C]
    const int dims[] = {d, d};
    const int keep[] = {0};
    Matrix via = double(d) * partial_trace(kron(Matrix::Identity(d, d), rho.transpose()) * c, dims, keep);
    CHECK(max_abs(via - apply_channel(ch, rho)) < 1e-10);
  }
}

TEST_CASE("trace distance") {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 0.6;
  a(1, 1) = 0.4;
  b(0, 0) = 0.4;
  b(1, 1) = 0.6;
  CHECK(trace_distance(a, b) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(trace_distance(a, a) == 0.0);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(trace_distance(a, Matrix::Zero(3, 3)), Error);

  Rng rng(9);
  for(int trial = 0; trial < 20; ++trial) {
    Matrix x = random_density(3, rng), y = random_density(3, rng), z = random_density(3, rng);
    CHECK(std::abs(trace_distance(x, y) - trace_distance(y, x)) < 1e-12);
    CHECK(trace_distance(x, z) <= trace_distance(x, y) + trace_distance(y, z) + 1e-10);
  }
}

TEST_CASE("entanglement fidelity") {
  auto id = entanglement_fidelity(KrausChannel::identity(2));
  CHECK(id.fidelity == doctest::Approx(1.0));
  CHECK(id.bures == doctest::Approx(0.0));
  CHECK(entanglement_fidelity(KrausChannel::completely_depolarizing(2)).fidelity == doctest::Approx(0.25));
  Rng rng(10);
  Matrix u = haar_su(3, rng);
  Vector omega = max_entangled(3);
  double direct = (omega.adjoint() * choi_matrix(KrausChannel::unitary(u)) * omega)(0, 0).real();
  CHECK(entanglement_fidelity(KrausChannel::unitary(u)).fidelity == doctest::Approx(std::norm(u.trace()) / 9.0));
  CHECK(direct == doctest::Approx(std::norm(u.trace()) / 9.0));
}

TEST_CASE("partial trace") {
  Rng rng(11);
  Matrix rho = random_density(2, rng), sigma = random_density(3, rng);
  const int dims[] = {2, 3};
  const int first[] = {0};
  const int second[] = {1};
  CHECK(max_abs(partial_trace(kron(rho, sigma), dims, first) - rho) < 1e-14);
  CHECK(max_abs(partial_trace(kron(rho, sigma), dims, second) - sigma) < 1e-14);

  Vector bell = max_entangled(2);
  const int two[] = {2, 2};
  CHECK(max_abs(partial_trace(bell * bell.adjoint(), two, first) - Matrix::Identity(2, 2) / 2.0) < 1e-15);

  const int bad_keep[] = {1, 0};
  CHECK_THROWS_AS(partial_trace(kron(rho, sigma), dims, bad_keep), Error);
  CHECK_THROWS_AS(partial_trace(kron(rho, sigma), std::span<const int>{}, first), Error);
  const int wrong[] = {2, 2};
  CHECK_THROWS_AS(partial_trace(kron(rho, sigma), wrong, first), Error);
}

TEST_CASE("dense VBS edge marginal matches the closed form") {
  VbsCode code(2, 3);
  Vector psi = code.encode_dense(Vector::Unit(2, 0));
  auto dims = code.site_dims();
  const int keep[] = {3};
  Matrix edge = partial_trace(psi * psi.adjoint(), dims, keep);
  CHECK(max_abs(edge - edge_state(code, 0, 3).closed_form) < 1e-12);
}

TEST_CASE("cptp residuals") {
  for(int d = 2; d <= 4; ++d) {
    auto r = cptp_residuals(VbsCode(d, 1).channel());
    CHECK(r.tp < 1e-12);
    CHECK(r.unital < 1e-12);
  }
  auto ad = cptp_residuals(amplitude_damping(0.3));
  CHECK(ad.tp < 1e-15);
  CHECK(ad.unital > 0.1);
  CHECK(cptp_residuals(KrausChannel(2, 2)).tp == doctest::Approx(1.0));
}

TEST_CASE("apply_product equals the explicit Kronecker product") {
  Rng rng(12);
  Matrix a = haar_su(2, rng), b = haar_su(3, rng);
  Matrix states(6, 2);
  for(int i = 0; i < 6; ++i)
    for(int j = 0; j < 2; ++j) states(i, j) = cplx(rng.normal(), rng.normal());
  const int dims[] = {2, 3};
  const Matrix factors[] = {a, b};
  CHECK(max_abs(apply_product(states, dims, factors) - kron(a, b) * states) < 1e-14);
}

TEST_CASE("compose runs first then second") {
  Matrix x = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  auto both = compose(KrausChannel::unitary(x), KrausChannel::unitary(z));
  CHECK(max_abs(both.kraus()[0] - z * x) < 1e-15);
}
