#include <cmath>
#include <map>

#include "doctest.h"
#include "qx/rng.hpp"
#include "qx/vbs_code.hpp"

using namespace qx;

namespace {

double max_abs(const Matrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Brute force: amplitude of |i_1 ... i_N, e> is (K_N A^{i_N} ... K_1 A^{i_1} K_0 |alpha>)_e,
// with K_n the product of the bond-n operators. No shared code with the library encoder.
Vector brute_state(const VbsCode &code, int alpha, const std::map<int, Matrix> &bond_ops = {}) {
  const int d = code.d(), q = code.site_dim(), n = code.n();
  long configs = 1;
  for(int s = 0; s < n; ++s) configs *= q;
  Vector out(configs * d);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for(long c = 0; c < configs; ++c) {
    long rem = c;
    for(int s = n - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % q);
      rem /= q;
    }
    Vector v = Vector::Unit(d, alpha);
    if(auto it = bond_ops.find(0); it != bond_ops.end()) v = it->second * v;
    for(int s = 1; s <= n; ++s) {
      v = code.kraus()[static_cast<std::size_t>(digits[static_cast<std::size_t>(s - 1)])] * v;
      if(auto it = bond_ops.find(s); it != bond_ops.end()) v = it->second * v;
    }
    out.segment(c * d, d) = v;
  }
  return out;
}

cplx dense_overlap(const VbsCode &code, int alpha, int beta, const std::map<int, Matrix> &ket_ops) {
  return brute_state(code, alpha).dot(brute_state(code, beta, ket_ops));
}

} // namespace

TEST_CASE("construction") {
  VbsCode two(2, 3);
  const cplx i{0, 1};
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  CHECK(max_abs(two.kraus()[0] - sx / std::sqrt(3.0)) < 1e-15);
  CHECK(max_abs(two.kraus()[1] - sy / std::sqrt(3.0)) < 1e-15);
  CHECK(max_abs(two.kraus()[2] - sz / std::sqrt(3.0)) < 1e-15);
  CHECK(two.chi() == doctest::Approx(-1.0 / 3));
  VbsCode three(3, 2);
  CHECK(three.kraus().size() == 8);
  CHECK(three.chi() == doctest::Approx(-1.0 / 8));
  for(int d = 2; d <= 5; ++d) {
    VbsCode c(d, 1);
    auto r = cptp_residuals(c.channel());
    CHECK(r.tp < 1e-12);
    CHECK(r.unital < 1e-12);
    for(const auto &t : c.basis().generators()) CHECK(max_abs(apply_channel(c.channel(), t) - c.chi() * t) < 1e-12);
  }
  CHECK_THROWS_AS(VbsCode(1, 3), Error);
  CHECK_THROWS_AS(VbsCode(2, 0), Error);
}

TEST_CASE("dense encoding") {
  VbsCode one(2, 1);
  Vector psi = one.encode_dense(Vector::Unit(2, 0));
  REQUIRE(psi.size() == 6);
  for(int i = 0; i < 3; ++i)
    for(int b = 0; b < 2; ++b) CHECK(std::abs(psi(i * 2 + b) - one.kraus()[static_cast<std::size_t>(i)](b, 0)) < 1e-15);

  for(auto [d, n] : {std::pair{2, 3}, {2, 5}, {3, 2}}) {
    VbsCode code(d, n);
    Matrix v = code.dense_images();
    CHECK(max_abs(v.adjoint() * v - Matrix::Identity(d, d)) < 1e-12);
    for(int a = 0; a < d; ++a) CHECK(max_abs(v.col(a) - brute_state(code, a)) < 1e-14);
  }
  auto iso = VbsCode(2, 3).dense_isometry();
  CHECK(iso.physical_dim() == 54);
  CHECK(iso.logical_dim() == 2);
  Matrix p = iso.projector();
  CHECK(max_abs(p * p - p) < 1e-12);

  VbsCode big(2, 13);
  CHECK_FALSE(big.fits_dense());
  CHECK_THROWS_AS(big.encode_dense(Vector::Unit(2, 0)), Error);
  CHECK(VbsCode(2, 12).fits_dense());
  CHECK(VbsCode(3, 5).fits_dense());
}

TEST_CASE("dense encoding with insertions matches brute force") {
  VbsCode code(2, 4);
  Rng rng(2);
  Matrix x = haar_su(2, rng), y = haar_su(2, rng);
  const BondInsertion ins[] = {{1, x}, {4, y}};
  std::map<int, Matrix> ops{{1, x}, {4, y}};
  CHECK(max_abs(code.encode_dense(Vector::Unit(2, 1), ins) - brute_state(code, 1, ops)) < 1e-14);
}

TEST_CASE("edge state") {
  VbsCode code(2, 8);
  auto zero = edge_state(code, 0, 0);
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  CHECK(max_abs(zero.iterated - p0) < 1e-15);
  CHECK(max_abs(zero.closed_form - p0) < 1e-15);

  auto one = edge_state(code, 0, 1);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0 / 3;
  expect(1, 1) = 2.0 / 3;
  CHECK(max_abs(one.iterated - expect) < 1e-15);
  CHECK(max_abs(one.closed_form - expect) < 1e-15);

  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  for(int n = 1; n <= 8; ++n) {
    auto e = edge_state(code, 1, n);
    CHECK(max_abs(e.iterated - e.closed_form) < 1e-12);
    CHECK(trace_distance(e.iterated, mixed) == doctest::Approx(std::pow(1.0 / 3, n) / 2).epsilon(1e-10));
  }
  CHECK_THROWS_AS(edge_state(code, 0, 9), Error);
  CHECK_THROWS_AS(edge_state(code, 2, 1), Error);
}

TEST_CASE("bulk state") {
  VbsCode code(2, 3);
  for(int alpha = 0; alpha < 2; ++alpha) {
    Vector psi = code.encode_dense(Vector::Unit(2, alpha));
    auto dims = code.site_dims();
    for(int n = 1; n <= 3; ++n) {
      const int keep[] = {n - 1};
      Matrix rho = bulk_state(code, alpha, n);
      CHECK(max_abs(rho - partial_trace(psi * psi.adjoint(), dims, keep)) < 1e-12);
      CHECK(std::abs(rho.trace() - cplx(1)) < 1e-12);
      CHECK(hermitian_eigen(rho).values.minCoeff() > -1e-12);
    }
  }
  VbsCode three(3, 3);
  Vector psi = three.encode_dense(Vector::Unit(3, 2));
  auto dims = three.site_dims();
  const int keep[] = {2};
  CHECK(max_abs(bulk_state(three, 2, 3) - partial_trace(psi * psi.adjoint(), dims, keep)) < 1e-12);

  VbsCode longer(2, 16);
  const Matrix flat = Matrix::Identity(3, 3) / 3.0;
  double previous = 1;
  for(int n = 1; n <= 16; ++n) {
    double dist = trace_distance(bulk_state(longer, 0, n), flat);
    CHECK(dist < previous);
    previous = dist;
  }
  CHECK(previous < 1e-6);
  CHECK_THROWS_AS(bulk_state(code, 0, 0), Error);
}

TEST_CASE("detection overlap") {
  VbsCode code(2, 3);
  for(int a = 0; a < 3; ++a) {
    auto zero = detection_overlap(code, 0, 1, a, 0);
    CHECK(std::abs(zero.transfer - code.basis().generator(a)(0, 1)) < 1e-15);
  }
  auto ex = detection_overlap(code, 0, 0, 2, 1);
  CHECK(std::abs(ex.transfer - cplx(-1.0 / 6)) < 1e-15);
  CHECK(std::abs(dense_overlap(code, 0, 0, {{1, code.basis().generator(2)}}) - cplx(-1.0 / 6)) < 1e-14);
  auto edge = detection_overlap(code, 1, 1, 2, 3);
  CHECK(std::abs(edge.transfer - std::pow(code.chi(), 3) * code.basis().generator(2)(1, 1)) < 1e-15);
  for(int n = 0; n <= 3; ++n)
    for(int a = 0; a < 3; ++a)
      for(int al = 0; al < 2; ++al)
        for(int be = 0; be < 2; ++be) {
          auto v = detection_overlap(code, al, be, a, n);
          CHECK(v.residual() < 1e-12);
          CHECK(std::abs(v.transfer - dense_overlap(code, al, be, {{n, code.basis().generator(a)}})) < 1e-12);
        }
  CHECK_THROWS_AS(detection_overlap(code, 0, 0, 0, 4), Error);
  CHECK_THROWS_AS(detection_overlap(code, 0, 0, 3, 1), Error);
}

TEST_CASE("two-point correlation") {
  VbsCode two(2, 5);
  for(int m = 0; m < 5; ++m)
    for(int n = m + 1; n <= 5; ++n)
      for(int a = 0; a < 3; ++a) {
        auto v = correlation(two, 0, 0, a, a, m, n);
        CHECK(std::abs(v.transfer - std::pow(two.chi(), n - m) / 4) < 1e-14);
        CHECK(std::abs(correlation(two, 0, 1, a, a, m, n).transfer) < 1e-14);
      }

  VbsCode three(3, 3);
  auto ex = correlation(three, 0, 0, 0, 0, 1, 2);
  CHECK(std::abs(ex.transfer - cplx(-5.0 / 256)) < 1e-15);
  CHECK(std::abs(ex.closed_form - cplx(-5.0 / 256)) < 1e-15);
  // bond m carries t^a and acts first on the ket
  const auto &b = three.basis();
  for(int a : {0, 3, 7})
    for(int c : {1, 2, 6}) {
      auto v = correlation(three, 1, 2, a, c, 0, 3);
      cplx dense = dense_overlap(three, 1, 2, {{0, b.generator(a)}, {3, b.generator(c)}});
      CHECK(std::abs(v.transfer - dense) < 1e-12);
      CHECK(v.residual() < 1e-12);
    }
  CHECK_THROWS_AS(correlation(two, 0, 0, 0, 0, 2, 2), Error);
  CHECK_THROWS_AS(correlation(two, 0, 0, 0, 0, 3, 1), Error);
}

TEST_CASE("site operator correlators") {
  VbsCode code(2, 4);
  const SiteOperator first[] = {{1, adjoint_generator(code.basis(), 2)}};
  CHECK(std::abs(code.contract({}, first)(0, 0) - cplx(2.0 / 3)) < 1e-15);
  auto ex = site_operator_overlaps(code, 0, 0, 2, 2, 1, 2);
  CHECK(std::abs(ex.single - cplx(-2.0 / 9)) < 1e-15);
  CHECK(ex.max_residual() < 1e-12);

  // telescope: <T_n^a> is the difference of adjacent bond values
  for(int n = 1; n <= 4; ++n) {
    cplx lower = detection_overlap(code, 0, 1, 0, n - 1).transfer;
    cplx upper = detection_overlap(code, 0, 1, 0, n).transfer;
    const SiteOperator site[] = {{n, adjoint_generator(code.basis(), 0)}};
    CHECK(std::abs(code.contract({}, site)(0, 1) - (lower - upper)) < 1e-14);
  }

  auto off = site_operator_overlaps(code, 0, 1, 1, 1, 2, 3);
  CHECK(std::abs(off.with_edge) < 1e-15);
  CHECK(std::abs(off.pair) < 1e-15);
  CHECK(std::abs(off.pair_site) < 1e-15);

  // dense oracle: adjoint generators applied to the physical sites
  VbsCode small(2, 3);
  auto dims = small.site_dims();
  for(int a = 0; a < 3; ++a)
    for(int b = 0; b < 3; ++b) {
      Vector ket = small.encode_dense(Vector::Unit(2, 0));
      Vector bra = ket;
      Vector pair = apply_local(apply_local(ket, dims, 2, adjoint_generator(small.basis(), b)), dims, 0,
                                adjoint_generator(small.basis(), a));
      Vector edge = apply_local(apply_local(ket, dims, 3, small.basis().generator(b)), dims, 2,
                                adjoint_generator(small.basis(), a));
      auto v = site_operator_overlaps(small, 0, 0, a, b, 1, 3);
      auto w = site_operator_overlaps(small, 0, 0, a, b, 2, 3);
      CHECK(std::abs(bra.dot(pair) - v.pair) < 1e-12);
      CHECK(std::abs(bra.dot(edge) - w.with_edge) < 1e-12);
      CHECK(v.max_residual() < 1e-12);
      CHECK(w.max_residual() < 1e-12);
    }
  CHECK_THROWS_AS(site_operator_overlaps(code, 0, 0, 0, 0, 0, 2), Error);
  CHECK_THROWS_AS(site_operator_overlaps(code, 0, 0, 0, 0, 2, 5), Error);
}

TEST_CASE("sum rule") {
  for(int a = 0; a < 3; ++a) CHECK(sum_rule_check(VbsCode(2, 10), a, 0, 0) < 1e-12);
  VbsCode three(3, 5);
  for(int a = 0; a < 8; ++a) CHECK(sum_rule_check(three, a, 0, 2) < 1e-12);
  VbsCode single(2, 1);
  const auto &t = single.basis().generator(0);
  const BondInsertion edge[] = {{1, t}};
  CHECK(max_abs(single.contract(edge) - single.chi() * t) < 1e-15);
  CHECK(sum_rule_check(single, 0, 0, 1) < 1e-15);
}

TEST_CASE("closed forms across all indices") {
  for(auto [d, n] : {std::pair{2, 7}, {3, 4}, {4, 3}}) {
    auto r = closed_form_residuals(VbsCode(d, n));
    CAPTURE(d);
    CHECK(r.max() < 1e-12);
  }
}

TEST_CASE("eta") {
  CHECK(eta(2, 1) == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(eta(2, 4) == doctest::Approx(-5.0 / 81).epsilon(1e-15));
  CHECK(eta(3, 1) == doctest::Approx(-1.0 / 8).epsilon(1e-15));
  for(int d = 2; d <= 8; ++d)
    for(int n = 1; n <= 64; ++n) {
      CHECK(std::abs(eta(d, n)) <= eta_bound(d, n) + 1e-16);
      if(n > 1) CHECK(std::abs(eta(d, n)) < std::abs(eta(d, n - 1)));
      if(d > 2) CHECK(std::abs(eta(d, n)) < std::abs(eta(d - 1, n)));
    }
  // eta is the bond average of chi^n
  double mean = 0;
  for(int n = 1; n <= 6; ++n) mean += std::pow(-1.0 / 8, n) / 6;
  CHECK(eta(3, 6) == doctest::Approx(mean).epsilon(1e-14));
  CHECK_THROWS_AS(eta(1, 3), Error);
  CHECK_THROWS_AS(eta(2, 0), Error);
}

TEST_CASE("effective noise channel") {
  VbsCode code(2, 3);
  const double zero[] = {0, 0, 0};
  auto none = effective_noise_channel(code, zero);
  CHECK(none.discrepancy < 1e-15);
  CHECK(max_abs(none.unitary_approx - Matrix::Identity(2, 2)) < 1e-15);

  const double axis[] = {0, 0, 1};
  double at3 = effective_noise_channel(VbsCode(2, 3), axis).discrepancy;
  double at6 = effective_noise_channel(VbsCode(2, 6), axis).discrepancy;
  CHECK(at6 < at3);
  CHECK(at3 > 0);
  const double axis8[] = {0, 0, 1, 0, 0, 0, 0, 0};
  CHECK(effective_noise_channel(VbsCode(3, 4), axis8).discrepancy <
        effective_noise_channel(VbsCode(2, 4), axis).discrepancy);

  auto eff = effective_noise_channel(code, axis);
  CHECK(cptp_residuals(eff.mixture).tp < 1e-12);
  CHECK(max_abs(eff.unitary_approx - expi_hermitian(code.basis().generator(2), eta(2, 3))) < 1e-15);

  const int none_bonds[] = {7};
  CHECK_THROWS_AS(effective_noise_channel(code, axis, none_bonds), Error);
  const double short_eps[] = {1, 0};
  CHECK_THROWS_AS(effective_noise_channel(code, short_eps), Error);
}

TEST_CASE("covariant gate") {
  VbsCode code(2, 12);
  auto trivial = covariant_gate(code, Matrix::Identity(2, 2));
  CHECK(trivial.covariance_residual < 1e-14);
  CHECK(trivial.physical_factors.size() == 13);

  Rng rng(77);
  for(int s = 0; s < 5; ++s) {
    Matrix g = random_su_exp(code.basis(), rng);
    auto gate = covariant_gate(code, g);
    CHECK(gate.covariance_residual < 1e-10);
    CHECK(max_abs(gate.logical - g) < 1e-12);
  }

  VbsCode three(3, 3);
  for(int s = 0; s < 3; ++s) {
    Matrix g = haar_su(3, rng);
    auto dense = covariant_gate_dense(three, g);
    auto transfer = covariant_gate(three, g);
    CHECK(dense.leakage < 1e-10);
    CHECK(dense.covariance_residual < 1e-10);
    CHECK(max_abs(dense.logical - transfer.logical) < 1e-12);
    // state equality: U |psi_alpha> = |psi_{g alpha}>
    Matrix v = three.dense_images();
    auto dims = three.site_dims();
    Matrix rotated = apply_product(v, dims, dense.physical_factors);
    CHECK(max_abs(rotated - v * g) < 1e-10);
  }
  CHECK_THROWS_AS(covariant_gate(code, Matrix::Identity(2, 2) * 2.0), Error);
}

TEST_CASE("erasure bound") {
  auto two = erasure_bound(VbsCode(2, 5));
  CHECK(two.delta_t == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.bound == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(erasure_bound(VbsCode(2, 10)).bound == doctest::Approx(two.bound / 2).epsilon(1e-12));
  // adjoint spectra of the off-diagonal generators always reach +-1
  for(int d = 3; d <= 5; ++d) CHECK(erasure_bound(VbsCode(d, 5)).delta_t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("contract rejects malformed insertions") {
  VbsCode code(2, 3);
  const BondInsertion far[] = {{4, Matrix::Identity(2, 2)}};
  CHECK_THROWS_AS(code.contract(far), Error);
  const BondInsertion wide[] = {{1, Matrix::Identity(3, 3)}};
  CHECK_THROWS_AS(code.contract(wide), Error);
  const SiteOperator nowhere[] = {{0, Matrix::Identity(3, 3)}};
  CHECK_THROWS_AS(code.contract({}, nowhere), Error);
  const BondInsertion bra[] = {{1, Matrix::Identity(2, 2), Side::bra}};
  CHECK_THROWS_AS(code.encode_dense(Vector::Unit(2, 0), bra), Error);
}

TEST_CASE("bra insertions conjugate") {
  VbsCode code(2, 4);
  Rng rng(5);
  Matrix x = haar_su(2, rng), y = haar_su(2, rng);
  const BondInsertion pair[] = {{2, x, Side::bra}, {3, y}};
  const BondInsertion left[] = {{2, x}};
  const BondInsertion right[] = {{3, y}};
  Matrix direct = code.dense_images(left).adjoint() * code.dense_images(right);
  CHECK(max_abs(code.contract(pair) - direct) < 1e-13);
}
