#pragma once

#include <cstdint>
#include <random>

#include "qx/linalg.hpp"
#include "qx/su_algebra.hpp"

namespace qx {

/// splitmix64 mix of (base, index); used to derive independent per-trial seeds.
std::uint64_t stable_hash(std::uint64_t base, std::uint64_t index);

/// Seeded generator with distribution code written out by hand: the std
/// distributions are allowed to differ between standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // Box-Muller, one draw per call

private:
  std::mt19937_64 engine_;
};

/// Haar-distributed special unitary via QR of a complex Gaussian matrix.
Matrix haar_su(int d, Rng &rng);
/// exp(i sum_a x_a t^a) with x_a ~ N(0, scale^2).
Matrix random_su_exp(const SuBasis &basis, Rng &rng, double scale = 1.0);

} // namespace qx
