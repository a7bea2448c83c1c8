#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "qx/linalg.hpp"

namespace qx {

/// min_phi || u - e^{i phi} v || (operator norm).
double unitary_distance(const Matrix &u, const Matrix &v);

/// Fixed partition of SU(d_L) into cells of accuracy eta around representatives.
class GateCellTable {
public:
  /// Representatives must be special unitary and pairwise farther apart than eta.
  GateCellTable(int d, double eta, std::vector<Matrix> representatives = {});

  int dim() const { return d_; }
  double eta() const { return eta_; }
  const std::vector<Matrix> &representatives() const { return reps_; }
  std::size_t size() const { return reps_.size(); }

private:
  int d_;
  double eta_;
  std::vector<Matrix> reps_;
};

/// Index of the nearest representative; distances within 1e-12 count as ties and
/// resolve to the lowest index.
std::size_t cell_assign(const GateCellTable &table, const Matrix &u);

/// Greedy eta-net over `samples` seeded Haar draws.
GateCellTable build_gate_cell_table(int d, double eta, int samples, std::uint64_t seed);

/// floor((varpi - varpi0) / eta).
long max_gate_count(double varpi, double eta, double varpi0 = 0.0);

/// Sum of per-gate distances.
double compose_error_bound(std::span<const double> gate_distances);

struct SimOptions {
  /// Explicit gate sequence of length L; empty means a seeded Haar stream.
  std::vector<Matrix> gates;
  /// Replaces eta(d, N) when set.
  std::optional<double> eta;
  /// eps_k is drawn uniformly from [-eps_max, eps_max].
  double eps_max = 1.0;
};

struct SimTrajectory {
  std::uint64_t seed = 0;
  int length = 0;
  double eta = 0;
  std::vector<Matrix> gates;
  std::vector<RealVector> exponents;
  std::vector<double> distances;  ///< ideal vs noisy cumulative product after each step
  std::vector<double> envelope;   ///< running sum of the per-step error distances
  double final_distance() const { return distances.empty() ? 0.0 : distances.back(); }
  double final_envelope() const { return envelope.empty() ? 0.0 : envelope.back(); }
};

/// Each step applies U_l then E_l = exp(i eta sum_k eps_k t^k).
SimTrajectory simulate_computation(int d, int n, int length, std::uint64_t seed, const SimOptions &options = {});

/// Columns: step, ideal_vs_noisy_distance, envelope.
void write_trajectory_csv(std::ostream &out, const SimTrajectory &trajectory);

} // namespace qx
