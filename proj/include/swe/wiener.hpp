#pragma once

// Scalar Brownian paths on a uniform base lattice. Coarser step sizes read
// exact ascending-order partial sums of the base increments, so every step
// size and the reference solution see the same underlying path.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace swe {

struct WienerLattice {
  double t_final = 0.0;
  double base_dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  std::vector<double> increments;  // i.i.d. N(0, base_dt)

  long size() const { return static_cast<long>(increments.size()); }
};

// Number of steps of size `step` in `span`; throws std::invalid_argument
// unless span / step is a positive integer (to 1e-9 relative).
long step_ratio(double span, double step);

// Increment n of the path is sqrt(base_dt) * counter_normal(seed, sample_index, n).
WienerLattice sample_path(std::uint64_t seed, std::uint64_t sample_index, double t_final,
                          double base_dt);

// W((n+1) step_dt) - W(n step_dt) summed left to right over the base lattice.
// Throws std::invalid_argument for a misaligned step or an out-of-range n.
double increment(const WienerLattice& path, long n, double step_dt);

// All increments of size step_dt covering [0, t_final].
std::vector<double> coarse_increments(const WienerLattice& path, double step_dt);

// Debug dump with columns n,t_n,dW_n at 17 significant digits.
void write_path_csv(const WienerLattice& path, const std::filesystem::path& file);

}  // namespace swe
