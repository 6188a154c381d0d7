#pragma once

// SWV1 snapshot files: the real-space fields of a state.
//
//   "SWV1" | u32 dim | u32 points_per_dim | f64 time | P f64 u | P f64 v
//
// All numbers little-endian, P = points_per_dim^dim, samples row-major.

#include <filesystem>
#include <iosfwd>

#include "swe/spectral.hpp"

namespace swe {

struct Snapshot {
  double time = 0.0;
  SpectralState state;
};

void write_snapshot(std::ostream& os, const SpectralState& state, double time);
void write_snapshot(const std::filesystem::path& path, const SpectralState& state, double time);

// Throws std::runtime_error on a bad magic, truncated data or an odd point count.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace swe
