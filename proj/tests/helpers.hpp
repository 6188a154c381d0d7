#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "swe/fft.hpp"
#include "swe/spectral.hpp"

namespace swe::testing {

inline std::vector<double> random_samples(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

// State of a real random field pair.
inline SpectralState random_state(int dim, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = dim == 1 ? 2 * band : 4 * static_cast<std::size_t>(band) * band;
  const auto u = random_samples(n, rng);
  const auto v = random_samples(n, rng);
  return state_from_samples(u, v, dim, band);
}

// Random real state whose modes satisfy |k_j| < m (Nyquist-free inside band).
inline SpectralState random_banded_state(int dim, int band, int m, std::uint64_t seed) {
  SpectralState s = random_state(dim, band, seed);
  auto u = s.u();
  auto v = s.v();
  for_each_mode(dim, band, [&](std::size_t i, int k1, int k2) {
    if (std::abs(k1) >= m || std::abs(k2) >= m) u[i] = v[i] = Complex{};
  });
  return s;
}

// Direct O(n^2) 1D DFT of real samples, normalised like forward().
inline std::vector<Complex> direct_dft(const std::vector<double>& x, int band) {
  const int n = 2 * band;
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int k = mode_of(i, band);
    Complex acc{};
    for (int j = 0; j < n; ++j)
      acc += x[static_cast<std::size_t>(j)] * std::polar(1.0, -kTwoPi * k * j / n);
    out[static_cast<std::size_t>(i)] = acc / static_cast<double>(n);
  }
  return out;
}

// Direct synthesis of real samples from 1D coefficients.
inline std::vector<double> direct_synthesis(std::span<const Complex> c, int band) {
  const int n = 2 * band;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Complex acc{};
    for (int i = 0; i < n; ++i)
      acc += c[static_cast<std::size_t>(i)] * std::polar(1.0, kTwoPi * mode_of(i, band) * j / n);
    out[static_cast<std::size_t>(j)] = acc.real();
  }
  return out;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const SpectralState& a, const SpectralState& b) {
  return std::max(max_abs_diff(a.u(), b.u()), max_abs_diff(a.v(), b.v()));
}

inline bool bit_identical(const SpectralState& a, const SpectralState& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.u()[i] != b.u()[i] || a.v()[i] != b.v()[i]) return false;
  return true;
}

}  // namespace swe::testing
