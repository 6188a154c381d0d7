#pragma once

// Periodic Fourier representation of the field pair (u, v) on the unit torus.
//
// A state of band m stores every mode with per-coordinate index in
// [-m, m-1], in FFT order along each dimension (index i holds mode i for
// i < m and mode i - 2m otherwise), row-major in 2D. The collocation grid of
// a band-m state has 2m nodes per dimension at x_j = j / (2m).
//
// The mode -m is the Nyquist mode of the band; it aliases +m on the
// collocation grid, so it is its own Hermitian partner and is real for a real
// field. restrict() folds +m onto -m and embed() splits -m evenly over +-m,
// which keeps both operations real-field preserving.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace swe {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpectralGrid {
  int dim = 1;
  int n_cut = 1;       // low-frequency cutoff N
  double alpha = 1.0;  // recovery exponent
  int n_high = 1;      // floor(N^alpha)
  int points_per_dim = 2;
};

// Throws ConfigError for dim outside {1,2}, n_cut < 1 or alpha < 1.
SpectralGrid make_grid(int dim, int n_cut, double alpha);

// Fourier coefficients of (u, v), normalised so that a mode coefficient is
// (1/P) sum_j f(x_j) exp(-2 pi i k.x_j), P the number of collocation nodes.
class SpectralState {
 public:
  SpectralState() = default;
  SpectralState(int dim, int band);

  int dim() const { return dim_; }
  int band() const { return band_; }
  int points_per_dim() const { return 2 * band_; }
  std::size_t size() const { return u_.size(); }

  std::span<Complex> u() { return u_; }
  std::span<Complex> v() { return v_; }
  std::span<const Complex> u() const { return u_; }
  std::span<const Complex> v() const { return v_; }

  // Storage slot of mode (k1, k2); k2 is ignored in 1D.
  std::size_t slot(int k1, int k2 = 0) const;

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator-=(const SpectralState& other);
  SpectralState& operator*=(double s);

  bool all_finite() const;

 private:
  int dim_ = 1;
  int band_ = 0;
  std::vector<Complex> u_;
  std::vector<Complex> v_;
};

SpectralState operator+(SpectralState a, const SpectralState& b);
SpectralState operator-(SpectralState a, const SpectralState& b);
SpectralState operator*(double s, SpectralState a);

// Signed mode index stored at FFT-order position i of a band-m axis.
inline int mode_of(int i, int band) { return i < band ? i : i - 2 * band; }
// FFT-order position of signed mode k, k in [-m, m-1].
inline int slot_of(int k, int band) { return k >= 0 ? k : k + 2 * band; }

// Visits every stored mode as fn(slot, k1, k2); k2 = 0 in 1D.
template <typename Fn>
void for_each_mode(int dim, int band, Fn&& fn) {
  const int n = 2 * band;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) fn(static_cast<std::size_t>(i), mode_of(i, band), 0);
    return;
  }
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const int k1 = mode_of(i, band);
    for (int j = 0; j < n; ++j, ++idx) fn(idx, k1, mode_of(j, band));
  }
}

// Wave number 2 pi |k| of the basis function exp(2 pi i k.x).
inline double wave_number(int k1, int k2) {
  return kTwoPi * std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
}

// Zeroes every mode with some |k_j| > m. Throws std::out_of_range unless
// 0 <= m <= state.band().
SpectralState project_low(const SpectralState& state, int m);

// project_low(state, m2) - project_low(state, m1); requires 0 <= m1 < m2 <= band.
SpectralState project_band(const SpectralState& state, int m1, int m2);

// (sum (1+l^2)^g |u_k|^2 + (1+l^2)^(g-1) |v_k|^2)^(1/2), l = 2 pi |k|.
double sobolev_norm(const SpectralState& state, double gamma);

// sobolev_norm(embed(a) - embed(b), gamma) on the larger of the two bands,
// computed without materialising the embedded states.
double sobolev_distance(const SpectralState& a, const SpectralState& b, double gamma);

// Zero-padding to a band >= state.band(); the Nyquist mode is split evenly.
SpectralState embed(const SpectralState& state, int band);
// Truncation to a band <= state.band(); the mode +band folds onto -band.
SpectralState restrict_to(const SpectralState& state, int band);

// Largest |c_k - conj(c_partner(k))| over both fields, partner(k) = -k taken
// modulo the band.
double hermitian_defect(const SpectralState& state);

struct PseudospectralOptions {
  // Evaluate the nonlinearity on a grid 3/2 times finer.
  bool oversample = false;
};

// I(g(P_band u)): inverse-transform the band-limited coefficients to the
// collocation grid of `coeffs`' storage band, apply g pointwise, transform
// back and truncate to `band`. Throws std::domain_error when g produces a
// non-finite sample.
std::vector<Complex> pseudospectral_apply(const std::function<double(double)>& g,
                                          std::span<const Complex> coeffs, int dim,
                                          int storage_band, int band,
                                          const PseudospectralOptions& options = {});

}  // namespace swe
