#pragma once

// Nonlinearity catalogue and initial data for the stochastic wave problem
//   u_tt - Laplacian u = f(u) + sigma(u) dW/dt on the unit torus.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swe/spectral.hpp"

namespace swe {

// A scalar map with bounded first three derivatives.
class Nonlinearity {
 public:
  enum class Kind { zero, scaled_sine, scaled_cosine, tabulated };

  Nonlinearity() = default;

  static Nonlinearity zero() { return {}; }
  // a sin(b u)
  static Nonlinearity scaled_sine(double a, double b);
  // a cos(b u); scaled_cosine(c, 0) is the constant c.
  static Nonlinearity scaled_cosine(double a, double b);
  // Cubic Hermite interpolation of samples on a uniform grid over [lo, hi],
  // held constant outside. Needs at least two samples and lo < hi.
  static Nonlinearity tabulated(double lo, double hi, std::vector<double> samples);

  // "zero", "sine:A:B", "cosine:A:B" or "const:C". Throws ConfigError.
  static Nonlinearity parse(std::string_view text);
  std::string describe() const;

  Kind kind() const { return kind_; }
  bool is_zero() const;
  double operator()(double u) const;

  // Upper bound on sup |g'|.
  double derivative_bound() const;

 private:
  Kind kind_ = Kind::zero;
  double a_ = 0.0;
  double b_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// Pointwise map; throws std::domain_error on a non-finite input or output.
std::vector<double> apply_nonlinearity(const Nonlinearity& g, std::span<const double> samples);

struct InitialData {
  enum class Kind { zero, indicator, random_hgamma, explicit_state };

  Kind kind = Kind::zero;
  double gamma = 0.5;
  std::uint64_t seed = 0;
  std::shared_ptr<const SpectralState> state;  // explicit_state only
};

// u = 5 on [0.3, 0.425], 2.5 on [0.575, 0.7], 0 elsewhere, v = 0, sampled at
// the collocation nodes of the band.
SpectralState build_indicator_1d(int band);
SpectralState build_indicator_1d(const SpectralGrid& grid);

// u = 0.5 on [0.375, 0.625]^2, 0 elsewhere, v = 0.
SpectralState build_indicator_2d(int band);
SpectralState build_indicator_2d(const SpectralGrid& grid);

// Random data in H^gamma x H^(gamma-1): per mode 0 < |k| < band,
//   u_k = 0.5 r |k|^(-gamma-0.51),  v_k = 0.5 r' |k|^(-gamma+0.49),
// with r, r' uniform on (0, 1), equal at +-k, and tensor products of such
// sequences in 2D. The zero and Nyquist modes are zero. Draws are keyed by
// (seed, |k|), so a smaller band gives exactly the truncated data.
SpectralState build_random_hgamma(int dim, int band, double gamma, std::uint64_t seed);
SpectralState build_random_hgamma(const SpectralGrid& grid, double gamma, std::uint64_t seed);

// Initial state at `band`; explicit states are embedded or restricted to it.
SpectralState build_initial(const InitialData& data, int dim, int band);

struct ProblemSpec {
  Nonlinearity f;
  Nonlinearity sigma;
  InitialData initial;
  double t_final = 0.25;
};

}  // namespace swe
