#include "swe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swe/fft.hpp"

namespace swe {

namespace {

// Points per state beyond this are refused: a 2D band of 4096 already needs
// 1 GiB for the two coefficient fields.
constexpr long long kMaxPoints = 1LL << 24;

void require_same_shape(const SpectralState& a, const SpectralState& b) {
  if (a.dim() != b.dim() || a.band() != b.band())
    throw std::invalid_argument("spectral states differ in dimension or band");
}

// Coefficient of mode (k1, k2) of the zero-padded embedding of `s` into a
// larger band; every stored mode of the larger band satisfies |k_j| <= big.
Complex embedded_coefficient(std::span<const Complex> c, const SpectralState& s, int k1, int k2) {
  const int m = s.band();
  double weight = 1.0;
  auto fold = [&](int k) {
    if (k == m || k == -m) {
      weight *= 0.5;
      return -m;
    }
    return k;
  };
  if (std::abs(k1) > m || std::abs(k2) > m) return {};
  const int j1 = fold(k1);
  const int j2 = s.dim() == 2 ? fold(k2) : 0;
  return weight * c[s.slot(j1, j2)];
}

}  // namespace

SpectralGrid make_grid(int dim, int n_cut, double alpha) {
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2, got " + std::to_string(dim));
  if (n_cut < 1) throw ConfigError("n_cut must be >= 1");
  if (!(alpha >= 1.0)) throw ConfigError("alpha must be >= 1");

  // pow() can land just below an exact integer power (64^1.5 = 512).
  const double raw = std::pow(static_cast<double>(n_cut), alpha);
  const double nearest = std::round(raw);
  const double high = std::abs(raw - nearest) <= 1e-9 * nearest ? nearest : std::floor(raw);
  const double points = 2.0 * high;
  if (std::pow(points, dim) > static_cast<double>(kMaxPoints))
    throw ConfigError("grid with n_high = " + std::to_string(high) + " in " +
                      std::to_string(dim) + "D exceeds the supported size");

  SpectralGrid g;
  g.dim = dim;
  g.n_cut = n_cut;
  g.alpha = alpha;
  g.n_high = static_cast<int>(high);
  g.points_per_dim = 2 * g.n_high;
  return g;
}

SpectralState::SpectralState(int dim, int band) : dim_(dim), band_(band) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (band < 1) throw std::invalid_argument("band must be >= 1");
  const auto n = static_cast<long long>(2 * band);
  const long long total = dim == 1 ? n : n * n;
  if (total > kMaxPoints) throw std::invalid_argument("state band too large");
  u_.assign(static_cast<std::size_t>(total), Complex{});
  v_.assign(static_cast<std::size_t>(total), Complex{});
}

std::size_t SpectralState::slot(int k1, int k2) const {
  const auto i = static_cast<std::size_t>(slot_of(k1, band_));
  if (dim_ == 1) return i;
  return i * static_cast<std::size_t>(2 * band_) + static_cast<std::size_t>(slot_of(k2, band_));
}

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < u_.size(); ++i) {
    u_[i] += other.u_[i];
    v_[i] += other.v_[i];
  }
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < u_.size(); ++i) {
    u_[i] -= other.u_[i];
    v_[i] -= other.v_[i];
  }
  return *this;
}

SpectralState& SpectralState::operator*=(double s) {
  for (auto& c : u_) c *= s;
  for (auto& c : v_) c *= s;
  return *this;
}

bool SpectralState::all_finite() const {
  auto finite = [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  return std::all_of(u_.begin(), u_.end(), finite) && std::all_of(v_.begin(), v_.end(), finite);
}

SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
SpectralState operator*(double s, SpectralState a) { return a *= s; }

SpectralState project_low(const SpectralState& state, int m) {
  if (m < 0 || m > state.band())
    throw std::out_of_range("projection cutoff " + std::to_string(m) + " outside [0, " +
                            std::to_string(state.band()) + "]");
  SpectralState out = state;
  if (m == state.band()) return out;
  auto u = out.u();
  auto v = out.v();
  for_each_mode(state.dim(), state.band(), [&](std::size_t i, int k1, int k2) {
    if (std::abs(k1) > m || std::abs(k2) > m) {
      u[i] = {};
      v[i] = {};
    }
  });
  return out;
}

SpectralState project_band(const SpectralState& state, int m1, int m2) {
  if (m1 >= m2) throw std::out_of_range("project_band requires m1 < m2");
  if (m1 < 0 || m2 > state.band()) throw std::out_of_range("project_band cutoffs outside band");
  SpectralState out = state;
  auto u = out.u();
  auto v = out.v();
  for_each_mode(state.dim(), state.band(), [&](std::size_t i, int k1, int k2) {
    const int k = std::max(std::abs(k1), std::abs(k2));
    if (k <= m1 || k > m2) {
      u[i] = {};
      v[i] = {};
    }
  });
  return out;
}

double sobolev_norm(const SpectralState& state, double gamma) {
  double sum = 0.0;
  auto u = state.u();
  auto v = state.v();
  for_each_mode(state.dim(), state.band(), [&](std::size_t i, int k1, int k2) {
    const double l = wave_number(k1, k2);
    const double w = 1.0 + l * l;
    sum += std::pow(w, gamma) * std::norm(u[i]) + std::pow(w, gamma - 1.0) * std::norm(v[i]);
  });
  return std::sqrt(sum);
}

double sobolev_distance(const SpectralState& a, const SpectralState& b, double gamma) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sobolev_distance: dimension mismatch");
  if (a.band() == b.band()) return sobolev_norm(a - b, gamma);
  const SpectralState& big = a.band() > b.band() ? a : b;
  const SpectralState& small = a.band() > b.band() ? b : a;
  const auto bu = big.u();
  const auto bv = big.v();
  const auto su = small.u();
  const auto sv = small.v();
  const bool weighted = gamma != 0.0;
  double sum = 0.0;
  for_each_mode(big.dim(), big.band(), [&](std::size_t i, int k1, int k2) {
    const Complex du = bu[i] - embedded_coefficient(su, small, k1, k2);
    const Complex dv = bv[i] - embedded_coefficient(sv, small, k1, k2);
    const double l = wave_number(k1, k2);
    const double w = 1.0 + l * l;
    if (weighted)
      sum += std::pow(w, gamma) * std::norm(du) + std::pow(w, gamma - 1.0) * std::norm(dv);
    else
      sum += std::norm(du) + std::norm(dv) / w;
  });
  return std::sqrt(sum);
}

SpectralState embed(const SpectralState& state, int band) {
  if (band < state.band()) throw std::invalid_argument("embed: target band is smaller");
  if (band == state.band()) return state;
  SpectralState out(state.dim(), band);
  auto ou = out.u();
  auto ov = out.v();
  const int m = state.band();
  for_each_mode(out.dim(), band, [&](std::size_t i, int k1, int k2) {
    if (std::abs(k1) > m || std::abs(k2) > m) return;
    ou[i] = embedded_coefficient(state.u(), state, k1, k2);
    ov[i] = embedded_coefficient(state.v(), state, k1, k2);
  });
  return out;
}

SpectralState restrict_to(const SpectralState& state, int band) {
  if (band > state.band()) throw std::invalid_argument("restrict_to: target band is larger");
  if (band < 1) throw std::invalid_argument("restrict_to: band must be >= 1");
  if (band == state.band()) return state;
  SpectralState out(state.dim(), band);
  auto ou = out.u();
  auto ov = out.v();
  const auto su = state.u();
  const auto sv = state.v();
  for_each_mode(state.dim(), state.band(), [&](std::size_t i, int k1, int k2) {
    if (std::abs(k1) > band || std::abs(k2) > band) return;
    const int j1 = k1 == band ? -band : k1;
    const int j2 = k2 == band ? -band : k2;
    const std::size_t o = out.slot(j1, j2);
    ou[o] += su[i];
    ov[o] += sv[i];
  });
  return out;
}

double hermitian_defect(const SpectralState& state) {
  const int m = state.band();
  auto partner = [m](int k) { return k == -m ? -m : -k; };
  double worst = 0.0;
  const auto u = state.u();
  const auto v = state.v();
  for_each_mode(state.dim(), m, [&](std::size_t i, int k1, int k2) {
    const std::size_t p = state.slot(partner(k1), state.dim() == 2 ? partner(k2) : 0);
    worst = std::max({worst, std::abs(u[i] - std::conj(u[p])), std::abs(v[i] - std::conj(v[p]))});
  });
  return worst;
}

std::vector<Complex> pseudospectral_apply(const std::function<double(double)>& g,
                                          std::span<const Complex> coeffs, int dim,
                                          int storage_band, int band,
                                          const PseudospectralOptions& options) {
  if (band < 0 || band > storage_band)
    throw std::out_of_range("pseudospectral_apply: band outside storage band");
  SpectralState work(dim, storage_band);
  if (coeffs.size() != work.size())
    throw std::invalid_argument("pseudospectral_apply: coefficient count mismatch");
  std::copy(coeffs.begin(), coeffs.end(), work.u().begin());
  if (band < storage_band) work = project_low(work, band);

  int eval_band = storage_band;
  if (options.oversample) {
    eval_band = (3 * storage_band + 1) / 2;
    work = embed(work, eval_band);
  }

  std::vector<double> samples = inverse(work.u(), dim, eval_band);
  for (double& x : samples) {
    x = g(x);
    if (!std::isfinite(x))
      throw std::domain_error("pseudospectral_apply: nonlinearity produced a non-finite value");
  }
  std::vector<Complex> image = forward(samples, dim, eval_band);

  SpectralState out(dim, eval_band);
  std::copy(image.begin(), image.end(), out.u().begin());
  if (eval_band != storage_band) out = restrict_to(out, storage_band);
  if (band < storage_band) out = project_low(out, band);
  return {out.u().begin(), out.u().end()};
}

}  // namespace swe
