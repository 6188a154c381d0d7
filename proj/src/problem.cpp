#include "swe/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swe/counter_rng.hpp"
#include "swe/fft.hpp"

namespace swe {

namespace {

enum RandomStream : std::uint64_t { kAu = 1, kAv = 2, kBu = 3, kBv = 4 };

double amplitude(std::uint64_t seed, RandomStream stream, int k, double exponent) {
  if (k == 0) return 0.0;
  const int a = std::abs(k);
  return 0.5 * counter_uniform(seed, stream, static_cast<std::uint64_t>(a)) *
         std::pow(static_cast<double>(a), exponent);
}

double parse_number(const std::string& s, std::string_view context) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "' in nonlinearity '" + std::string(context) + "'");
  }
}

}  // namespace

Nonlinearity Nonlinearity::scaled_sine(double a, double b) {
  Nonlinearity g;
  g.kind_ = Kind::scaled_sine;
  g.a_ = a;
  g.b_ = b;
  return g;
}

Nonlinearity Nonlinearity::scaled_cosine(double a, double b) {
  Nonlinearity g;
  g.kind_ = Kind::scaled_cosine;
  g.a_ = a;
  g.b_ = b;
  return g;
}

Nonlinearity Nonlinearity::tabulated(double lo, double hi, std::vector<double> samples) {
  if (!(lo < hi)) throw ConfigError("tabulated nonlinearity needs lo < hi");
  if (samples.size() < 2) throw ConfigError("tabulated nonlinearity needs two samples");
  for (double y : samples)
    if (!std::isfinite(y)) throw ConfigError("tabulated nonlinearity has a non-finite sample");
  Nonlinearity g;
  g.kind_ = Kind::tabulated;
  g.lo_ = lo;
  g.hi_ = hi;
  const std::size_t n = samples.size();
  const double h = (hi - lo) / static_cast<double>(n - 1);
  // Catmull-Rom slopes, one-sided at the ends.
  g.slopes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i == 0 ? 0 : i - 1;
    const std::size_t r = i + 1 == n ? n - 1 : i + 1;
    g.slopes_[i] = (samples[r] - samples[l]) / (static_cast<double>(r - l) * h);
  }
  g.values_ = std::move(samples);
  return g;
}

Nonlinearity Nonlinearity::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw ConfigError("empty nonlinearity");
  const std::string& name = parts[0];
  if (name == "zero" && parts.size() == 1) return zero();
  if (name == "const" && parts.size() == 2) return scaled_cosine(parse_number(parts[1], text), 0.0);
  if ((name == "sine" || name == "cosine") && parts.size() == 3) {
    const double a = parse_number(parts[1], text);
    const double b = parse_number(parts[2], text);
    return name == "sine" ? scaled_sine(a, b) : scaled_cosine(a, b);
  }
  throw ConfigError("unknown nonlinearity '" + std::string(text) +
                    "' (expected zero, const:C, sine:A:B or cosine:A:B)");
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::scaled_sine: os << "sine:" << a_ << ':' << b_; break;
    case Kind::scaled_cosine:
      if (b_ == 0.0)
        os << "const:" << a_;
      else
        os << "cosine:" << a_ << ':' << b_;
      break;
    case Kind::tabulated: os << "tabulated[" << values_.size() << ']'; break;
  }
  return os.str();
}

bool Nonlinearity::is_zero() const {
  switch (kind_) {
    case Kind::zero: return true;
    case Kind::scaled_sine: return a_ == 0.0 || b_ == 0.0;
    case Kind::scaled_cosine: return a_ == 0.0;
    case Kind::tabulated:
      return std::all_of(values_.begin(), values_.end(), [](double y) { return y == 0.0; });
  }
  return false;
}

double Nonlinearity::operator()(double u) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::scaled_sine: return a_ * std::sin(b_ * u);
    case Kind::scaled_cosine: return a_ * std::cos(b_ * u);
    case Kind::tabulated: {
      if (u <= lo_) return values_.front();
      if (u >= hi_) return values_.back();
      const std::size_t n = values_.size();
      const double h = (hi_ - lo_) / static_cast<double>(n - 1);
      const double pos = (u - lo_) / h;
      const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
      const double s = pos - static_cast<double>(i);
      const double s2 = s * s;
      const double s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * values_[i] + (s3 - 2 * s2 + s) * h * slopes_[i] +
             (-2 * s3 + 3 * s2) * values_[i + 1] + (s3 - s2) * h * slopes_[i + 1];
    }
  }
  return 0.0;
}

double Nonlinearity::derivative_bound() const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::scaled_sine:
    case Kind::scaled_cosine: return std::abs(a_ * b_);
    case Kind::tabulated: {
      // |p'| <= 1.5 |secant| + |m0| + |m1| on each Hermite segment.
      const std::size_t n = values_.size();
      const double h = (hi_ - lo_) / static_cast<double>(n - 1);
      double bound = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double secant = (values_[i + 1] - values_[i]) / h;
        bound = std::max(bound, 1.5 * std::abs(secant) + std::abs(slopes_[i]) +
                                    std::abs(slopes_[i + 1]));
      }
      return bound;
    }
  }
  return 0.0;
}

std::vector<double> apply_nonlinearity(const Nonlinearity& g, std::span<const double> samples) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw std::domain_error("non-finite nonlinearity input");
    out[i] = g(samples[i]);
    if (!std::isfinite(out[i])) throw std::domain_error("non-finite nonlinearity output");
  }
  return out;
}

SpectralState build_indicator_1d(int band) {
  const int n = 2 * band;
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  const std::vector<double> v(u.size(), 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    if (x >= 0.3 && x <= 0.425)
      u[static_cast<std::size_t>(j)] = 5.0;
    else if (x >= 0.575 && x <= 0.7)
      u[static_cast<std::size_t>(j)] = 2.5;
  }
  return state_from_samples(u, v, 1, band);
}

SpectralState build_indicator_1d(const SpectralGrid& grid) {
  if (grid.dim != 1) throw ConfigError("build_indicator_1d needs a 1D grid");
  return build_indicator_1d(grid.n_high);
}

SpectralState build_indicator_2d(int band) {
  const int n = 2 * band;
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<double> u(total, 0.0);
  const std::vector<double> v(total, 0.0);
  auto inside = [](double x) { return x >= 0.375 && x <= 0.625; };
  for (int i = 0; i < n; ++i) {
    if (!inside(static_cast<double>(i) / n)) continue;
    for (int j = 0; j < n; ++j)
      if (inside(static_cast<double>(j) / n))
        u[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
            0.5;
  }
  return state_from_samples(u, v, 2, band);
}

SpectralState build_indicator_2d(const SpectralGrid& grid) {
  if (grid.dim != 2) throw ConfigError("build_indicator_2d needs a 2D grid");
  return build_indicator_2d(grid.n_high);
}

SpectralState build_random_hgamma(int dim, int band, double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw ConfigError("random H^gamma data needs gamma > 0");
  SpectralState s(dim, band);
  auto u = s.u();
  auto v = s.v();
  const double eu = -gamma - 0.51;
  const double ev = -gamma + 0.49;
  if (dim == 1) {
    for (int k = -(band - 1); k < band; ++k) {
      const std::size_t i = s.slot(k);
      u[i] = amplitude(seed, kAu, k, eu);
      v[i] = amplitude(seed, kAv, k, ev);
    }
    return s;
  }
  std::vector<double> au(static_cast<std::size_t>(band)), av(au.size()), bu(au.size()),
      bv(au.size());
  for (int k = 0; k < band; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    au[kk] = amplitude(seed, kAu, k, eu);
    av[kk] = amplitude(seed, kAv, k, ev);
    bu[kk] = amplitude(seed, kBu, k, eu);
    bv[kk] = amplitude(seed, kBv, k, ev);
  }
  for (int k = -(band - 1); k < band; ++k) {
    const auto ak = static_cast<std::size_t>(std::abs(k));
    for (int l = -(band - 1); l < band; ++l) {
      const auto al = static_cast<std::size_t>(std::abs(l));
      const std::size_t i = s.slot(k, l);
      u[i] = au[ak] * bu[al];
      v[i] = av[ak] * bv[al];
    }
  }
  return s;
}

SpectralState build_random_hgamma(const SpectralGrid& grid, double gamma, std::uint64_t seed) {
  return build_random_hgamma(grid.dim, grid.n_high, gamma, seed);
}

SpectralState build_initial(const InitialData& data, int dim, int band) {
  switch (data.kind) {
    case InitialData::Kind::zero: return SpectralState(dim, band);
    case InitialData::Kind::indicator:
      return dim == 1 ? build_indicator_1d(band) : build_indicator_2d(band);
    case InitialData::Kind::random_hgamma: return build_random_hgamma(dim, band, data.gamma, data.seed);
    case InitialData::Kind::explicit_state: {
      if (!data.state) throw ConfigError("explicit initial data without a state");
      if (data.state->dim() != dim) throw ConfigError("explicit initial data has the wrong dimension");
      return data.state->band() <= band ? embed(*data.state, band) : restrict_to(*data.state, band);
    }
  }
  throw ConfigError("unknown initial data kind");
}

}  // namespace swe
