#include "swe/wave_group.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>

namespace swe {

namespace {

// sin(x)/x with x = lambda t, times t.
double sinc_times_t(double lambda, double t) {
  const double x = lambda * t;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / lambda;
}

template <typename MatrixOf>
SpectralState map_modes(const SpectralState& state, MatrixOf&& matrix_of) {
  SpectralState out(state.dim(), state.band());
  const auto u = state.u();
  const auto v = state.v();
  auto ou = out.u();
  auto ov = out.v();
  for_each_mode(state.dim(), state.band(), [&](std::size_t i, int k1, int k2) {
    const ModePropagator m = matrix_of(wave_number(k1, k2));
    ou[i] = m.a11 * u[i] + m.a12 * v[i];
    ov[i] = m.a21 * u[i] + m.a22 * v[i];
  });
  return out;
}

}  // namespace

ModePropagator operator*(const ModePropagator& a, const ModePropagator& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

ModePropagator propagator(double lambda, double t) {
  const double c = std::cos(lambda * t);
  const double s = std::sin(lambda * t);
  return {c, sinc_times_t(lambda, t), -lambda * s, c};
}

ModePropagator resolvent(double lambda, double tau) {
  const double l2 = lambda * lambda;
  const double inv = 1.0 / (1.0 + tau * tau * l2);
  return {inv, tau * inv, -tau * l2 * inv, inv};
}

PropagatorTable::PropagatorTable(int dim, int band, double t) : dim_(dim), band_(band), t_(t) {
  const auto n = static_cast<std::size_t>(2 * band);
  table_.resize(dim == 1 ? n : n * n);
  for_each_mode(dim, band, [&](std::size_t i, int k1, int k2) {
    table_[i] = propagator(wave_number(k1, k2), t);
  });
}

void PropagatorTable::apply(SpectralState& state) const {
  if (state.dim() != dim_ || state.band() != band_)
    throw std::invalid_argument("propagator table does not match state shape");
  auto u = state.u();
  auto v = state.v();
  for (std::size_t i = 0; i < table_.size(); ++i) {
    const ModePropagator& m = table_[i];
    const Complex a = u[i];
    const Complex b = v[i];
    u[i] = m.a11 * a + m.a12 * b;
    v[i] = m.a21 * a + m.a22 * b;
  }
}

namespace {

using CacheKey = std::tuple<int, int, std::uint64_t>;

constexpr std::size_t kMaxCachedTables = 64;

std::mutex cache_mutex;
std::map<CacheKey, std::shared_ptr<const PropagatorTable>>& cache() {
  static std::map<CacheKey, std::shared_ptr<const PropagatorTable>> tables;
  return tables;
}

}  // namespace

std::shared_ptr<const PropagatorTable> propagator_table(int dim, int band, double t) {
  const CacheKey key{dim, band, std::bit_cast<std::uint64_t>(t)};
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  // Built outside the lock; a racing builder produces an identical table.
  auto table = std::make_shared<const PropagatorTable>(dim, band, t);
  std::lock_guard lock(cache_mutex);
  // Snapshot times add one table each; drop everything rather than grow unbounded.
  if (cache().size() >= kMaxCachedTables) cache().clear();
  return cache().emplace(key, std::move(table)).first->second;
}

void clear_propagator_cache() {
  std::lock_guard lock(cache_mutex);
  cache().clear();
}

SpectralState apply_group(const SpectralState& state, double t) {
  SpectralState out = state;
  if (t == 0.0) return out;
  propagator_table(state.dim(), state.band(), t)->apply(out);
  return out;
}

SpectralState apply_resolvent(const SpectralState& state, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("apply_resolvent: tau must be positive");
  return map_modes(state, [tau](double l) { return resolvent(l, tau); });
}

SpectralState apply_implicit_operator(const SpectralState& state, double tau) {
  return map_modes(state, [tau](double l) { return ModePropagator{1.0, -tau, tau * l * l, 1.0}; });
}

}  // namespace swe
