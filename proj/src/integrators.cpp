#include "swe/integrators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "swe/wave_group.hpp"

namespace swe {

namespace {

// state.v += tau * P_cut f(P_cut u) + dW * P_cut sigma(P_cut u), nonlinearities
// evaluated on the storage grid of `state`.
void add_forcing(SpectralState& state, double tau, double dW, const Nonlinearity& f,
                 const Nonlinearity& sigma, int cut, const PseudospectralOptions& options) {
  const int dim = state.dim();
  const int band = state.band();
  auto v = state.v();
  if (!f.is_zero() && tau != 0.0) {
    const auto image = pseudospectral_apply(std::cref(f), state.u(), dim, band, cut, options);
    for (std::size_t i = 0; i < image.size(); ++i) v[i] += tau * image[i];
  }
  if (!sigma.is_zero() && dW != 0.0) {
    const auto image = pseudospectral_apply(std::cref(sigma), state.u(), dim, band, cut, options);
    for (std::size_t i = 0; i < image.size(); ++i) v[i] += dW * image[i];
  }
}

void require_band(const SpectralState& s, int band, const char* who) {
  if (s.band() != band)
    throw std::invalid_argument(std::string(who) + ": state band " + std::to_string(s.band()) +
                                " does not match " + std::to_string(band));
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::hr_lri: return "hrlri";
    case Method::lri_filtered: return "lri";
    case Method::sem: return "sem";
    case Method::stm: return "stm";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "hrlri" || name == "hr_lri" || name == "hr-lri") return Method::hr_lri;
  if (name == "lri" || name == "lri_filtered") return Method::lri_filtered;
  if (name == "sem") return Method::sem;
  if (name == "stm") return Method::stm;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected hrlri|lri|sem|stm)");
}

MethodSpec make_method(Method kind, double tau, double t_final, const SpectralGrid& grid) {
  MethodSpec m;
  m.kind = kind;
  m.tau = tau;
  try {
    m.n_steps = step_ratio(t_final, tau);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("time step: ") + e.what());
  }
  const double inv = std::floor(1.0 / tau);
  m.filter_cut = inv >= grid.n_cut ? grid.n_cut : std::max(0, static_cast<int>(inv));
  m.recovery = kind == Method::hr_lri;
  return m;
}

int storage_band(const MethodSpec& method, const SpectralGrid& grid) {
  return method.kind == Method::lri_filtered ? grid.n_high : grid.n_cut;
}

SpectralState step_lri(const SpectralState& state, double tau, double dW, const Nonlinearity& f,
                       const Nonlinearity& sigma, int cut, const PseudospectralOptions& options) {
  if (cut < 0 || cut > state.band()) throw std::out_of_range("step_lri: filter cut outside band");
  SpectralState out = state;
  add_forcing(out, tau, dW, f, sigma, cut, options);
  return apply_group(out, tau);
}

SpectralState step_hrlri_low(const SpectralState& state_low, double tau, double dW,
                             const Nonlinearity& f, const Nonlinearity& sigma, int n_cut,
                             const PseudospectralOptions& options) {
  require_band(state_low, n_cut, "step_hrlri_low");
  SpectralState out = state_low;
  add_forcing(out, tau, dW, f, sigma, n_cut, options);
  return apply_group(out, tau);
}

SpectralState recover_high(const SpectralState& initial_band, double t) {
  return apply_group(initial_band, t);
}

SpectralState step_sem(const SpectralState& state, double tau, double dW,
                       const Nonlinearity& sigma, const Nonlinearity& f,
                       const PseudospectralOptions& options) {
  SpectralState out = state;
  add_forcing(out, tau, dW, f, sigma, state.band(), options);
  return apply_resolvent(out, tau);
}

SpectralState step_stm(const SpectralState& state, double tau, double dW,
                       const Nonlinearity& sigma, const Nonlinearity& f,
                       const PseudospectralOptions& options) {
  SpectralState out = state;
  add_forcing(out, tau, dW, f, sigma, state.band(), options);
  return apply_group(out, tau);
}

double projection_interpolation_gap(const SpectralState& state_low, const Nonlinearity& sigma,
                                    int fine_band) {
  const int n = state_low.band();
  const int dim = state_low.dim();
  const SpectralState fine = embed(state_low, fine_band);
  SpectralState projected(dim, fine_band);
  const auto p = pseudospectral_apply(std::cref(sigma), fine.u(), dim, fine_band, n);
  std::copy(p.begin(), p.end(), projected.v().begin());
  SpectralState interpolated(dim, n);
  const auto q = pseudospectral_apply(std::cref(sigma), state_low.u(), dim, n, n);
  std::copy(q.begin(), q.end(), interpolated.v().begin());
  return sobolev_distance(projected, interpolated, 0.0);
}

PreparedRun prepare_run(const MethodSpec& method, const SpectralGrid& grid,
                        const ProblemSpec& problem, const SpectralState& initial) {
  if (initial.dim() != grid.dim) throw ConfigError("initial state dimension does not match grid");
  if (initial.band() < grid.n_high)
    throw ConfigError("initial state band " + std::to_string(initial.band()) +
                      " is below the grid band " + std::to_string(grid.n_high));
  if (method.filter_cut > grid.n_cut) throw ConfigError("filter cut exceeds n_cut");

  PreparedRun p;
  p.method = method;
  p.grid = grid;
  p.f = problem.f;
  p.sigma = problem.sigma;
  p.t_final = method.tau * static_cast<double>(method.n_steps);

  SpectralState full = restrict_to(initial, grid.n_high);
  p.low0 = restrict_to(full, storage_band(method, grid));
  if (method.kind == Method::hr_lri && method.recovery) {
    full -= embed(p.low0, grid.n_high);
    p.high0 = std::move(full);
    p.high_final = recover_high(p.high0, p.t_final);
    p.has_high = true;
  }
  return p;
}

RunResult integrate(const PreparedRun& p, const WienerLattice& path, const RunOptions& options) {
  const MethodSpec& m = p.method;
  const long ratio = step_ratio(m.tau, path.base_dt);
  if (ratio * m.n_steps > path.size())
    throw std::invalid_argument("Brownian path is shorter than the integration interval");

  const auto started = std::chrono::steady_clock::now();
  const int band = p.low0.band();
  const int n_high = p.grid.n_high;
  const auto group = propagator_table(p.low0.dim(), band, m.tau);

  auto full_state = [&](const SpectralState& low, double t) {
    SpectralState s = embed(low, n_high);
    if (p.has_high) s += t == p.t_final ? p.high_final : apply_group(p.high0, t);
    return s;
  };
  auto observe = [&](long step, const SpectralState& low) {
    if (options.observer) options.observer(step, m.tau * static_cast<double>(step), full_state(low, m.tau * static_cast<double>(step)));
  };

  const int cut = m.kind == Method::lri_filtered ? m.filter_cut : band;
  SpectralState state = p.low0;
  if (options.snapshot_stride > 0) observe(0, state);
  for (long n = 0; n < m.n_steps; ++n) {
    double dW = 0.0;
    for (long i = n * ratio; i < (n + 1) * ratio; ++i) dW += path.increments[static_cast<std::size_t>(i)];
    try {
      add_forcing(state, m.tau, dW, p.f, p.sigma, cut, options.pseudospectral);
    } catch (const std::domain_error& e) {
      throw NumericalFailure(e.what(), n);
    }
    if (m.kind == Method::sem)
      state = apply_resolvent(state, m.tau);
    else
      group->apply(state);
    if (!state.all_finite()) throw NumericalFailure("non-finite coefficients", n + 1);
    if (options.snapshot_stride > 0 && (n + 1) % options.snapshot_stride == 0 && n + 1 != m.n_steps)
      observe(n + 1, state);
  }

  RunResult r;
  r.steps = m.n_steps;
  r.final_state = full_state(state, p.t_final);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (options.snapshot_stride > 0 && options.observer) options.observer(m.n_steps, p.t_final, r.final_state);
  return r;
}

RunResult run(const MethodSpec& method, const SpectralGrid& grid, const ProblemSpec& problem,
              const WienerLattice& path, const RunOptions& options) {
  const SpectralState initial = build_initial(problem.initial, grid.dim, grid.n_high);
  return integrate(prepare_run(method, grid, problem, initial), path, options);
}

std::pair<double, double> exact_linear_zero_mode(double u0, double v0, double c,
                                                 const WienerLattice& path, double t_final) {
  const long steps = step_ratio(t_final, path.base_dt);
  if (steps > path.size()) throw std::invalid_argument("path does not cover t_final");
  const double h = path.base_dt;
  double u = u0;
  double v = v0;
  double w = 0.0;
  for (long i = 0; i < steps; ++i) {
    const double dw = path.increments[static_cast<std::size_t>(i)];
    u += v * h + c * dw * h / 2.0;
    w += dw;
    v = v0 + c * w;
  }
  return {u, v};
}

}  // namespace swe
