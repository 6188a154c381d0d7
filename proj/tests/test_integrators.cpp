#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "swe/integrators.hpp"
#include "swe/wave_group.hpp"

using namespace swe;
using swe::testing::bit_identical;
using swe::testing::direct_dft;
using swe::testing::direct_synthesis;
using swe::testing::max_abs_diff;
using swe::testing::random_state;

namespace {

// Direct O(n^2) evaluation of P_cut g(P_cut u) for a 1D band-limited u.
std::vector<Complex> direct_projected_image(const Nonlinearity& g, std::span<const Complex> u,
                                            int band, int cut) {
  std::vector<Complex> low(u.begin(), u.end());
  for (int i = 0; i < 2 * band; ++i)
    if (std::abs(mode_of(i, band)) > cut) low[i] = Complex{};
  auto x = direct_synthesis(low, band);
  for (double& s : x) s = g(s);
  auto c = direct_dft(x, band);
  for (int i = 0; i < 2 * band; ++i)
    if (std::abs(mode_of(i, band)) > cut) c[i] = Complex{};
  return c;
}

// exp(tL) written out mode by mode with cos and sin.
SpectralState direct_group(const SpectralState& s, double t) {
  SpectralState out(s.dim(), s.band());
  for_each_mode(s.dim(), s.band(), [&](std::size_t i, int k1, int k2) {
    const double l = wave_number(k1, k2);
    const Complex u = s.u()[i], v = s.v()[i];
    if (l == 0.0) {
      out.u()[i] = u + t * v;
      out.v()[i] = v;
    } else {
      out.u()[i] = std::cos(l * t) * u + std::sin(l * t) / l * v;
      out.v()[i] = -l * std::sin(l * t) * u + std::cos(l * t) * v;
    }
  });
  return out;
}

WienerLattice negated(WienerLattice p) {
  for (double& x : p.increments) x = -x;
  return p;
}

ProblemSpec problem_with(Nonlinearity f, Nonlinearity sigma, InitialData::Kind kind,
                         double t_final = 0.25) {
  ProblemSpec p;
  p.f = std::move(f);
  p.sigma = std::move(sigma);
  p.initial.kind = kind;
  p.t_final = t_final;
  return p;
}

}  // namespace

TEST_CASE("method names and specs") {
  for (Method m : {Method::hr_lri, Method::lri_filtered, Method::sem, Method::stm})
    CHECK(parse_method(method_name(m)) == m);
  CHECK(method_name(Method::hr_lri) == "hrlri");
  CHECK_THROWS_AS(parse_method("euler"), ConfigError);

  const auto grid = make_grid(1, 8, 2.0);
  const auto a = make_method(Method::lri_filtered, 1.0 / 32.0, 0.25, grid);
  CHECK(a.n_steps == 8);
  CHECK(a.filter_cut == 8);
  CHECK(!a.recovery);
  CHECK(storage_band(a, grid) == 64);
  const auto wide = make_grid(1, 128, 1.0);
  CHECK(make_method(Method::lri_filtered, 1.0 / 32.0, 0.25, wide).filter_cut == 32);
  const auto h = make_method(Method::hr_lri, 1.0 / 32.0, 0.25, grid);
  CHECK(h.recovery);
  CHECK(storage_band(h, grid) == 8);
  CHECK(storage_band(make_method(Method::sem, 1.0 / 32.0, 0.25, grid), grid) == 8);
  CHECK_THROWS_AS(make_method(Method::stm, 0.1, 0.25, grid), ConfigError);
}

TEST_CASE("step_lri against a direct evaluation") {
  const int band = 8, cut = 5;
  const double tau = 0.03, dW = 0.2;
  const auto f = Nonlinearity::scaled_cosine(0.5, 2.0);
  const auto sigma = Nonlinearity::scaled_sine(3.0, 1.0);
  const auto s = random_state(1, band, 17);

  SpectralState expected = s;
  const auto F = direct_projected_image(f, s.u(), band, cut);
  const auto S = direct_projected_image(sigma, s.u(), band, cut);
  for (std::size_t i = 0; i < s.size(); ++i) expected.v()[i] += tau * F[i] + dW * S[i];
  expected = direct_group(expected, tau);

  CHECK(max_abs_diff(step_lri(s, tau, dW, f, sigma, cut), expected) < 1e-12);
  CHECK_THROWS_AS(step_lri(s, tau, dW, f, sigma, band + 1), std::out_of_range);
}

TEST_CASE("one-step maps: degenerate cases") {
  const auto s = random_state(2, 6, 19);
  const auto sigma = Nonlinearity::scaled_sine(16.0, 1.0);
  const auto f = Nonlinearity::scaled_cosine(1.0, 1.0);
  SUBCASE("no forcing: pure propagation") {
    CHECK(max_abs_diff(step_lri(s, 0.05, 0.3, {}, {}, 6), apply_group(s, 0.05)) == 0.0);
    CHECK(max_abs_diff(step_stm(s, 0.05, 0.3, {}), apply_group(s, 0.05)) == 0.0);
    CHECK(max_abs_diff(step_sem(s, 0.05, 0.3, {}), apply_resolvent(s, 0.05)) == 0.0);
  }
  SUBCASE("dW = 0 removes the noise term") {
    CHECK(max_abs_diff(step_stm(s, 0.05, 0.0, sigma, f), step_stm(s, 0.05, 0.0, {}, f)) == 0.0);
  }
  SUBCASE("stm coincides with the low-band hrlri step") {
    CHECK(bit_identical(step_stm(s, 0.05, 0.1, sigma, f), step_hrlri_low(s, 0.05, 0.1, f, sigma, 6)));
    CHECK(bit_identical(step_lri(s, 0.05, 0.1, f, sigma, 6), step_hrlri_low(s, 0.05, 0.1, f, sigma, 6)));
    CHECK_THROWS_AS(step_hrlri_low(s, 0.05, 0.1, f, sigma, 5), std::invalid_argument);
  }
  SUBCASE("zero is a fixed point when f(0) = sigma(0) = 0") {
    const SpectralState zero(2, 6);
    CHECK(max_abs_diff(step_stm(zero, 0.05, 0.7, sigma), zero) == 0.0);
    CHECK(max_abs_diff(step_sem(zero, 0.05, 0.7, sigma), zero) == 0.0);
    CHECK(max_abs_diff(step_lri(zero, 0.05, 0.7, {}, sigma, 3), zero) == 0.0);
  }
  SUBCASE("sem solves the implicit system") {
    const auto next = step_sem(s, 0.05, 0.2, sigma, f);
    SpectralState rhs = s;
    const auto F = pseudospectral_apply(std::cref(f), s.u(), 2, 6, 6);
    const auto S = pseudospectral_apply(std::cref(sigma), s.u(), 2, 6, 6);
    for (std::size_t i = 0; i < s.size(); ++i) rhs.v()[i] += 0.05 * F[i] + 0.2 * S[i];
    CHECK(max_abs_diff(apply_implicit_operator(next, 0.05), rhs) < 1e-12);
  }
}

TEST_CASE("sem damps the linear energy") {
  auto s = random_state(1, 32, 23);
  s.u()[0] = s.v()[0] = Complex{};
  auto energy = [](const SpectralState& x) {
    double e = 0.0;
    for_each_mode(1, x.band(), [&](std::size_t i, int k, int) {
      const double l = wave_number(k, 0);
      e += l * l * std::norm(x.u()[i]) + std::norm(x.v()[i]);
    });
    return e;
  };
  double prev = energy(s);
  for (int n = 0; n < 20; ++n) {
    s = step_sem(s, 0.02, 0.0, {});
    const double e = energy(s);
    CHECK(e <= prev * (1 + 1e-14));
    prev = e;
  }
}

TEST_CASE("recover_high equals n group steps") {
  const auto grid = make_grid(1, 8, 2.0);
  const auto init = build_random_hgamma(1, grid.n_high, 0.5, 4);
  auto high = init;
  high -= embed(restrict_to(init, grid.n_cut), grid.n_high);
  auto stepped = high;
  for (int n = 0; n < 8; ++n) stepped = apply_group(stepped, 1.0 / 32.0);
  CHECK(max_abs_diff(recover_high(high, 0.25), stepped) < 1e-11);
  CHECK(max_abs_diff(recover_high(high, 0.25), direct_group(high, 0.25)) < 1e-13);
}

TEST_CASE("prepare_run decomposition") {
  const auto grid = make_grid(1, 8, 2.0);
  const auto spec = make_method(Method::hr_lri, 1.0 / 32.0, 0.25, grid);
  const auto problem = problem_with({}, Nonlinearity::scaled_sine(16.0, 1.0), InitialData::Kind::random_hgamma);
  const auto init = build_initial(problem.initial, 1, 256);
  const auto p = prepare_run(spec, grid, problem, init);
  CHECK(p.low0.band() == 8);
  CHECK(p.high0.band() == 64);
  CHECK(p.has_high);
  CHECK(max_abs_diff(embed(p.low0, 64) + p.high0, restrict_to(init, 64)) < 1e-15);
  CHECK(max_abs_diff(p.high_final, apply_group(p.high0, 0.25)) == 0.0);

  const auto lri = prepare_run(make_method(Method::lri_filtered, 1.0 / 32.0, 0.25, grid), grid, problem, init);
  CHECK(lri.low0.band() == 64);
  CHECK(!lri.has_high);
  CHECK_THROWS_AS(prepare_run(spec, grid, problem, restrict_to(init, 32)), ConfigError);
}

TEST_CASE("integrate") {
  const auto grid = make_grid(1, 8, 2.0);
  const double tau = 1.0 / 32.0;
  const auto sigma = Nonlinearity::scaled_sine(16.0, 1.0);
  const auto path = sample_path(1, 0, 0.25, tau / 4);

  SUBCASE("zero steps return the initial state") {
    auto spec = make_method(Method::hr_lri, tau, 0.25, grid);
    spec.n_steps = 0;
    const auto problem = problem_with({}, sigma, InitialData::Kind::indicator);
    const auto init = build_indicator_1d(64);
    const auto r = integrate(prepare_run(spec, grid, problem, init), path);
    CHECK(r.steps == 0);
    CHECK(max_abs_diff(r.final_state, init) < 1e-15);
  }
  SUBCASE("linear problems are propagated exactly") {
    const auto problem = problem_with({}, {}, InitialData::Kind::random_hgamma);
    const auto init = build_initial(problem.initial, 1, 64);
    const auto exact = apply_group(init, 0.25);
    for (Method m : {Method::hr_lri, Method::lri_filtered}) {
      const auto r = run(make_method(m, tau, 0.25, grid), grid, problem, path);
      CHECK(sobolev_distance(r.final_state, exact, 0.0) < 1e-10);
    }
    const auto stm = run(make_method(Method::stm, tau, 0.25, grid), grid, problem, path);
    CHECK(sobolev_distance(stm.final_state, apply_group(restrict_to(init, 8), 0.25), 0.0) < 1e-10);
  }
  SUBCASE("step-by-step agreement with the one-step maps") {
    const auto f = Nonlinearity::scaled_cosine(0.3, 1.0);
    auto problem = problem_with(f, sigma, InitialData::Kind::indicator);
    const auto spec = make_method(Method::stm, tau, 0.25, grid);
    const auto r = run(spec, grid, problem, path);
    auto s = restrict_to(build_indicator_1d(64), 8);
    const auto dW = coarse_increments(path, tau);
    for (double w : dW) s = step_stm(s, tau, w, sigma, f);
    CHECK(max_abs_diff(r.final_state, embed(s, 64)) < 1e-12);

    const auto lspec = make_method(Method::lri_filtered, tau, 0.25, grid);
    const auto lr = run(lspec, grid, problem, path);
    auto ls = build_indicator_1d(64);
    for (double w : dW) ls = step_lri(ls, tau, w, f, sigma, lspec.filter_cut);
    CHECK(max_abs_diff(lr.final_state, ls) < 1e-12);
  }
  SUBCASE("deterministic for a fixed path") {
    const auto problem = problem_with({}, sigma, InitialData::Kind::random_hgamma);
    for (Method m : {Method::hr_lri, Method::lri_filtered, Method::sem, Method::stm}) {
      const auto spec = make_method(m, tau, 0.25, grid);
      CHECK(bit_identical(run(spec, grid, problem, path).final_state,
                          run(spec, grid, problem, path).final_state));
    }
  }
  SUBCASE("recovered band does not depend on the path") {
    const auto problem = problem_with({}, sigma, InitialData::Kind::random_hgamma);
    const auto spec = make_method(Method::hr_lri, tau, 0.25, grid);
    const auto a = run(spec, grid, problem, sample_path(1, 0, 0.25, tau)).final_state;
    const auto b = run(spec, grid, problem, sample_path(2, 0, 0.25, tau)).final_state;
    bool same = true, low_differs = false;
    for_each_mode(1, 64, [&](std::size_t i, int k, int) {
      if (std::abs(k) > 8)
        same = same && a.u()[i] == b.u()[i] && a.v()[i] == b.v()[i];
      else if (a.u()[i] != b.u()[i])
        low_differs = true;
    });
    CHECK(same);
    CHECK(low_differs);
  }
  SUBCASE("additive noise enters affinely") {
    // with constant sigma, U(dW) + U(-dW) = 2 U(0)
    const auto problem = problem_with({}, Nonlinearity::scaled_cosine(2.0, 0.0), InitialData::Kind::indicator);
    WienerLattice zero = path;
    std::fill(zero.increments.begin(), zero.increments.end(), 0.0);
    for (Method m : {Method::hr_lri, Method::sem, Method::stm}) {
      const auto spec = make_method(m, tau, 0.25, grid);
      const auto plus = run(spec, grid, problem, path).final_state;
      const auto minus = run(spec, grid, problem, negated(path)).final_state;
      const auto mid = run(spec, grid, problem, zero).final_state;
      CHECK(max_abs_diff(plus + minus, 2.0 * mid) < 1e-12);
    }
  }
  SUBCASE("observer sees t = 0, every stride and T") {
    const auto problem = problem_with({}, sigma, InitialData::Kind::indicator);
    std::vector<long> seen;
    RunOptions opt;
    opt.snapshot_stride = 3;
    opt.observer = [&](long step, double t, const SpectralState& s) {
      seen.push_back(step);
      CHECK(t == step * tau);
      CHECK(s.band() == 64);
    };
    run(make_method(Method::hr_lri, tau, 0.25, grid), grid, problem, path, opt);
    CHECK(seen == std::vector<long>{0, 3, 6, 8});
  }
  SUBCASE("misaligned paths are rejected") {
    const auto problem = problem_with({}, sigma, InitialData::Kind::indicator);
    const auto coarse = sample_path(1, 0, 0.25, 1.0 / 16.0);
    CHECK_THROWS_AS(run(make_method(Method::stm, tau, 0.25, grid), grid, problem, coarse), std::invalid_argument);
  }
  SUBCASE("non-finite data is reported as a numerical failure") {
    auto problem = problem_with({}, sigma, InitialData::Kind::explicit_state);
    SpectralState bad(1, 64);
    bad.u()[3] = std::numeric_limits<double>::quiet_NaN();
    problem.initial.state = std::make_shared<const SpectralState>(bad);
    CHECK_THROWS_AS(run(make_method(Method::stm, tau, 0.25, grid), grid, problem, path), NumericalFailure);
    problem.sigma = {};
    try {
      run(make_method(Method::stm, tau, 0.25, grid), grid, problem, path);
      FAIL("expected a numerical failure");
    } catch (const NumericalFailure& e) {
      CHECK(e.step() == 1);
    }
  }
}

TEST_CASE("exact zero-mode solution") {
  const auto path = sample_path(6, 3, 0.5, 1.0 / 256.0);
  const double u0 = 0.4, v0 = -1.2, c = 3.0, h = path.base_dt;
  // u(T) = u0 + v0 T + c int_0^T W, W piecewise linear on the lattice
  double w = 0.0, area = 0.0;
  for (double dw : path.increments) {
    area += h * (2.0 * w + dw) / 2.0;
    w += dw;
  }
  const auto [u, v] = exact_linear_zero_mode(u0, v0, c, path, 0.5);
  CHECK(v == doctest::Approx(v0 + c * w).epsilon(1e-13));
  CHECK(u == doctest::Approx(u0 + v0 * 0.5 + c * area).epsilon(1e-13));
  CHECK_THROWS(exact_linear_zero_mode(u0, v0, c, path, 1.0));
}

TEST_CASE("projection versus interpolation of the noise") {
  const auto s = build_random_hgamma(1, 16, 0.5, 2);
  CHECK(projection_interpolation_gap(s, Nonlinearity::scaled_cosine(3.0, 0.0), 64) < 1e-14);
  const auto identity = Nonlinearity::tabulated(-100.0, 100.0, {-100.0, 100.0});
  CHECK(projection_interpolation_gap(s, identity, 64) < 1e-13);
  const double gap = projection_interpolation_gap(s, Nonlinearity::scaled_sine(16.0, 8.0), 64);
  CHECK(gap > 1e-6);
}
