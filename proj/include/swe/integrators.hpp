#pragma once

// Time stepping for the first-order system
//   dU = L U dt + F(U) dt + Sigma(U) dW,  F(U) = (0, f(u)), Sigma(U) = (0, sigma(u)).
//
//   hr_lri        low band <= N stepped with interpolated nonlinearities, band
//                 (N, N^alpha] recovered by one exact propagation at T
//   lri_filtered  semi-discrete filtered scheme on the full band, nonlinear
//                 terms projected to the filter cutoff
//   sem           semi-implicit Euler-Maruyama on the band N
//   stm           stochastic trigonometric method on the band N

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "swe/problem.hpp"
#include "swe/spectral.hpp"
#include "swe/wiener.hpp"

namespace swe {

enum class Method { hr_lri, lri_filtered, sem, stm };

// "hrlri", "lri", "sem", "stm".
std::string_view method_name(Method m);
// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);

struct MethodSpec {
  Method kind = Method::hr_lri;
  double tau = 0.0;
  long n_steps = 0;
  int filter_cut = 0;     // modes kept in the nonlinear terms
  bool recovery = false;  // hr_lri only
};

// n_steps = t_final / tau, filter_cut = min(floor(1/tau), n_cut), recovery on
// for hr_lri. Throws ConfigError when tau does not divide t_final.
MethodSpec make_method(Method kind, double tau, double t_final, const SpectralGrid& grid);

// Band on which a method stores its time-stepped state.
int storage_band(const MethodSpec& method, const SpectralGrid& grid);

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// exp(tau L)[U + tau P F(P U) + dW P Sigma(P U)], P = projection to `cut`.
SpectralState step_lri(const SpectralState& state, double tau, double dW, const Nonlinearity& f,
                       const Nonlinearity& sigma, int cut,
                       const PseudospectralOptions& options = {});

// exp(tau L)[U + tau I_N F(U) + dW I_N Sigma(U)] for a state of band n_cut.
SpectralState step_hrlri_low(const SpectralState& state_low, double tau, double dW,
                             const Nonlinearity& f, const Nonlinearity& sigma, int n_cut,
                             const PseudospectralOptions& options = {});

// exp(t L) applied to the recovery-band component of the initial state.
SpectralState recover_high(const SpectralState& initial_band, double t);

// (I - tau L)^{-1}[U + tau I_N F(U) + dW I_N Sigma(U)].
SpectralState step_sem(const SpectralState& state, double tau, double dW,
                       const Nonlinearity& sigma, const Nonlinearity& f = {},
                       const PseudospectralOptions& options = {});

// exp(tau L)[U + tau I_N F(U) + dW I_N Sigma(U)].
SpectralState step_stm(const SpectralState& state, double tau, double dW,
                       const Nonlinearity& sigma, const Nonlinearity& f = {},
                       const PseudospectralOptions& options = {});

// ||P_N sigma(u) - I_N sigma(u)||_0 for u of band `fine_band` restricted to
// n_cut: the gap between projecting and interpolating the noise term.
double projection_interpolation_gap(const SpectralState& state_low, const Nonlinearity& sigma,
                                    int fine_band);

struct RunOptions {
  PseudospectralOptions pseudospectral;
  // Observer called at t = 0, every `snapshot_stride` steps and at T with the
  // full-band state (recovered band included).
  long snapshot_stride = 0;
  std::function<void(long step, double t, const SpectralState& state)> observer;
};

struct RunResult {
  SpectralState final_state;  // band grid.n_high
  double wall_time = 0.0;     // seconds
  long steps = 0;
};

// A method bound to a grid and an initial state: the initial decomposition
// and the recovered high band at T are computed once and shared by every
// path integrated from it.
struct PreparedRun {
  MethodSpec method;
  SpectralGrid grid;
  Nonlinearity f;
  Nonlinearity sigma;
  double t_final = 0.0;
  SpectralState low0;        // band storage_band(method, grid)
  SpectralState high0;       // band n_high; empty without recovery
  SpectralState high_final;  // exp(T L) high0
  bool has_high = false;
};

// `initial` may be given at any band >= grid.n_high. For hr_lri the recovery
// component is initial - embed(restrict(initial, N)): the band (N, N^alpha]
// plus the part of the modes +-N the band-N grid cannot hold.
PreparedRun prepare_run(const MethodSpec& method, const SpectralGrid& grid,
                        const ProblemSpec& problem, const SpectralState& initial);

// Throws std::invalid_argument when tau is not a multiple of path.base_dt and
// NumericalFailure when a step produces non-finite coefficients.
RunResult integrate(const PreparedRun& prepared, const WienerLattice& path,
                    const RunOptions& options = {});

RunResult run(const MethodSpec& method, const SpectralGrid& grid, const ProblemSpec& problem,
              const WienerLattice& path, const RunOptions& options = {});

// Zero mode of du = v dt, dv = c dW: v exact from partial sums, u advanced on
// the base lattice with the trapezoidal area u += v h + c dW h / 2.
std::pair<double, double> exact_linear_zero_mode(double u0, double v0, double c,
                                                 const WienerLattice& path, double t_final);

}  // namespace swe
