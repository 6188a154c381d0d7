#pragma once

// Per-mode action of the linear wave group exp(tL), L = [[0, 1], [Laplacian, 0]],
// and of the implicit Euler resolvent (I - tau L)^{-1}.

#include <memory>
#include <vector>

#include "swe/spectral.hpp"

namespace swe {

// 2x2 matrix acting on (u_k, v_k) of one mode.
struct ModePropagator {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  double determinant() const { return a11 * a22 - a12 * a21; }
};

ModePropagator operator*(const ModePropagator& a, const ModePropagator& b);

// [[cos(lt), sin(lt)/l], [-l sin(lt), cos(lt)]]; [[1, t], [0, 1]] at l = 0.
// sin(lt)/l switches to a Taylor series for |lt| < 1e-4.
ModePropagator propagator(double lambda, double t);

// (1 / (1 + tau^2 l^2)) [[1, tau], [-tau l^2, 1]].
ModePropagator resolvent(double lambda, double tau);

// Propagators of every stored mode of a band for a fixed t.
class PropagatorTable {
 public:
  PropagatorTable(int dim, int band, double t);

  int dim() const { return dim_; }
  int band() const { return band_; }
  double time() const { return t_; }

  void apply(SpectralState& state) const;

 private:
  int dim_;
  int band_;
  double t_;
  std::vector<ModePropagator> table_;
};

// Shared, immutable table for (dim, band, t); t is keyed by its exact bit
// pattern. Safe to call concurrently.
std::shared_ptr<const PropagatorTable> propagator_table(int dim, int band, double t);
void clear_propagator_cache();

SpectralState apply_group(const SpectralState& state, double t);

// Solves (I - tau L) x = state mode by mode. Throws std::invalid_argument for tau <= 0.
SpectralState apply_resolvent(const SpectralState& state, double tau);

// (I - tau L) state, the inverse of apply_resolvent.
SpectralState apply_implicit_operator(const SpectralState& state, double tau);

}  // namespace swe
