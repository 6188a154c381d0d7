#include "swe/wiener.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "swe/counter_rng.hpp"

namespace swe {

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double p = counter_uniform(seed, stream, counter);
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

long step_ratio(double span, double step) {
  if (!(step > 0.0) || !(span > 0.0)) throw std::invalid_argument("step and span must be positive");
  const double r = span / step;
  const double nearest = std::round(r);
  if (nearest < 1.0 || std::abs(r - nearest) > 1e-9 * nearest)
    throw std::invalid_argument("step " + std::to_string(step) + " does not divide " +
                                std::to_string(span));
  return static_cast<long>(nearest);
}

WienerLattice sample_path(std::uint64_t seed, std::uint64_t sample_index, double t_final,
                          double base_dt) {
  WienerLattice path;
  path.t_final = t_final;
  path.base_dt = base_dt;
  path.seed = seed;
  path.sample_index = sample_index;
  const long n = step_ratio(t_final, base_dt);
  const double scale = std::sqrt(base_dt);
  path.increments.resize(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    path.increments[static_cast<std::size_t>(i)] =
        scale * counter_normal(seed, sample_index, static_cast<std::uint64_t>(i));
  return path;
}

double increment(const WienerLattice& path, long n, double step_dt) {
  const long r = step_ratio(step_dt, path.base_dt);
  if (n < 0 || (n + 1) * r > path.size())
    throw std::invalid_argument("increment index " + std::to_string(n) + " beyond the path");
  double sum = 0.0;
  for (long i = n * r; i < (n + 1) * r; ++i) sum += path.increments[static_cast<std::size_t>(i)];
  return sum;
}

std::vector<double> coarse_increments(const WienerLattice& path, double step_dt) {
  const long steps = step_ratio(path.t_final, step_dt);
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (long n = 0; n < steps; ++n) out[static_cast<std::size_t>(n)] = increment(path, n, step_dt);
  return out;
}

void write_path_csv(const WienerLattice& path, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os << "n,t_n,dW_n\n";
  char buf[96];
  for (long n = 0; n < path.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", n, static_cast<double>(n) * path.base_dt,
                  path.increments[static_cast<std::size_t>(n)]);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace swe
