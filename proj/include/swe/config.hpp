#pragma once

// Experiment configuration: a flat key=value text file, one key per line,
// '#' starting a comment. Command-line flags override file values.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swe/integrators.hpp"
#include "swe/problem.hpp"

namespace swe {

using KeyValues = std::map<std::string, std::string>;

struct ExperimentConfig {
  int dim = 1;
  int example = 2;  // 1-4 select the reference set-ups, 0 leaves the problem explicit
  ProblemSpec problem;
  std::vector<Method> methods = {Method::hr_lri};
  std::vector<double> levels;  // decreasing time steps
  double tau_ref = 0.0;        // reference step; 0 means finest level / 4
  double cfl = 0.25;           // N = cfl / tau
  double alpha = 2.0;
  int n_samples = 128;
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path out_dir = "out";
  bool timing = false;      // measure wall time (makes CSV output non-reproducible)
  bool oversample = false;  // evaluate nonlinearities on a 3/2 grid
  long snapshot_stride = 0;
  std::uint64_t sample_index = 0;

  // n_cut bound to a time step by the CFL coupling; throws ConfigError when
  // cfl / tau is not a positive integer.
  int n_cut_for(double tau) const;
  double reference_tau() const;
};

// Throws ConfigError on a malformed line.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& file);

// Example defaults first, then every other key. Throws ConfigError on an
// unknown key, a bad value or an inconsistent level set.
ExperimentConfig build_config(const KeyValues& values);

// dim=1, example 2, levels 2^-5 .. 2^-9, 128 samples.
ExperimentConfig default_config();

}  // namespace swe
