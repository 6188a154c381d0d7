#pragma once

// Monte Carlo strong-convergence studies over coupled Brownian paths.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swe/config.hpp"

namespace swe {

struct LevelRow {
  double tau = 0.0;
  int n_cut = 0;
  long n_samples = 0;       // samples that entered the average
  double rms_error = 0.0;   // sqrt(mean ||U_ref - U||_0^2)
  double std_error = 0.0;   // standard error of rms_error (delta method)
  long excluded = 0;        // samples dropped for non-finite results
  double wall_seconds = 0.0;  // mean per run; 0 unless timing is on
};

struct ConvergenceReport {
  Method method = Method::hr_lri;
  std::vector<LevelRow> rows;  // decreasing tau
  std::optional<double> fitted_order;
};

// Least-squares slope of log(rms) against log(tau). nullopt when fewer than
// three rows carry a positive error (the linear-exact case); throws
// std::invalid_argument for fewer than three rows.
std::optional<double> estimate_order(std::span<const LevelRow> rows);
std::optional<double> estimate_order(std::span<const double> taus, std::span<const double> errors);

// One report per configured method. Every sample draws one path at the
// reference step, computes the hr_lri reference on it and runs every
// (method, level) on coarsened increments of the same path.
std::vector<ConvergenceReport> run_convergence(const ExperimentConfig& config);

// Zero-mode strong error against exact_linear_zero_mode for sigma = const c,
// f = 0, on a base lattice of step base_dt.
std::vector<ConvergenceReport> run_zero_mode_convergence(const ExperimentConfig& config, double c,
                                                         double base_dt);

// Throws NumericalFailure when any row excluded more than 1% of its samples.
void check_exclusions(std::span<const ConvergenceReport> reports);

inline constexpr const char* kCsvHeader =
    "method,tau,n_cut,n_samples,rms_error,stderr,excluded,wall_seconds";

void emit_csv(std::span<const ConvergenceReport> reports, std::ostream& os);
void emit_csv(std::span<const ConvergenceReport> reports, const std::filesystem::path& file);
std::vector<ConvergenceReport> parse_csv(std::istream& is);
std::vector<ConvergenceReport> parse_csv(const std::filesystem::path& file);

struct SingleRunSummary {
  Method method = Method::hr_lri;
  long steps = 0;
  double final_norm0 = 0.0;
  double final_energy_norm = 0.0;  // ||.||_1
  std::vector<std::filesystem::path> files;
  std::string line;
};

// One path, one method (config.methods.front()) at the coarsest level; writes
// SWV1 snapshots and (x u) plot data every snapshot_stride steps (t = 0 and T
// always) into config.out_dir.
SingleRunSummary run_single(const ExperimentConfig& config, std::uint64_t sample_index);

struct Comparison {
  std::vector<ConvergenceReport> reports;
  std::filesystem::path csv;
  std::vector<std::filesystem::path> plot_files;
};

// run_convergence with timing on; writes comparison.csv and one
// error_vs_time_<method>.dat per method into config.out_dir.
Comparison compare_methods(const ExperimentConfig& config);

// Plot data: one '#' header line, then whitespace-separated "x y" rows.
void write_plot_data(const std::filesystem::path& file, const std::string& header,
                     std::span<const double> x, std::span<const double> y);

}  // namespace swe
