#include "swe/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "swe/fft.hpp"
#include "swe/snapshot.hpp"

namespace swe {

namespace {

// Runs fn(0) .. fn(n-1) on `workers` threads. Each index is handled by
// exactly one call; the first exception stops the pool and is rethrown.
template <typename Fn>
void parallel_for(long n, int workers, Fn&& fn) {
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  const int count = static_cast<int>(std::min<long>(std::max(workers, 1), std::max(n, 1L)));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct LevelPlan {
  Method method;
  double tau;
  int n_cut;
  PreparedRun prepared;
};

struct SampleOutcome {
  bool reference_failed = false;
  std::vector<double> err2;
  std::vector<char> failed;
  std::vector<double> wall;
};

std::vector<LevelPlan> plan_levels(const ExperimentConfig& config, const SpectralState& initial) {
  std::vector<LevelPlan> plans;
  for (Method m : config.methods) {
    for (double tau : config.levels) {
      const int n_cut = config.n_cut_for(tau);
      const SpectralGrid grid = make_grid(config.dim, n_cut, config.alpha);
      const MethodSpec spec = make_method(m, tau, config.problem.t_final, grid);
      plans.push_back({m, tau, n_cut, prepare_run(spec, grid, config.problem, initial)});
    }
  }
  return plans;
}

// Band that holds every grid of the study, so one initial state serves all.
int common_band(const ExperimentConfig& config, double extra_tau) {
  int band = make_grid(config.dim, config.n_cut_for(extra_tau), config.alpha).n_high;
  for (double tau : config.levels)
    band = std::max(band, make_grid(config.dim, config.n_cut_for(tau), config.alpha).n_high);
  return band;
}

std::vector<ConvergenceReport> reduce(const ExperimentConfig& config,
                                      const std::vector<LevelPlan>& plans,
                                      const std::vector<SampleOutcome>& outcomes) {
  std::vector<ConvergenceReport> reports;
  std::size_t j = 0;
  for (Method m : config.methods) {
    ConvergenceReport rep;
    rep.method = m;
    for (std::size_t level = 0; level < config.levels.size(); ++level, ++j) {
      LevelRow row;
      row.tau = plans[j].tau;
      row.n_cut = plans[j].n_cut;
      double sum = 0.0;
      double wall = 0.0;
      long n = 0;
      for (const auto& o : outcomes) {
        if (o.reference_failed || o.failed[j]) continue;
        sum += o.err2[j];
        wall += o.wall[j];
        ++n;
      }
      row.n_samples = n;
      row.excluded = static_cast<long>(outcomes.size()) - n;
      if (n > 0) {
        const double mean = sum / static_cast<double>(n);
        double var = 0.0;
        for (const auto& o : outcomes) {
          if (o.reference_failed || o.failed[j]) continue;
          var += (o.err2[j] - mean) * (o.err2[j] - mean);
        }
        var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
        row.rms_error = std::sqrt(mean);
        const double se_mean_square = std::sqrt(var / static_cast<double>(n));
        row.std_error = row.rms_error > 0.0 ? se_mean_square / (2.0 * row.rms_error) : 0.0;
        row.wall_seconds = config.timing ? wall / static_cast<double>(n) : 0.0;
      } else {
        row.rms_error = std::nan("");
        row.std_error = std::nan("");
      }
      rep.rows.push_back(row);
    }
    rep.fitted_order = rep.rows.size() >= 3 ? estimate_order(rep.rows) : std::nullopt;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::optional<double> estimate_order(std::span<const double> taus, std::span<const double> errors) {
  if (taus.size() != errors.size()) throw std::invalid_argument("estimate_order: size mismatch");
  if (taus.size() < 3) throw std::invalid_argument("estimate_order needs at least three rows");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] > 0.0 && errors[i] > 0.0 && std::isfinite(errors[i])) {
      x.push_back(std::log(taus[i]));
      y.push_back(std::log(errors[i]));
    }
  }
  if (x.size() < 3) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::optional<double> estimate_order(std::span<const LevelRow> rows) {
  std::vector<double> taus, errors;
  for (const auto& r : rows) {
    taus.push_back(r.tau);
    errors.push_back(r.rms_error);
  }
  return estimate_order(taus, errors);
}

std::vector<ConvergenceReport> run_convergence(const ExperimentConfig& config) {
  const double tau_ref = config.reference_tau();
  const double t_final = config.problem.t_final;
  const SpectralState initial =
      build_initial(config.problem.initial, config.dim, common_band(config, tau_ref));

  const SpectralGrid ref_grid = make_grid(config.dim, config.n_cut_for(tau_ref), config.alpha);
  const PreparedRun reference = prepare_run(make_method(Method::hr_lri, tau_ref, t_final, ref_grid),
                                            ref_grid, config.problem, initial);
  const std::vector<LevelPlan> plans = plan_levels(config, initial);

  RunOptions options;
  options.pseudospectral.oversample = config.oversample;

  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(config.n_samples));
  parallel_for(config.n_samples, config.workers, [&](long s) {
    SampleOutcome& o = outcomes[static_cast<std::size_t>(s)];
    o.err2.assign(plans.size(), 0.0);
    o.failed.assign(plans.size(), 0);
    o.wall.assign(plans.size(), 0.0);
    const WienerLattice path = sample_path(config.seed, static_cast<std::uint64_t>(s), t_final, tau_ref);
    RunResult ref;
    try {
      ref = integrate(reference, path, options);
    } catch (const NumericalFailure&) {
      o.reference_failed = true;
      return;
    }
    for (std::size_t j = 0; j < plans.size(); ++j) {
      try {
        const RunResult r = integrate(plans[j].prepared, path, options);
        const double e = sobolev_distance(r.final_state, ref.final_state, 0.0);
        o.err2[j] = e * e;
        o.wall[j] = r.wall_time;
      } catch (const NumericalFailure&) {
        o.failed[j] = 1;
      }
    }
  });
  return reduce(config, plans, outcomes);
}

std::vector<ConvergenceReport> run_zero_mode_convergence(const ExperimentConfig& base, double c,
                                                         double base_dt) {
  ExperimentConfig config = base;
  config.problem.sigma = Nonlinearity::scaled_cosine(c, 0.0);
  config.problem.f = Nonlinearity::zero();
  const double t_final = config.problem.t_final;
  for (double tau : config.levels) step_ratio(tau, base_dt);

  const SpectralState initial =
      build_initial(config.problem.initial, config.dim, common_band(config, config.levels.back()));
  const double u0 = initial.u()[0].real();
  const double v0 = initial.v()[0].real();
  const std::vector<LevelPlan> plans = plan_levels(config, initial);

  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(config.n_samples));
  parallel_for(config.n_samples, config.workers, [&](long s) {
    SampleOutcome& o = outcomes[static_cast<std::size_t>(s)];
    o.err2.assign(plans.size(), 0.0);
    o.failed.assign(plans.size(), 0);
    o.wall.assign(plans.size(), 0.0);
    const WienerLattice path = sample_path(config.seed, static_cast<std::uint64_t>(s), t_final, base_dt);
    const auto [ue, ve] = exact_linear_zero_mode(u0, v0, c, path, t_final);
    for (std::size_t j = 0; j < plans.size(); ++j) {
      try {
        const RunResult r = integrate(plans[j].prepared, path);
        const Complex du = r.final_state.u()[0] - ue;
        const Complex dv = r.final_state.v()[0] - ve;
        o.err2[j] = std::norm(du) + std::norm(dv);
        o.wall[j] = r.wall_time;
      } catch (const NumericalFailure&) {
        o.failed[j] = 1;
      }
    }
  });
  return reduce(config, plans, outcomes);
}

void check_exclusions(std::span<const ConvergenceReport> reports) {
  for (const auto& rep : reports) {
    for (const auto& row : rep.rows) {
      const long total = row.n_samples + row.excluded;
      if (total > 0 && 100 * row.excluded > total)
        throw NumericalFailure(std::string(method_name(rep.method)) + " at tau " +
                                   format_double(row.tau) + " excluded " +
                                   std::to_string(row.excluded) + " of " + std::to_string(total) +
                                   " samples",
                               0);
    }
  }
}

void emit_csv(std::span<const ConvergenceReport> reports, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      os << method_name(rep.method) << ',' << format_double(r.tau) << ',' << r.n_cut << ','
         << r.n_samples << ',' << format_double(r.rms_error) << ',' << format_double(r.std_error)
         << ',' << r.excluded << ',' << format_double(r.wall_seconds) << '\n';
    }
  }
}

void emit_csv(std::span<const ConvergenceReport> reports, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  emit_csv(reports, os);
  if (!os) throw std::runtime_error("write failed: " + file.string());
}

std::vector<ConvergenceReport> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw std::runtime_error("convergence CSV: unexpected header");
  std::vector<ConvergenceReport> reports;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8)
      throw std::runtime_error("convergence CSV line " + std::to_string(lineno) + ": expected 8 columns");
    const Method m = parse_method(cells[0]);
    if (reports.empty() || reports.back().method != m) reports.push_back({m, {}, std::nullopt});
    LevelRow r;
    r.tau = std::stod(cells[1]);
    r.n_cut = std::stoi(cells[2]);
    r.n_samples = std::stol(cells[3]);
    r.rms_error = std::stod(cells[4]);
    r.std_error = std::stod(cells[5]);
    r.excluded = std::stol(cells[6]);
    r.wall_seconds = std::stod(cells[7]);
    reports.back().rows.push_back(r);
  }
  for (auto& rep : reports)
    rep.fitted_order = rep.rows.size() >= 3 ? estimate_order(rep.rows) : std::nullopt;
  return reports;
}

std::vector<ConvergenceReport> parse_csv(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  return parse_csv(is);
}

void write_plot_data(const std::filesystem::path& file, const std::string& header,
                     std::span<const double> x, std::span<const double> y) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os << "# " << header << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  if (!os) throw std::runtime_error("write failed: " + file.string());
}

SingleRunSummary run_single(const ExperimentConfig& config, std::uint64_t sample_index) {
  if (config.levels.empty()) throw ConfigError("no time step configured");
  const Method method = config.methods.front();
  const double tau = config.levels.front();
  const double t_final = config.problem.t_final;
  const SpectralGrid grid = make_grid(config.dim, config.n_cut_for(tau), config.alpha);
  const MethodSpec spec = make_method(method, tau, t_final, grid);
  const SpectralState initial = build_initial(config.problem.initial, config.dim, grid.n_high);
  const PreparedRun prepared = prepare_run(spec, grid, config.problem, initial);
  // Base lattice at the reference step: the same path a convergence study uses.
  const WienerLattice path = sample_path(config.seed, sample_index, t_final, config.reference_tau());

  std::filesystem::create_directories(config.out_dir);
  SingleRunSummary summary;
  summary.method = method;
  RunOptions options;
  options.pseudospectral.oversample = config.oversample;
  options.snapshot_stride = config.snapshot_stride > 0 ? config.snapshot_stride : spec.n_steps;
  options.observer = [&](long step, double t, const SpectralState& s) {
    char stem[64];
    std::snprintf(stem, sizeof stem, "%s_s%llu_%06ld", std::string(method_name(method)).c_str(),
                  static_cast<unsigned long long>(sample_index), step);
    const auto bin = config.out_dir / (std::string(stem) + ".swv");
    write_snapshot(bin, s, t);
    const std::vector<double> u = inverse(s.u(), s.dim(), s.band());
    const int n = s.points_per_dim();
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      xs[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
      // 2D: the line x2 = 0.5.
      const std::size_t idx = s.dim() == 1 ? static_cast<std::size_t>(j)
                                           : static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                                                 static_cast<std::size_t>(n / 2);
      ys[static_cast<std::size_t>(j)] = u[idx];
    }
    const auto dat = config.out_dir / (std::string(stem) + ".dat");
    write_plot_data(dat, "x u  t=" + format_double(t), xs, ys);
    summary.files.push_back(bin);
    summary.files.push_back(dat);
  };

  const RunResult r = integrate(prepared, path, options);
  summary.steps = r.steps;
  summary.final_norm0 = sobolev_norm(r.final_state, 0.0);
  summary.final_energy_norm = sobolev_norm(r.final_state, 1.0);
  std::ostringstream line;
  line.precision(10);
  line << "method=" << method_name(method) << " sample=" << sample_index << " tau=" << tau
       << " N=" << grid.n_cut << " N_high=" << grid.n_high << " steps=" << r.steps
       << " T=" << t_final << " norm0=" << summary.final_norm0
       << " norm1=" << summary.final_energy_norm << " files=" << summary.files.size();
  summary.line = line.str();
  return summary;
}

Comparison compare_methods(const ExperimentConfig& base) {
  if (base.methods.size() < 2) throw ConfigError("compare needs at least two methods");
  ExperimentConfig config = base;
  config.timing = true;
  Comparison out;
  out.reports = run_convergence(config);
  std::filesystem::create_directories(config.out_dir);
  out.csv = config.out_dir / "comparison.csv";
  emit_csv(out.reports, out.csv);
  for (const auto& rep : out.reports) {
    std::vector<double> wall, err;
    for (const auto& r : rep.rows) {
      wall.push_back(r.wall_seconds);
      err.push_back(r.rms_error);
    }
    const auto file =
        config.out_dir / ("error_vs_time_" + std::string(method_name(rep.method)) + ".dat");
    write_plot_data(file, "wall_seconds rms_error", wall, err);
    out.plot_files.push_back(file);
  }
  return out;
}

}  // namespace swe
