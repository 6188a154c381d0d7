// swe: stochastic wave equation solver and convergence-study driver.
//
//   swe run      one path, one method, snapshots and plot data
//   swe converge Monte Carlo strong-error study, convergence.csv
//   swe compare  study of several methods with timings, comparison.csv
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "swe/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> method;
  std::optional<int> dim;
  std::optional<double> gamma;
  std::optional<double> alpha;
  std::optional<double> tau;
  std::optional<double> tfinal;
  std::optional<int> levels;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<int> example;
  std::optional<long> stride;
  std::optional<std::uint64_t> sample;
  bool full_fidelity = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file");
  cmd->add_option("--seed", f.seed, "Brownian path seed");
  cmd->add_option("--samples", f.samples, "Monte Carlo samples");
  cmd->add_option("--method", f.method, "hrlri|lri|sem|stm, comma separated for studies");
  cmd->add_option("--dim", f.dim, "spatial dimension (1 or 2)");
  cmd->add_option("--gamma", f.gamma, "regularity of random initial data");
  cmd->add_option("--alpha", f.alpha, "recovery exponent");
  cmd->add_option("--tau", f.tau, "largest time step");
  cmd->add_option("--tfinal", f.tfinal, "final time");
  cmd->add_option("--levels", f.levels, "number of halved time steps");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--example", f.example, "reference set-up 1-4 (0 for explicit)");
  cmd->add_flag("--full-fidelity", f.full_fidelity, "1000 Monte Carlo samples");
}

swe::ExperimentConfig resolve(const Flags& f) {
  swe::KeyValues kv;
  if (!f.config.empty()) kv = swe::load_key_values(f.config);
  auto set = [&kv](const char* key, const auto& value) {
    if (value) kv[key] = [&] {
      if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>)
        return *value;
      else {
        std::ostringstream os;
        os.precision(17);
        os << *value;
        return os.str();
      }
    }();
  };
  set("example", f.example);
  set("seed", f.seed);
  set("samples", f.samples);
  if (f.method) {
    kv.erase("method");
    kv["methods"] = *f.method;
  }
  set("dim", f.dim);
  set("gamma", f.gamma);
  set("alpha", f.alpha);
  set("tau", f.tau);
  set("tfinal", f.tfinal);
  set("levels", f.levels);
  set("out", f.out);
  set("workers", f.workers);
  set("snapshot_stride", f.stride);
  set("sample_index", f.sample);
  if (f.full_fidelity) kv["full_fidelity"] = "1";
  return swe::build_config(kv);
}

void print_orders(const std::vector<swe::ConvergenceReport>& reports) {
  for (const auto& rep : reports) {
    std::printf("%-6s", std::string(swe::method_name(rep.method)).c_str());
    for (const auto& r : rep.rows) std::printf("  tau=%-10.4g err=%-12.5g", r.tau, r.rms_error);
    if (rep.fitted_order)
      std::printf("  order=%.3f\n", *rep.fitted_order);
    else
      std::printf("  order=n/a\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic nonlinear wave equation solver"};
  app.require_subcommand(1);
  Flags run_flags, conv_flags, cmp_flags;
  auto* run = app.add_subcommand("run", "integrate one sample path and write snapshots");
  add_flags(run, run_flags);
  run->add_option("--stride", run_flags.stride, "snapshot stride in steps");
  run->add_option("--sample", run_flags.sample, "sample index of the path");
  auto* converge = app.add_subcommand("converge", "Monte Carlo strong convergence study");
  add_flags(converge, conv_flags);
  auto* compare = app.add_subcommand("compare", "compare methods: error and wall time");
  add_flags(compare, cmp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const auto config = resolve(run_flags);
      const auto summary = swe::run_single(config, config.sample_index);
      std::cout << summary.line << '\n';
    } else if (converge->parsed()) {
      const auto config = resolve(conv_flags);
      const auto reports = swe::run_convergence(config);
      std::filesystem::create_directories(config.out_dir);
      const auto csv = config.out_dir / "convergence.csv";
      swe::emit_csv(reports, csv);
      print_orders(reports);
      std::cout << "wrote " << csv.string() << '\n';
      swe::check_exclusions(reports);
    } else if (compare->parsed()) {
      const auto config = resolve(cmp_flags);
      const auto result = swe::compare_methods(config);
      print_orders(result.reports);
      std::cout << "wrote " << result.csv.string() << '\n';
      swe::check_exclusions(result.reports);
    }
  } catch (const swe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const swe::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
