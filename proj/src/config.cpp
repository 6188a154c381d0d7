#include "swe/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "swe/snapshot.hpp"

namespace swe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "example", "dim",     "initial",    "gamma",         "data_seed",    "sigma",
      "f",       "methods", "method",     "tau",           "levels",       "tau_ref",
      "cfl",     "alpha",   "tfinal",     "samples",       "seed",         "workers",
      "out",     "timing",  "oversample", "full_fidelity", "snapshot_stride", "sample_index"};
  return keys;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long to_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    const unsigned long long x = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

void apply_example(ExperimentConfig& c, int example) {
  c.example = example;
  c.problem.sigma = Nonlinearity::scaled_sine(16.0, 1.0);
  c.problem.f = Nonlinearity::zero();
  c.problem.t_final = 0.25;
  switch (example) {
    case 0: return;
    case 1:
      c.dim = 1;
      c.alpha = 2.0;
      c.problem.initial.kind = InitialData::Kind::indicator;
      return;
    case 2:
      c.dim = 1;
      c.alpha = 2.0;
      c.problem.initial.kind = InitialData::Kind::random_hgamma;
      return;
    case 3:
      c.dim = 2;
      c.alpha = 1.5;
      c.problem.initial.kind = InitialData::Kind::indicator;
      return;
    case 4:
      c.dim = 2;
      c.alpha = 1.5;
      c.problem.initial.kind = InitialData::Kind::random_hgamma;
      return;
    default: throw ConfigError("example must be 0-4, got " + std::to_string(example));
  }
}

}  // namespace

int ExperimentConfig::n_cut_for(double tau) const {
  const double n = cfl / tau;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * r)
    throw ConfigError("cfl / tau = " + std::to_string(n) + " is not a positive integer");
  return static_cast<int>(r);
}

double ExperimentConfig::reference_tau() const {
  if (tau_ref > 0.0) return tau_ref;
  if (levels.empty()) throw ConfigError("no time-step levels configured");
  return *std::min_element(levels.begin(), levels.end()) / 4.0;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

KeyValues load_key_values(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_key_values(ss.str());
}

ExperimentConfig default_config() { return build_config({}); }

ExperimentConfig build_config(const KeyValues& values) {
  for (const auto& [key, value] : values)
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  ExperimentConfig c;
  apply_example(c, get("example") ? static_cast<int>(to_integer("example", *get("example"))) : 2);

  if (auto* v = get("dim")) {
    c.dim = static_cast<int>(to_integer("dim", *v));
    if (c.dim != 1 && c.dim != 2) throw ConfigError("dim must be 1 or 2");
    if (!get("alpha")) c.alpha = c.dim == 1 ? 2.0 : 1.5;
  }
  if (auto* v = get("alpha")) c.alpha = to_double("alpha", *v);
  if (!(c.alpha >= 1.0)) throw ConfigError("alpha must be >= 1");
  if (auto* v = get("initial")) {
    if (*v == "zero") {
      c.problem.initial.kind = InitialData::Kind::zero;
    } else if (*v == "indicator") {
      c.problem.initial.kind = InitialData::Kind::indicator;
    } else if (*v == "random") {
      c.problem.initial.kind = InitialData::Kind::random_hgamma;
    } else if (v->rfind("file:", 0) == 0) {
      const std::filesystem::path file = v->substr(5);
      try {
        auto snap = read_snapshot(file);
        c.problem.initial.kind = InitialData::Kind::explicit_state;
        c.problem.initial.state = std::make_shared<const SpectralState>(std::move(snap.state));
      } catch (const std::runtime_error& e) {
        throw ConfigError("initial data " + file.string() + ": " + e.what());
      }
    } else {
      throw ConfigError("initial must be zero, indicator, random or file:PATH");
    }
  }
  if (auto* v = get("gamma")) c.problem.initial.gamma = to_double("gamma", *v);
  if (!(c.problem.initial.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (auto* v = get("data_seed")) c.problem.initial.seed = to_unsigned("data_seed", *v);
  if (auto* v = get("sigma")) c.problem.sigma = Nonlinearity::parse(*v);
  if (auto* v = get("f")) c.problem.f = Nonlinearity::parse(*v);
  if (auto* v = get("tfinal")) c.problem.t_final = to_double("tfinal", *v);
  if (!(c.problem.t_final > 0.0)) throw ConfigError("tfinal must be positive");

  const std::string* methods = get("methods") ? get("methods") : get("method");
  if (methods) {
    c.methods.clear();
    std::stringstream ss(*methods);
    for (std::string m; std::getline(ss, m, ',');) c.methods.push_back(parse_method(trim(m)));
    if (c.methods.empty()) throw ConfigError("empty method list");
  }

  if (auto* v = get("cfl")) c.cfl = to_double("cfl", *v);
  if (!(c.cfl > 0.0)) throw ConfigError("cfl must be positive");
  const double tau = get("tau") ? to_double("tau", *get("tau")) : 1.0 / 32.0;
  const long long n_levels = get("levels") ? to_integer("levels", *get("levels")) : 5;
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (n_levels < 1 || n_levels > 30) throw ConfigError("levels must be in [1, 30]");
  c.levels.clear();
  for (long long i = 0; i < n_levels; ++i) c.levels.push_back(std::ldexp(tau, -static_cast<int>(i)));
  if (auto* v = get("tau_ref")) c.tau_ref = to_double("tau_ref", *v);

  if (auto* v = get("samples")) {
    const long long n = to_integer("samples", *v);
    if (n < 1) throw ConfigError("samples must be >= 1");
    c.n_samples = static_cast<int>(n);
  }
  if (auto* v = get("full_fidelity"); v && to_bool("full_fidelity", *v)) c.n_samples = 1000;
  if (auto* v = get("seed")) c.seed = to_unsigned("seed", *v);
  if (auto* v = get("workers")) {
    const long long w = to_integer("workers", *v);
    if (w < 1 || w > 1024) throw ConfigError("workers must be in [1, 1024]");
    c.workers = static_cast<int>(w);
  }
  if (auto* v = get("out")) c.out_dir = *v;
  if (auto* v = get("timing")) c.timing = to_bool("timing", *v);
  if (auto* v = get("oversample")) c.oversample = to_bool("oversample", *v);
  if (auto* v = get("snapshot_stride")) c.snapshot_stride = to_integer("snapshot_stride", *v);
  if (c.snapshot_stride < 0) throw ConfigError("snapshot_stride must be >= 0");
  if (auto* v = get("sample_index")) c.sample_index = to_unsigned("sample_index", *v);

  // Validate the time lattice now so studies fail before any work.
  const double ref = c.reference_tau();
  for (double t : c.levels) {
    c.n_cut_for(t);
    try {
      step_ratio(c.problem.t_final, t);
      step_ratio(t, ref);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("time lattice: ") + e.what());
    }
  }
  c.n_cut_for(ref);
  try {
    step_ratio(c.problem.t_final, ref);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("reference step: ") + e.what());
  }
  return c;
}

}  // namespace swe
