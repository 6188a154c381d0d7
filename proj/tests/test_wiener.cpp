#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "swe/counter_rng.hpp"
#include "swe/wiener.hpp"

using namespace swe;

TEST_CASE("counter RNG") {
  SUBCASE("SplitMix64 reference value") {
    // first output of the SplitMix64 generator seeded with 0
    CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
  }
  SUBCASE("pure function of its arguments") {
    CHECK(counter_bits(1, 2, 3) == counter_bits(1, 2, 3));
    CHECK(counter_bits(1, 2, 3) != counter_bits(1, 2, 4));
    CHECK(counter_bits(1, 2, 3) != counter_bits(1, 3, 3));
    CHECK(counter_bits(1, 2, 3) != counter_bits(2, 2, 3));
  }
  SUBCASE("uniforms in the open interval with mean 1/2") {
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = counter_uniform(7, 0, static_cast<std::uint64_t>(i));
      REQUIRE(x > 0.0);
      REQUIRE(x < 1.0);
      sum += x;
    }
    CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  }
  SUBCASE("normal quantiles") {
    CHECK(counter_normal(0, 0, 0) == counter_normal(0, 0, 0));
    int below = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      if (counter_normal(3, 1, static_cast<std::uint64_t>(i)) < 1.0) ++below;
    // Phi(1) = 0.841344746
    CHECK(std::abs(below / double(n) - 0.841344746) < 5.0 * std::sqrt(0.1335 / n));
  }
}

TEST_CASE("sample_path") {
  const double dt = 1.0 / 4096.0;
  SUBCASE("deterministic in (seed, index)") {
    const auto a = sample_path(5, 17, 0.25, dt);
    const auto b = sample_path(5, 17, 0.25, dt);
    CHECK(a.size() == 1024);
    CHECK(a.increments == b.increments);
  }
  SUBCASE("different indices are uncorrelated") {
    const auto a = sample_path(5, 1, 1.0, dt);
    const auto b = sample_path(5, 2, 1.0, dt);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (long i = 0; i < a.size(); ++i) {
      ab += a.increments[i] * b.increments[i];
      aa += a.increments[i] * a.increments[i];
      bb += b.increments[i] * b.increments[i];
    }
    CHECK(std::abs(ab / std::sqrt(aa * bb)) < 0.05);
  }
  SUBCASE("increment moments") {
    // 64 paths x 4096 increments: mean 0, variance dt, fourth moment 3 dt^2
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    long n = 0;
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
      const auto p = sample_path(9, idx, 1.0, dt);
      for (double x : p.increments) {
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
        ++n;
      }
    }
    const double mean = s1 / n, var = s2 / n, kurt = s4 / n / (dt * dt);
    CHECK(std::abs(mean) < 5.0 * std::sqrt(dt / n));
    CHECK(std::abs(var / dt - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(kurt - 3.0) < 5.0 * std::sqrt(96.0 / n));
  }
  SUBCASE("W(T) ~ N(0, T) over many paths") {
    double s2 = 0.0;
    const int paths = 4000;
    for (int idx = 0; idx < paths; ++idx) {
      const auto p = sample_path(11, static_cast<std::uint64_t>(idx), 0.25, 1.0 / 64.0);
      double w = 0.0;
      for (double x : p.increments) w += x;
      s2 += w * w;
    }
    CHECK(std::abs(s2 / paths / 0.25 - 1.0) < 5.0 * std::sqrt(2.0 / paths));
  }
}

TEST_CASE("coarse increments share the base path") {
  const auto p = sample_path(3, 0, 0.25, 1.0 / 1024.0);
  SUBCASE("sums of consecutive base increments, bit-exact") {
    for (int ratio : {1, 2, 8, 256}) {
      const double step = ratio / 1024.0;
      const auto c = coarse_increments(p, step);
      REQUIRE(c.size() == 256u / ratio);
      for (std::size_t n = 0; n < c.size(); ++n) {
        double expected = 0.0;
        for (int i = 0; i < ratio; ++i) expected += p.increments[n * ratio + i];
        CHECK(c[n] == expected);
        CHECK(increment(p, static_cast<long>(n), step) == expected);
      }
    }
  }
  SUBCASE("telescoping W(T)") {
    double w = 0.0;
    for (double x : p.increments) w += x;
    double wc = 0.0;
    for (double x : coarse_increments(p, 1.0 / 16.0)) wc += x;
    CHECK(wc == doctest::Approx(w).epsilon(1e-13));
  }
  SUBCASE("misaligned steps and indices") {
    CHECK_THROWS_AS(increment(p, 0, 1.5 / 1024.0), std::invalid_argument);
    CHECK_THROWS_AS(coarse_increments(p, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(increment(p, 256, 1.0 / 1024.0), std::invalid_argument);
    CHECK_THROWS_AS(increment(p, -1, 1.0 / 1024.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(1, 0, 0.25, 0.3), std::invalid_argument);
  }
}

TEST_CASE("step_ratio") {
  CHECK(step_ratio(0.25, 1.0 / 32.0) == 8);
  CHECK(step_ratio(0.25, 0.25) == 1);
  CHECK(step_ratio(0.3, 0.1) == 3);
  CHECK_THROWS_AS(step_ratio(0.25, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(step_ratio(0.25, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step_ratio(0.25, 0.07), std::invalid_argument);
}

TEST_CASE("path CSV dump") {
  const auto p = sample_path(4, 2, 0.25, 1.0 / 16.0);
  const auto file = std::filesystem::temp_directory_path() / "swe_test_path.csv";
  write_path_csv(p, file);
  std::ifstream is(file);
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,t_n,dW_n");
  long rows = 0;
  while (std::getline(is, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    CHECK(std::stol(line.substr(0, c1)) == rows);
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == rows / 16.0);
    CHECK(std::stod(line.substr(c2 + 1)) == p.increments[rows]);
    ++rows;
  }
  CHECK(rows == 4);
  std::filesystem::remove(file);
}
