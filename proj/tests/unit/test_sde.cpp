#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/sde.hpp"
#include "oracles.hpp"

using namespace kuramoto2c;

namespace {

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.N1 = cfg.N2 = 200;
  cfg.steps = 50;
  cfg.seed = 7;
  cfg.couplings = CouplingConfig::symmetric(5.0, 2.0);
  cfg.init1.von_mises = {0.0, 2.0};
  cfg.init2.von_mises = {std::numbers::pi, 1.0};
  return cfg;
}

}  // namespace

TEST_CASE("configuration validation") {
  auto cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.N1 = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.dt = 0.06;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.N2 = 100;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.couplings.alpha1 = 200.0 / 300.0;
  cfg.couplings.alpha2 = 100.0 / 300.0;
  CHECK_NOTHROW(cfg.validate());
  cfg = small_config();
  cfg.couplings.L1 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.couplings.test_mode = true;
  CHECK_NOTHROW(cfg.validate());
  cfg = small_config();
  cfg.init1.angles = {0.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("order parameters") {
  const auto o = order_params({1.0, 1.0, 1.0});
  CHECK(o.r == doctest::Approx(1.0));
  CHECK(o.psi == doctest::Approx(1.0));
  CHECK(o.valid);
  const auto z = order_params({0.0, std::numbers::pi});
  CHECK(z.r < 1e-3);
  CHECK_FALSE(z.valid);
  CHECK(order_params({-0.5}).psi == doctest::Approx(2.0 * std::numbers::pi - 0.5));
  CHECK_THROWS_AS(order_params({}), DomainError);
}

TEST_CASE("noise samples are standard normal and order sensitive") {
  double s = 0.0;
  double s2 = 0.0;
  double s4 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = noise_sample(3, 1, static_cast<std::uint64_t>(i % 1000), static_cast<std::uint64_t>(i / 1000));
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
  CHECK(noise_sample(1, 2, 5, 9) != noise_sample(2, 1, 5, 9));
  CHECK(noise_sample(1, 2, 5, 9) == noise_sample(1, 2, 5, 9));
  CHECK(noise_sample(1, 2, 5, 9) != noise_sample(1, 2, 9, 5));
}

TEST_CASE("von Mises sampling") {
  for (double kappa : {0.0, 0.5, 2.0, 8.0}) {
    const auto a = sample_initial(1.0, kappa, 40000, 11);
    REQUIRE(a.size() == 40000);
    for (double x : {a.front(), a.back()}) {
      CHECK(x >= 0.0);
      CHECK(x < 2.0 * std::numbers::pi);
    }
    const auto o = order_params(a);
    CHECK(std::abs(o.r - oracle::V(kappa)) < 0.015);
    if (kappa >= 0.5) CHECK(std::abs(o.psi - 1.0) < 0.05);
  }
  CHECK(sample_initial(0.0, 1.0, 10, 3) == sample_initial(0.0, 1.0, 10, 3));
  CHECK(sample_initial(0.0, 1.0, 10, 3) != sample_initial(0.0, 1.0, 10, 4));
  CHECK_THROWS_AS(sample_initial(0.0, -1.0, 10, 3), DomainError);
}

TEST_CASE("frequency assignment") {
  const auto bi = assign_frequencies(DisorderSpec::bimodal(0.5), 6);
  REQUIRE(bi.size() == 6);
  CHECK(bi[0] == -0.5);
  CHECK(bi[5] == 0.5);
  double sum = 0.0;
  for (double w : bi) sum += w;
  CHECK(sum == 0.0);
  const auto g = assign_frequencies(DisorderSpec::discretized_gaussian(1.0, 11), 1000);
  CHECK(g.size() == 1000);
  const auto pm = assign_frequencies(DisorderSpec::point_mass_zero(), 3);
  CHECK(pm == std::vector<double>(3, 0.0));
}

TEST_CASE("runs are deterministic and record on schedule") {
  auto cfg = small_config();
  cfg.record_every = 10;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  REQUIRE(a.size() == 6);
  CHECK(a[1].t == doctest::Approx(0.1));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].r1 == b[i].r1);
    CHECK(a[i].psi2 == b[i].psi2);
  }
  cfg.seed = 8;
  CHECK(simulate(cfg).back().r1 != a.back().r1);
}

TEST_CASE("swapping communities and keys swaps the trajectories") {
  const auto cfg = small_config();
  auto swapped = cfg;
  std::swap(swapped.init1, swapped.init2);
  std::swap(swapped.noise_key1, swapped.noise_key2);
  const auto a = simulate(cfg);
  const auto b = simulate(swapped);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].r1 == b[i].r2);
    CHECK(a[i].r2 == b[i].r1);
  }
}

TEST_CASE("explicit initial angles are used verbatim") {
  auto cfg = small_config();
  cfg.N1 = cfg.N2 = 4;
  cfg.init1.angles = {0.1, 0.2, 0.3, 0.4};
  cfg.init2.angles = {1.0, 1.0, 1.0, 1.0};
  const auto s = initial_state(cfg);
  CHECK(s.theta1 == cfg.init1.angles);
  CHECK(s.theta2 == cfg.init2.angles);
}

TEST_CASE("overflow is reported with the step index") {
  auto cfg = small_config();
  cfg.N1 = cfg.N2 = 4;
  cfg.couplings = CouplingConfig::symmetric(1e308, 1e308);
  cfg.disorder = DisorderSpec::bimodal(1.7e308);
  const double q = std::numbers::pi / 2.0;
  cfg.init1.angles = {q, q, 0.0, 0.0};
  cfg.init2.angles = {q, q, 0.0, 0.0};
  auto state = initial_state(cfg);
  CHECK_THROWS_WITH_AS(step(state, cfg), doctest::Contains("step 0"), NumericalError);
}

TEST_CASE("uncoupled oscillators stay incoherent") {
  SimulationConfig cfg;
  cfg.steps = 500;
  cfg.record_every = 100;
  cfg.couplings = CouplingConfig::symmetric(0.0, 0.0);
  cfg.couplings.test_mode = true;
  for (const auto& row : simulate(cfg)) {
    CHECK(row.r1 <= 0.06);
    CHECK(row.r2 <= 0.06);
  }
}

TEST_CASE("aligned start relaxes near the symmetric level") {
  SimulationConfig cfg;
  cfg.N1 = cfg.N2 = 500;
  cfg.steps = 1500;
  cfg.record_every = 10;
  cfg.couplings = CouplingConfig::symmetric(5.0, 2.0);
  cfg.init1.von_mises = {0.0, 6.0};
  cfg.init2.von_mises = {0.0, 6.0};
  const auto ts = simulate(cfg);
  double mean = 0.0;
  int n = 0;
  for (const auto& row : ts) {
    if (row.t < 5.0) continue;
    mean += 0.5 * (row.r1 + row.r2);
    ++n;
  }
  CHECK(std::abs(mean / n - oracle::symmetric_level(7.0)) < 0.03);
}
