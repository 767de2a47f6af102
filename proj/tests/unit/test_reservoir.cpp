#include <doctest.h>

#include <cmath>
#include <random>

#include "ptfloquet/floquet.hpp"
#include "ptfloquet/reservoir.hpp"

using namespace ptfloquet;

TEST_CASE("coupling profile and the decay-rate identity") {
  ReservoirConfig cfg = reservoir_for_target(0.125, 1.0);
  CHECK(coupling_profile(cfg, 0.0) == doctest::Approx(cfg.amplitude));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (double kb : {1.0, 2.5}) {
    cfg.kappa_b = kb;
    const LossProfile loss = LossProfile::modulated(cfg.amplitude, cfg.sharpness, cfg.omega);
    for (int k = 0; k < 100; ++k) {
      const double z = u(rng);
      const double lhs = decay_rate(coupling_profile(cfg, z), kb);
      CHECK(std::abs(lhs - gamma_of_z(loss, z) * kb) <= 1e-12 * std::max(1.0, lhs));
      CHECK(std::abs(cfg.loss_profile().rate(z) - lhs) <= 1e-12 * std::max(1.0, lhs));
    }
  }
  ReservoirConfig off;
  CHECK(coupling_profile(off, 3.0) == 0.0);
}

TEST_CASE("decay rate") {
  CHECK(decay_rate(0.0, 1.0) == 0.0);
  CHECK(decay_rate(1.0 / std::sqrt(2.0), 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(decay_rate(2.0 / std::sqrt(2.0), 2.0) == doctest::Approx(2 * std::sqrt(2.0)));
  for (double x : {1e-3, 0.01, 0.1, 0.3}) {
    const double weak = 2 * x * x;
    CHECK(std::abs(decay_rate(x, 1.0) - weak) / decay_rate(x, 1.0) <= x * x);
  }
  CHECK_THROWS_AS((void)decay_rate(1.0, 1.0), InputError);
  CHECK_THROWS_AS((void)decay_rate(-0.1, 1.0), InputError);
}

TEST_CASE("array dynamics without bath coupling") {
  ReservoirConfig cfg;
  cfg.n_bath = 20;
  cfg.kappa = 0.7;
  cfg.amplitude = 0.0;
  cfg.z_max = 10.0;
  const Trajectory t = simulate_array(cfg, 0);
  REQUIRE(t.system_modes == 2);
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    const double c = std::cos(0.7 * t.z[i]);
    CHECK(std::abs(std::norm(t.amplitudes[i][0]) - c * c) < 1e-9);
    CHECK(t.system_population[i] == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(t.max_norm_defect < 1e-9);
}

TEST_CASE("single bath site gives a full revival") {
  ReservoirConfig cfg;
  cfg.n_bath = 1;
  cfg.amplitude = 0.3;
  cfg.sharpness = 0.0;
  cfg.z_max = 40.0;
  const Trajectory t = simulate_array(cfg);
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    const double c = std::cos(0.3 * t.z[i]);
    CHECK(std::abs(t.system_population[i] - c * c) < 1e-9);
  }
}

TEST_CASE("array validates its input") {
  ReservoirConfig cfg;
  cfg.n_bath = 5;
  CHECK_THROWS_AS((void)simulate_array(cfg, CVector::Zero(3)), InputError);
  CHECK_THROWS_AS((void)simulate_array(cfg, CVector::Ones(6)), InputError);
  CHECK_THROWS_AS((void)simulate_array(cfg, 9), InputError);
  cfg.amplitude = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.amplitude = 0.1;
  cfg.n_bath = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("analytic decay") {
  ReservoirConfig off;
  off.n_bath = 50;
  off.z_max = 20.0;
  const DecayComparison flat = analytic_decay(off);
  for (double a : flat.analytic) CHECK(a == doctest::Approx(1.0));
  CHECK(flat.max_deviation < 1e-9);

  ReservoirConfig stat;
  stat.n_bath = 200;
  stat.amplitude = 0.25;
  stat.sharpness = 0.0;
  stat.z_max = 100.0;
  const Trajectory t = simulate_array(stat);
  const double rate = fitted_decay_rate(t, 20.0, 100.0);
  CHECK(std::abs(rate - decay_rate(0.25, 1.0)) <= 0.02 * decay_rate(0.25, 1.0));
  const DecayComparison d = analytic_decay(stat, t);
  CHECK(d.fit_begin == doctest::Approx(20.0));
  CHECK(d.fit_end == doctest::Approx(100.0));
  for (std::size_t i = 0; i < d.z.size(); ++i) {
    CHECK(d.deviation[i] == doctest::Approx(std::abs(d.simulated[i] - d.analytic[i]) / d.analytic[i]));
  }
  CHECK(!d.fit_method.empty());

  ReservoirConfig coupled = stat;
  coupled.kappa = 0.5;
  CHECK_THROWS_AS((void)analytic_decay(coupled, t), InputError);

  ReservoirConfig tiny;
  tiny.n_bath = 1;
  tiny.z_max = 3.0;
  CHECK_THROWS_AS((void)analytic_decay(tiny), InputError);
}

TEST_CASE("recurrence estimate") {
  ReservoirConfig cfg;
  CHECK(recurrence_estimate(cfg) == doctest::Approx(100.0));
  cfg.n_bath = 400;
  CHECK(recurrence_estimate(cfg) == doctest::Approx(200.0));
  cfg.kappa_b = 2.0;
  CHECK(recurrence_estimate(cfg) == doctest::Approx(100.0));

  // The reflected wave packet returns after a full round trip, N / kappa_b.
  ReservoirConfig probe_cfg;
  probe_cfg.n_bath = 100;
  probe_cfg.amplitude = 0.25;
  const RecurrenceProbe probe = probe_recurrence(probe_cfg);
  REQUIRE(probe.observed > 0.0);
  CHECK(probe.observed >= probe.predicted);
  CHECK(std::abs(probe.observed - 2 * probe.predicted) <= 0.2 * 2 * probe.predicted);
}

TEST_CASE("full system comparison") {
  ReservoirConfig free;
  free.n_bath = 30;
  free.kappa = 0.5;
  free.z_max = 10.0;
  const SystemComparison s = full_system_comparison(free);
  CHECK(s.max_deviation < 1e-9);

  ReservoirConfig single;
  CHECK_THROWS_AS((void)full_system_comparison(single), InputError);
}

TEST_CASE("array units map onto the coupler phase diagram") {
  ReservoirConfig cfg = reservoir_for_target(0.125, 1.0);
  cfg.kappa = 0.5;
  const LossProfile loss = cfg.loss_profile();
  CHECK(loss.gamma_max() / cfg.kappa == doctest::Approx(0.25));
  CHECK(loss.omega() / cfg.kappa == doctest::Approx(2.0));
  CouplerParams p;
  p.kappa = cfg.kappa;
  p.loss = loss;
  CHECK(classify_pt(monodromy_2x2(p), 1e-4 * p.kappa) == PtPhase::Broken);
}
