#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptfloquet/floquet.hpp"
#include "reference.hpp"

using namespace ptfloquet;

namespace {

CouplerParams coupler(double gamma_bar, double omega) {
  CouplerParams p;
  p.loss = profile_for_target(gamma_bar, omega);
  return p;
}

}  // namespace

TEST_CASE("single-photon monodromy") {
  CouplerParams free;
  free.loss = LossProfile::constant(0.0, 2.3);
  const FloquetResult r = monodromy_2x2(free);
  const double t = 2.3;
  REQUIRE(r.multipliers.size() == 2);
  const Complex expected[2] = {std::exp(Complex(0, -t)), std::exp(Complex(0, t))};
  for (const Complex& e : expected) {
    CHECK(std::min(std::abs(r.multipliers[0] - e), std::abs(r.multipliers[1] - e)) < 1e-9);
  }
  CHECK(std::abs(r.lyapunov[0]) < 1e-10);
  CHECK(std::abs(r.lyapunov[1]) < 1e-10);
  CHECK(classify_pt(r) == PtPhase::Symmetric);

  CouplerParams ep;
  ep.loss = LossProfile::constant(2.0, 1.0);
  const FloquetResult at_ep = monodromy_2x2(ep);
  CHECK(std::abs(at_ep.multipliers[0] - at_ep.multipliers[1]) < 1e-4);

  const CouplerParams p = coupler(0.7, 1.1);
  const FloquetResult q = monodromy_2x2(p);
  CHECK(std::abs(q.monodromy.determinant() - std::exp(-p.loss.integral(0.0, q.period))) < 1e-9);
  CHECK(q.exponents[0].real() >= q.exponents[1].real());
  CHECK(q.mean_loss_ref == doctest::Approx(-0.5 * mean_loss(p.loss)));
}

TEST_CASE("exponent ordering with equal real parts") {
  const FloquetResult r = monodromy_2x2(coupler(0.25, 1.5));
  CHECK(std::abs(r.lyapunov[0] - r.lyapunov[1]) < 1e-9);
  // equal real parts up to rounding; the sorted order is by real part first
  CHECK((r.exponents[0].real() > r.exponents[1].real() ||
         (r.exponents[0].real() == r.exponents[1].real() && r.exponents[0].imag() <= r.exponents[1].imag())));
}

TEST_CASE("sum rule at random parameters") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> g(0.01, 2.5), w(0.2, 3.0);
  for (int k = 0; k < 10; ++k) {
    const FloquetResult r = monodromy_2x2(coupler(g(rng), w(rng)), {1e-12, 1e-14});
    CHECK(std::abs(r.lyapunov[0] + r.lyapunov[1] + r.mean_loss) < 1e-8);
  }
}

TEST_CASE("classification of the reference points") {
  CHECK(classify_pt(monodromy_2x2(coupler(0.25, 1.5))) == PtPhase::Symmetric);
  CHECK(classify_pt(monodromy_2x2(coupler(0.25, 2.0))) == PtPhase::Broken);
  CHECK(to_string(PtPhase::Broken) == "Broken");
  const FloquetResult r = monodromy_2x2(coupler(0.25, 2.0));
  CHECK_THROWS_AS((void)classify_pt(r, 0.0), InputError);

  // weak loss stays symmetric away from the resonances omega = 2 kappa / k
  for (double w : {0.45, 0.58, 0.8, 1.25, 1.6, 2.3, 2.7}) {
    CHECK(classify_pt(monodromy_2x2(coupler(0.01, w))) == PtPhase::Symmetric);
  }
}

TEST_CASE("full monodromy spectrum") {
  const TwoModeBasis b(3);
  for (double w : {1.5, 2.0}) {
    const CouplerParams p = coupler(0.25, w);
    const FloquetResult full = monodromy_full(p, b);
    const FloquetResult two = monodromy_2x2(p, {1e-12, 1e-14});
    REQUIRE(full.multipliers.size() == 100);
    double to_one = 1.0;
    for (const Complex& l : full.multipliers) to_one = std::min(to_one, std::abs(l - Complex(1.0)));
    CHECK(to_one < 1e-12);

    const auto block = sector_block_spectrum(full.monodromy, b, 1, 1);
    CHECK(spectrum_distance(predicted_sector_spectrum(two, 1, 1), block) < 1e-8);
    for (int n = 0; n <= 3; ++n) {
      CHECK(spectrum_distance(predicted_sector_spectrum(two, n, n),
                              sector_block_spectrum(full.monodromy, b, n, n)) < 1e-7);
    }
  }

  CouplerParams free;
  free.loss = LossProfile::constant(0.0, 1.9);
  for (const Complex& l : monodromy_full(free, TwoModeBasis(2)).multipliers) {
    CHECK(std::abs(std::abs(l) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS((void)sector_block_spectrum(CMatrix::Identity(4, 4), b, 0, 0), InputError);
  CHECK_THROWS_AS((void)sector_block_spectrum(CMatrix::Identity(100, 100), b, 4, 0), InputError);
}

TEST_CASE("phase diagram sweep") {
  PhaseDiagramConfig cfg;
  cfg.omega_min = 1.5;
  cfg.omega_max = 2.0;
  cfg.n_omega = 2;
  cfg.gamma_min = 0.25;
  cfg.gamma_max = 0.5;
  cfg.n_gamma = 2;
  cfg.jobs = 1;
  const PhaseDiagram one = phase_diagram(cfg);
  CHECK(one.at(0, 0).phase == PtPhase::Symmetric);
  CHECK(one.at(1, 0).phase == PtPhase::Broken);
  CHECK(one.threshold(1).value() == doctest::Approx(0.25));

  cfg.n_omega = 7;
  cfg.n_gamma = 6;
  cfg.jobs = 1;
  const PhaseDiagram serial = phase_diagram(cfg);
  cfg.jobs = 3;
  const PhaseDiagram parallel = phase_diagram(cfg);
  for (std::size_t k = 0; k < serial.points.size(); ++k) {
    CHECK(serial.points[k].phase == parallel.points[k].phase);
    CHECK(serial.points[k].splitting == parallel.points[k].splitting);
  }
  for (std::size_t i = 1; i < serial.omega.size(); ++i) CHECK(serial.omega[i] > serial.omega[i - 1]);

  PhaseDiagramConfig bad = cfg;
  bad.n_gamma = 1;
  CHECK_THROWS_AS((void)phase_diagram(bad), InputError);
  bad = cfg;
  bad.omega_min = -1.0;
  CHECK_THROWS_AS((void)phase_diagram(bad), InputError);
}

TEST_CASE("static threshold sits at twice the coupling") {
  PhaseDiagramConfig cfg;
  cfg.constant_profile = true;
  cfg.omega_min = 0.5;
  cfg.omega_max = 1.5;
  cfg.n_omega = 2;
  cfg.gamma_min = 1.9;
  cfg.gamma_max = 2.1;
  cfg.n_gamma = 21;
  const PhaseDiagram pd = phase_diagram(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto th = pd.threshold(i);
    REQUIRE(th.has_value());
    CHECK(std::abs(*th - 2.0) <= 0.02);
  }
}

TEST_CASE("classification is robust to tighter integration") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> g(0.01, 2.5), w(0.2, 3.0);
  const double eps = 1e-4;
  for (int k = 0; k < 40; ++k) {
    const CouplerParams p = coupler(g(rng), w(rng));
    const FloquetResult coarse = monodromy_2x2(p, {1e-10, 1e-12});
    if (std::abs(lyapunov_splitting(coarse) - eps) < 2 * eps) continue;
    CHECK(classify_pt(coarse, eps) == classify_pt(monodromy_2x2(p, {5e-11, 5e-13}), eps));
  }
}

TEST_CASE("state propagation") {
  const TwoModeBasis b(3);
  const CouplerParams p = coupler(0.25, 2.0);
  const double t = p.loss.period();
  const DensityMatrix rho0 = superposition_state(b, 3);
  const auto states = propagate_state(p, rho0, {0.0, 0.4 * t, 2.0 * t, 2.7 * t});
  CHECK((states[0].elements() - rho0.elements()).norm() == 0.0);
  const CMatrix u = propagator(p, t, b).total();
  const CVector twice = u * (u * vectorize(rho0).data());
  CHECK((vectorize(states[2]).data() - twice).norm() < 1e-10);
  const CVector partial = propagator(p, 0.7 * t, b).total() * twice;
  CHECK((vectorize(states[3]).data() - partial).norm() < 1e-9);
  CHECK(occupation(states[0], 3, 0) == doctest::Approx(0.5));
  CHECK(occupation(states[0], 3, 3) == doctest::Approx(0.5));

  CHECK_THROWS_AS((void)propagate_state(p, rho0, {1.0, 0.5}), InputError);
  CHECK_THROWS_AS((void)propagate_state(p, rho0, {-1.0}), InputError);
}

TEST_CASE("occupation trajectories") {
  const TwoModeBasis b(3);
  const CouplerParams p = coupler(0.25, 1.5);
  const OccupationTable table = occupation_trajectories(p, superposition_state(b, 3), 4 * p.loss.period(), 81);
  REQUIRE(table.rows.size() == 81);
  REQUIRE(table.columns.size() == 10);
  CHECK(table.columns[0] == std::pair{0, 0});
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    double sum = 0.0;
    for (double v : table.rows[i]) {
      sum += v;
      CHECK(v >= -1e-9);
    }
    CHECK(std::abs(sum - 1.0) < 1e-8);
    CHECK(std::abs(table.trace[i] - 1.0) < 1e-8);
    if (i > 0) CHECK(table.rows[i][0] >= table.rows[i - 1][0] - 1e-12);
  }
  const auto top = table.sector_total(3);
  CHECK(top.front() == doctest::Approx(1.0));
  CHECK(top.back() < top.front());

  const OccupationTable single = occupation_trajectories(p, superposition_state(b, 3), 0.0, 1);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0][6] == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)occupation_trajectories(p, superposition_state(b, 3), 1.0, 1), InputError);
}

TEST_CASE("strand splitting fit") {
  const TwoModeBasis b(3);
  const CouplerParams p = coupler(0.25, 2.0);
  const StrandSplitting s = fit_strand_splitting(p, superposition_state(b, 3), 5, 30);
  CHECK(s.sector == 3);
  CHECK(s.slow_rate > 0.0);
  CHECK(s.fast_rate > s.slow_rate);
  CHECK(s.slow_rate + s.fast_rate == doctest::Approx(2 * mean_loss(p.loss)));
  CHECK_THROWS_AS((void)fit_strand_splitting(p, superposition_state(b, 3), 3, 4), InputError);
  CHECK_THROWS_AS((void)fit_strand_splitting(p, fock_state(b, 0, 0), 0, 10), InputError);
}

TEST_CASE("linspace") {
  const auto v = linspace(0.2, 3.0, 141);
  CHECK(v.front() == 0.2);
  CHECK(v.back() == 3.0);
  CHECK(v[90] == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)linspace(0.0, 1.0, 0), InputError);
}
