#include "ptfloquet/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptfloquet/fock_basis.hpp"
#include "ptfloquet/floquet.hpp"
#include "ptfloquet/superoperators.hpp"

namespace ptfloquet {

namespace {

std::vector<double> sample_grid(double z_max, double dz) {
  const auto steps = static_cast<long>(std::llround(z_max / dz));
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(steps) + 2);
  for (long i = 0; i <= steps; ++i) z.push_back(std::min(z_max, i * dz));
  if (z.back() < z_max) z.push_back(z_max);
  return z;
}

}  // namespace

void ReservoirConfig::validate() const {
  if (n_bath < 1) throw InputError("n_bath must be >= 1");
  if (!(kappa_b > 0.0) || !std::isfinite(kappa_b)) throw InputError("kappa_b must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be >= 0");
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw InputError("B must lie in [0, 1)");
  if (!(sharpness >= 0.0) || !std::isfinite(sharpness)) throw InputError("beta must be >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InputError("omega must be positive");
  if (!(z_max >= 0.0) || !std::isfinite(z_max)) throw InputError("z_max must be >= 0");
  if (!(dz_out > 0.0)) throw InputError("dz_out must be positive");
  if (!(tolerances.rel > 0.0) || !(tolerances.abs > 0.0)) throw InputError("tolerances must be positive");
  if (!(lindblad_loss_scale > 0.0)) throw InputError("lindblad_loss_scale must be positive");
}

LossProfile ReservoirConfig::loss_profile() const {
  return LossProfile::modulated(amplitude, sharpness, omega).scaled(kappa_b);
}

ReservoirConfig reservoir_for_target(double gamma_max, double omega, double min_ratio,
                                     double kappa_b) {
  if (!(kappa_b > 0.0)) throw InputError("kappa_b must be positive");
  const LossProfile p = profile_for_target(gamma_max / kappa_b, omega, min_ratio);
  ReservoirConfig cfg;
  cfg.kappa_b = kappa_b;
  cfg.amplitude = p.amplitude();
  cfg.sharpness = p.sharpness();
  cfg.omega = omega;
  return cfg;
}

double coupling_profile(const ReservoirConfig& cfg, double z) {
  return cfg.kappa_b * cfg.amplitude *
         std::exp(-0.5 * cfg.sharpness * (1.0 - std::cos(cfg.omega * z)));
}

double decay_rate(double kappa_l, double kappa_b) {
  if (!(kappa_b > 0.0)) throw InputError("kappa_b must be positive");
  if (!(kappa_l >= 0.0)) throw InputError("kappa_l must be >= 0");
  if (kappa_l >= kappa_b) {
    throw InputError("decay rate needs kappa_l < kappa_b, got kappa_l = " + std::to_string(kappa_l));
  }
  return 2.0 * kappa_l * kappa_l / std::sqrt(kappa_b * kappa_b - kappa_l * kappa_l);
}

Trajectory simulate_array(const ReservoirConfig& cfg, const CVector& initial) {
  cfg.validate();
  const int n = cfg.mode_count();
  if (initial.size() != n) {
    throw InputError("initial amplitudes need " + std::to_string(n) + " entries");
  }
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-12) throw InputError("initial amplitudes must be normalized");

  const int lossy = cfg.lossy_mode();
  const bool two_system = cfg.kappa > 0.0;
  // i dc/dz = M(z) c with M tridiagonal: [kappa], kappa_l(z), kappa_b, ..., kappa_b.
  const auto rhs = [&](double z, const CVector& c, CVector& dc) {
    const double kl = coupling_profile(cfg, z);
    dc.resize(n);
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      if (j > 0) {
        const double left = (j == lossy + 1) ? kl : (two_system && j == 1) ? cfg.kappa : cfg.kappa_b;
        acc += left * c[j - 1];
      }
      if (j + 1 < n) {
        const double right = (j == lossy) ? kl : (two_system && j == 0) ? cfg.kappa : cfg.kappa_b;
        acc += right * c[j + 1];
      }
      dc[j] = Complex(0.0, -1.0) * acc;
    }
  };

  Trajectory t;
  t.system_modes = two_system ? 2 : 1;
  const auto record = [&](double z, const CVector& c) {
    t.z.push_back(z);
    t.amplitudes.push_back(c);
    double pop = 0.0;
    for (int j = 0; j < t.system_modes; ++j) pop += std::norm(c[j]);
    t.system_population.push_back(pop);
    t.max_norm_defect = std::max(t.max_norm_defect, std::abs(c.squaredNorm() - 1.0));
  };

  const std::vector<double> grid = sample_grid(cfg.z_max, cfg.dz_out);
  CVector c = initial;
  record(grid.front(), c);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    integrate_dopri5(rhs, c, grid[i - 1], grid[i], cfg.tolerances);
    record(grid[i], c);
  }
  return t;
}

Trajectory simulate_array(const ReservoirConfig& cfg, int mode) {
  cfg.validate();
  if (mode < 0 || mode >= cfg.mode_count()) throw InputError("mode index out of range");
  CVector c = CVector::Zero(cfg.mode_count());
  c[mode] = 1.0;
  return simulate_array(cfg, c);
}

Trajectory simulate_array(const ReservoirConfig& cfg) { return simulate_array(cfg, cfg.lossy_mode()); }

double recurrence_estimate(const ReservoirConfig& cfg) {
  cfg.validate();
  return cfg.n_bath / (2.0 * cfg.kappa_b);
}

DecayComparison analytic_decay(const ReservoirConfig& cfg, const Trajectory& trajectory) {
  cfg.validate();
  if (cfg.kappa != 0.0) throw InputError("analytic decay needs a single system waveguide (kappa = 0)");
  DecayComparison d;
  d.recurrence = recurrence_estimate(cfg);
  d.fit_begin = 0.2 * cfg.z_max;
  d.fit_end = std::min(d.recurrence, cfg.z_max);
  d.fit_method = "least-squares mean of ln P(z) + int_0^z gamma over [0.2 z_max, min(z_rec, z_max)]";

  const LossProfile loss = cfg.loss_profile();
  std::vector<double> exponent;
  exponent.reserve(trajectory.z.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < trajectory.z.size(); ++i) {
    if (i > 0) acc += loss.integral(trajectory.z[i - 1], trajectory.z[i]);
    exponent.push_back(acc);
  }

  // ln P = ln C - int gamma, so the least-squares ln C is a plain mean.
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < trajectory.z.size(); ++i) {
    const double z = trajectory.z[i];
    if (z < d.fit_begin || z > d.fit_end) continue;
    const double p = trajectory.system_population[i];
    if (!(p > 0.0)) continue;
    sum += std::log(p) + exponent[i];
    ++count;
  }
  if (count == 0) throw InputError("empty normalization fit window");
  d.normalization = std::exp(sum / count);

  for (std::size_t i = 0; i < trajectory.z.size(); ++i) {
    const double z = trajectory.z[i];
    const double a = d.normalization * std::exp(-exponent[i]);
    const double s = trajectory.system_population[i];
    const double dev = std::abs(s - a) / a;
    d.z.push_back(z);
    d.simulated.push_back(s);
    d.analytic.push_back(a);
    d.deviation.push_back(dev);
    if (z <= d.recurrence) {
      d.max_deviation_all = std::max(d.max_deviation_all, dev);
      if (z >= d.fit_begin) d.max_deviation = std::max(d.max_deviation, dev);
    }
  }
  return d;
}

DecayComparison analytic_decay(const ReservoirConfig& cfg) {
  return analytic_decay(cfg, simulate_array(cfg));
}

double fitted_decay_rate(const Trajectory& trajectory, double z0, double z1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < trajectory.z.size(); ++i) {
    const double z = trajectory.z[i];
    if (z < z0 || z > z1) continue;
    const double y = std::log(trajectory.system_population[i]);
    sx += z;
    sy += y;
    sxx += z * z;
    sxy += z * y;
    ++n;
  }
  if (n < 2) throw InputError("decay fit needs at least two samples");
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RecurrenceProbe probe_recurrence(ReservoirConfig cfg, double span_factor, double log_threshold) {
  cfg.kappa = 0.0;
  cfg.sharpness = 0.0;
  RecurrenceProbe probe;
  probe.predicted = recurrence_estimate(cfg);
  cfg.z_max = span_factor * probe.predicted;
  const Trajectory t = simulate_array(cfg);
  const double z0 = 0.2 * probe.predicted;
  const double z1 = 0.8 * probe.predicted;
  const double rate = fitted_decay_rate(t, z0, z1);
  double intercept = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    if (t.z[i] < z0 || t.z[i] > z1) continue;
    intercept += std::log(t.system_population[i]) + rate * t.z[i];
    ++n;
  }
  intercept /= n;
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    if (t.z[i] <= z1) continue;
    const double residual = std::log(t.system_population[i]) - (intercept - rate * t.z[i]);
    if (std::abs(residual) > log_threshold) {
      probe.observed = t.z[i];
      break;
    }
  }
  return probe;
}

SystemComparison full_system_comparison(const ReservoirConfig& cfg) {
  cfg.validate();
  if (!(cfg.kappa > 0.0)) throw InputError("full system comparison needs kappa > 0");
  SystemComparison out;
  out.recurrence = recurrence_estimate(cfg);
  out.lindblad_loss_scale = cfg.lindblad_loss_scale;

  ReservoirConfig run = cfg;
  run.z_max = std::min(cfg.z_max, out.recurrence);
  const Trajectory t = simulate_array(run);

  CouplerParams params;
  params.kappa = cfg.kappa;
  params.loss = cfg.loss_profile().scaled(cfg.lindblad_loss_scale);
  const TwoModeBasis basis(1);
  const auto states = propagate_state(params, fock_state(basis, 1, 0), t.z);

  for (std::size_t i = 0; i < t.z.size(); ++i) {
    const double a = t.system_population[i];
    const double l = occupation(states[i], 1, 0) + occupation(states[i], 1, 1);
    const double dev = std::abs(a - l) / l;
    out.z.push_back(t.z[i]);
    out.array_population.push_back(a);
    out.lindblad_population.push_back(l);
    out.deviation.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

}  // namespace ptfloquet
