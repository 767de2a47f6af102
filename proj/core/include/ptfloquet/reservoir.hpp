#pragma once

#include <string>
#include <vector>

#include "ptfloquet/loss_profile.hpp"
#include "ptfloquet/ode.hpp"
#include "ptfloquet/types.hpp"

namespace ptfloquet {

/// Waveguide array realizing the loss: a lossy system waveguide coupled with
/// kappa_l(z) to the first site of a homogeneous chain of n_bath waveguides.
/// With kappa > 0 a second, loss-free system waveguide is coupled to the lossy one.
struct ReservoirConfig {
  int n_bath = 200;
  double kappa_b = 1.0;
  double kappa = 0.0;
  double amplitude = 0.0;
  double sharpness = 0.0;
  double omega = 1.0;
  double z_max = 100.0;
  double dz_out = 0.1;
  OdeTolerances tolerances{1e-10, 1e-12};
  /// Loss rate handed to the master equation relative to the array's
  /// population decay rate (used by full_system_comparison only).
  double lindblad_loss_scale = 0.5;

  void validate() const;

  [[nodiscard]] int mode_count() const { return n_bath + (kappa > 0.0 ? 2 : 1); }
  /// Index of the waveguide coupled to the bath.
  [[nodiscard]] int lossy_mode() const { return kappa > 0.0 ? 1 : 0; }
  /// Markovian population decay rate gamma(z) implied by kappa_l(z).
  [[nodiscard]] LossProfile loss_profile() const;
};

/// Configuration whose implied loss has peak gamma_max (units of kappa_b) with
/// the same sharpness rule as the coupler profiles.
[[nodiscard]] ReservoirConfig reservoir_for_target(double gamma_max, double omega,
                                                   double min_ratio = 1e-3, double kappa_b = 1.0);

/// kappa_l(z) = kappa_b B exp(-beta/2 (1 - cos omega z))
[[nodiscard]] double coupling_profile(const ReservoirConfig& cfg, double z);

/// 2 kappa_l^2 / sqrt(kappa_b^2 - kappa_l^2). Requires 0 <= kappa_l < kappa_b.
[[nodiscard]] double decay_rate(double kappa_l, double kappa_b);

struct Trajectory {
  std::vector<double> z;
  /// amplitudes[i][j]: mode j at z[i]
  std::vector<CVector> amplitudes;
  /// Total population of the system waveguides.
  std::vector<double> system_population;
  int system_modes = 1;
  double max_norm_defect = 0.0;
};

[[nodiscard]] Trajectory simulate_array(const ReservoirConfig& cfg, const CVector& initial);
/// Unit excitation in one mode.
[[nodiscard]] Trajectory simulate_array(const ReservoirConfig& cfg, int mode);
/// Unit excitation in the lossy system waveguide.
[[nodiscard]] Trajectory simulate_array(const ReservoirConfig& cfg);

/// z_rec = N / (2 kappa_b)
[[nodiscard]] double recurrence_estimate(const ReservoirConfig& cfg);

struct DecayComparison {
  std::vector<double> z;
  std::vector<double> simulated;
  std::vector<double> analytic;
  std::vector<double> deviation;
  double normalization = 1.0;
  double fit_begin = 0.0;
  double fit_end = 0.0;
  double recurrence = 0.0;
  std::string fit_method;
  /// Largest deviation on [fit_begin, recurrence].
  double max_deviation = 0.0;
  /// Largest deviation on [0, recurrence].
  double max_deviation_all = 0.0;
};

/// C exp(-int_0^z gamma) at the given samples; C from a least-squares fit of the
/// log population over [0.2 z_max, min(z_rec, z_max)]. Requires kappa = 0.
[[nodiscard]] DecayComparison analytic_decay(const ReservoirConfig& cfg, const Trajectory& trajectory);
[[nodiscard]] DecayComparison analytic_decay(const ReservoirConfig& cfg);

/// Least-squares slope of -ln P over [z0, z1] of a trajectory.
[[nodiscard]] double fitted_decay_rate(const Trajectory& trajectory, double z0, double z1);

struct RecurrenceProbe {
  double predicted = 0.0;
  /// First z after the fit window where ln P leaves the fitted line by more
  /// than the threshold; negative if none was found.
  double observed = -1.0;
};

/// Static-coupling run (beta = 0) out to span_factor * z_rec, looking for the
/// first reflection from the far end of the chain.
[[nodiscard]] RecurrenceProbe probe_recurrence(ReservoirConfig cfg, double span_factor = 3.0,
                                               double log_threshold = 0.1);

struct SystemComparison {
  std::vector<double> z;
  std::vector<double> array_population;
  std::vector<double> lindblad_population;
  std::vector<double> deviation;
  double recurrence = 0.0;
  double lindblad_loss_scale = 0.5;
  double max_deviation = 0.0;
};

/// Array with both system waveguides against the master-equation single-photon
/// population for the same coupler, up to min(z_rec, z_max). Requires kappa > 0.
[[nodiscard]] SystemComparison full_system_comparison(const ReservoirConfig& cfg);

}  // namespace ptfloquet
