#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptfloquet/fock_basis.hpp"
#include "ptfloquet/ode.hpp"
#include "ptfloquet/superoperators.hpp"
#include "ptfloquet/wei_norman.hpp"

namespace ptfloquet {

enum class PtPhase { Symmetric, Broken };

[[nodiscard]] std::string_view to_string(PtPhase phase);

struct FloquetResult {
  CMatrix monodromy;
  double period = 0.0;
  /// Monodromy eigenvalues, in the same order as `exponents`.
  std::vector<Complex> multipliers;
  /// log(multiplier)/T, principal branch, sorted by descending real part then
  /// ascending imaginary part.
  std::vector<Complex> exponents;
  std::vector<double> lyapunov;
  /// (1/T) int_0^T gamma.
  double mean_loss = 0.0;
  /// -mean_loss/2: the common Lyapunov exponent of the symmetric phase.
  double mean_loss_ref = 0.0;
};

/// Single-excitation amplitudes c1' = -i kappa c2 - gamma(z) c1, c2' = -i kappa c1
/// integrated over one period from the identity.
[[nodiscard]] FloquetResult monodromy_2x2(const CouplerParams& params,
                                          const OdeTolerances& tolerances = {});

/// Full Liouville-space monodromy from the product expansion.
[[nodiscard]] FloquetResult monodromy_full(const CouplerParams& params, const TwoModeBasis& basis,
                                           const WeiNormanOptions& options = {});

/// Eigenvalues of a block-triangular Liouville-space operator, collected from its
/// diagonal (ket photons, bra photons) sector blocks.
[[nodiscard]] std::vector<Complex> sector_spectrum(const CMatrix& op, const TwoModeBasis& basis);

/// Eigenvalues of the diagonal block for ket sector n_ket and bra sector n_bra.
[[nodiscard]] std::vector<Complex> sector_block_spectrum(const CMatrix& op, const TwoModeBasis& basis,
                                                         int n_ket, int n_bra);

/// Products lambda_a ... (ket photons) times conj(lambda_b) ... (bra photons) of
/// the two single-photon multipliers: the expected spectrum of the
/// (n_ket, n_bra) block of the full monodromy.
[[nodiscard]] std::vector<Complex> predicted_sector_spectrum(const FloquetResult& single_photon,
                                                             int n_ket, int n_bra);

/// Largest distance between paired entries of two equally sized spectra,
/// pairing each entry of `expected` greedily with its nearest unused partner.
[[nodiscard]] double spectrum_distance(const std::vector<Complex>& expected,
                                       const std::vector<Complex>& actual);

/// |Re mu_0 - Re mu_1| of a two-exponent result.
[[nodiscard]] double lyapunov_splitting(const FloquetResult& result);

/// Broken iff the Lyapunov splitting exceeds eps_split (units of kappa).
[[nodiscard]] PtPhase classify_pt(const FloquetResult& result, double eps_split = 1e-4);

struct PhaseDiagramConfig {
  double omega_min = 0.2;
  double omega_max = 3.0;
  int n_omega = 141;
  double gamma_min = 0.01;
  double gamma_max = 2.5;
  int n_gamma = 125;
  double kappa = 1.0;
  double min_ratio = 1e-3;
  double eps_split = 1e-4;
  /// Static coupler: gamma(z) = gamma-bar for all z (omega only sets T).
  bool constant_profile = false;
  OdeTolerances tolerances{};
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;

  void validate() const;
};

struct PhasePoint {
  PtPhase phase = PtPhase::Symmetric;
  double splitting = 0.0;
  double sharpness = 0.0;
  bool ok = false;
  std::string error;
};

struct PhaseDiagram {
  PhaseDiagramConfig config;
  std::vector<double> omega;
  std::vector<double> gamma;
  /// Row-major in omega: index i_omega * n_gamma + i_gamma.
  std::vector<PhasePoint> points;
  double wall_seconds = 0.0;

  [[nodiscard]] const PhasePoint& at(std::size_t i_omega, std::size_t i_gamma) const {
    return points[i_omega * gamma.size() + i_gamma];
  }
  /// Smallest gamma-bar classified Broken in column i_omega.
  [[nodiscard]] std::optional<double> threshold(std::size_t i_omega) const;
};

[[nodiscard]] std::vector<double> linspace(double lo, double hi, int n);

/// Loss profile for one grid point (modulated or static).
[[nodiscard]] CouplerParams grid_params(const PhaseDiagramConfig& config, double omega,
                                        double gamma_bar);

[[nodiscard]] PhaseDiagram phase_diagram(const PhaseDiagramConfig& config);

/// rho(z) = U(z mod T) U(T)^floor(z/T) rho0, with the integer power by repeated squaring.
[[nodiscard]] std::vector<DensityMatrix> propagate_state(const CouplerParams& params,
                                                         const DensityMatrix& rho0,
                                                         const std::vector<double>& z_samples,
                                                         const WeiNormanOptions& options = {});

struct OccupationTable {
  std::vector<double> z;
  /// (n, h) per column, in basis order.
  std::vector<std::pair<int, int>> columns;
  /// rows[i][c] = P(columns[c]; z[i])
  std::vector<std::vector<double>> rows;
  std::vector<double> trace;

  /// Total occupation of the n-photon sector at every sample.
  [[nodiscard]] std::vector<double> sector_total(int n) const;
};

/// n_samples evenly spaced points on [0, z_max]; z_max = 0 gives the single input row.
[[nodiscard]] OccupationTable occupation_trajectories(const CouplerParams& params,
                                                      const DensityMatrix& rho0, double z_max,
                                                      int n_samples,
                                                      const WeiNormanOptions& options = {});

struct StrandSplitting {
  int sector = 0;
  /// Population decay rate of the slow single-photon strand.
  double slow_rate = 0.0;
  /// Population decay rate of the fast strand, from slow + fast = 2 * mean loss.
  double fast_rate = 0.0;
  double splitting = 0.0;
  double mean_loss = 0.0;
  int first_period = 0;
  int last_period = 0;
};

/// Fits the stroboscopic decay of the highest occupied photon sector (which is
/// not fed from above) over periods [first_period, last_period]. Its late-time
/// rate is n times the slow single-photon population rate.
[[nodiscard]] StrandSplitting fit_strand_splitting(const CouplerParams& params,
                                                   const DensityMatrix& rho0, int first_period,
                                                   int last_period,
                                                   const WeiNormanOptions& options = {});

}  // namespace ptfloquet
