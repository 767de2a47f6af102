#pragma once

#include <array>
#include <vector>

#include "ptfloquet/fock_basis.hpp"
#include "ptfloquet/ode.hpp"
#include "ptfloquet/superoperators.hpp"
#include "ptfloquet/types.hpp"

namespace ptfloquet {

/// Evolution superoperator as an ordered product of single-generator exponentials:
///
///   U = U_S1 U_S2 U_R
///   U_S1 = e^{f+ L1+L2-} e^{f0 (L1+L1- - L2+L2-)} e^{f- L2+L1-}
///   U_S2 = e^{f+* R1+R2-} e^{f0* (R1+R1- - R2+R2-)} e^{f-* R2+R1-}
///   U_R  = e^{a1 ML} e^{a2 MR} e^{a3 L1-R1-} e^{a4 L2-R2-} e^{a5 L2-R1-} e^{a6 L1-R2-}
///
/// The sl(2) coefficients obey a Riccati system that blows up where the product
/// chart degenerates (M22 = 0 of the 2x2 fundamental matrix), so evolution is
/// split into segments, each restarted from the identity.

struct WeiNormanOptions {
  OdeTolerances tolerances{1e-10, 1e-12};
  /// Segment restart threshold on |f+|, |f-| (and ln of it on |Re f0|).
  double chart_bound = 2.0;
};

using Matrix2c = Eigen::Matrix2cd;

struct Sl2Point {
  Complex plus{};
  Complex zero{};
  Complex minus{};

  [[nodiscard]] Sl2Point conjugate() const {
    return {std::conj(plus), std::conj(zero), std::conj(minus)};
  }
  [[nodiscard]] bool finite() const;
};

struct Sl2Coefficients {
  std::vector<double> z;
  std::vector<Sl2Point> values;

  [[nodiscard]] const Sl2Point& final() const { return values.back(); }
  [[nodiscard]] Sl2Coefficients conjugate() const;
};

struct Sl2Integration {
  Sl2Coefficients coefficients;
  double reached_z = 0.0;
  /// True if integration stopped before z1 because the chart bound was hit.
  bool chart_limited = false;
};

/// Solvable-part coefficients a1..a6 (index 0..5).
using SolvablePoint = std::array<Complex, 6>;

struct SolvableCoefficients {
  std::vector<double> z;
  std::vector<SolvablePoint> values;

  [[nodiscard]] const SolvablePoint& final() const { return values.back(); }
};

/// 2x2 image [[c0, c+], [c-, -c0]] of the left sl(2) part of the Liouvillian,
/// c+ = c- = -i kappa, c0 = -gamma(z)/2.
[[nodiscard]] Matrix2c sl2_generator(const CouplerParams& params, double z);

/// f+' = c+ + 2 c0 f+ - c- f+^2,  f0' = c0 - c- f+,  f-' = c- e^{2 f0}.
[[nodiscard]] Sl2Point sl2_rhs(double z, const Sl2Point& f, const CouplerParams& params);

/// Riccati integration from the identity at z0. Stops early (reached_z < z1)
/// at the last accepted step inside the chart bound.
[[nodiscard]] Sl2Integration integrate_sl2(const CouplerParams& params, double z0, double z1,
                                           const WeiNormanOptions& options = {});

/// Fundamental matrix M(z1) of M' = sl2_generator(z) M, M(z0) = I. Chart-free.
[[nodiscard]] Matrix2c integrate_sl2_linear(const CouplerParams& params, double z0, double z1,
                                            const WeiNormanOptions& options = {});

/// f+ = M12/M22, f- = M21/M22, f0 = -ln M22. Throws NumericalError if M22 = 0.
[[nodiscard]] Sl2Point sl2_from_fundamental(const Matrix2c& m);
/// Inverse map: e^{f+ E12} e^{f0 diag(1,-1)} e^{f- E21}.
[[nodiscard]] Matrix2c fundamental_from_sl2(const Sl2Point& f);

/// Solvable coefficients from the analytic adjoint action: with M the sl(2)
/// fundamental matrix of the segment,
///   a1 = a2 = -1/2 int gamma,
///   d/dz b_kl = 2 gamma e^{a1+a2} M_1k conj(M_1l)
/// for the jump weights b_11 = a3, b_22 = a4, b_21 = a5, b_12 = a6.
[[nodiscard]] SolvableCoefficients integrate_solvable(const CouplerParams& params, double z0,
                                                      double z1, const WeiNormanOptions& options = {});

/// Independent route: integrates dU_R/dz = U_S^{-1} G_R U_S U_R by explicit
/// conjugation on the truncated representation and reads a1..a6 off the
/// images of one-photon dyads. Requires the segment to stay inside the chart.
[[nodiscard]] SolvablePoint integrate_solvable_by_conjugation(const CouplerParams& params,
                                                              const TwoModeBasis& basis, double z0,
                                                              double z1,
                                                              const WeiNormanOptions& options = {});

/// Ordered product of the twelve exponentials, left factor applied last.
[[nodiscard]] Superoperator assemble_propagator(const Sl2Point& left, const Sl2Point& right,
                                                const SolvablePoint& solvable,
                                                const TwoModeBasis& basis);

struct PropagatorSegment {
  double z_begin = 0.0;
  double z_end = 0.0;
  Sl2Point sl2;
  SolvablePoint solvable{};
  CMatrix matrix;
};

class SegmentedPropagator {
 public:
  SegmentedPropagator(TwoModeBasis basis, std::vector<PropagatorSegment> segments);

  [[nodiscard]] const TwoModeBasis& basis() const { return basis_; }
  [[nodiscard]] const std::vector<PropagatorSegment>& segments() const { return segments_; }
  [[nodiscard]] double z_end() const;
  /// Product of the segment matrices, later segments to the left.
  [[nodiscard]] const CMatrix& total() const { return total_; }
  [[nodiscard]] Superoperator superoperator() const;

 private:
  TwoModeBasis basis_;
  std::vector<PropagatorSegment> segments_;
  CMatrix total_;
};

/// U(z) from 0, segmented at every chart-bound hit and every period boundary.
/// Each segment is checked for trace preservation.
[[nodiscard]] SegmentedPropagator propagator(const CouplerParams& params, double z,
                                             const TwoModeBasis& basis,
                                             const WeiNormanOptions& options = {});

}  // namespace ptfloquet
