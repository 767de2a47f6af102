#pragma once

#include "ptfloquet/fock_basis.hpp"
#include "ptfloquet/superoperators.hpp"

namespace ptfloquet {

/// Reference propagation by direct integration of d|rho>>/dz = L(z)|rho>>.
/// Uses its own integrator (Boost.Odeint Dormand-Prince) so that it shares
/// nothing with the product-expansion path beyond basis and generators.
struct OracleOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
};

[[nodiscard]] CVector oracle_propagate_vector(const CouplerParams& params, const TwoModeBasis& basis,
                                              const CVector& v0, double z0, double z1,
                                              const OracleOptions& options = {});

[[nodiscard]] DensityMatrix oracle_propagate(const CouplerParams& params, const DensityMatrix& rho0,
                                             double z, const OracleOptions& options = {});

/// Dense propagator over [0, z], built column by column.
[[nodiscard]] Superoperator oracle_propagator(const CouplerParams& params, const TwoModeBasis& basis,
                                              double z, const OracleOptions& options = {});

/// One-period propagator U(T).
[[nodiscard]] Superoperator oracle_monodromy(const CouplerParams& params, const TwoModeBasis& basis,
                                             const OracleOptions& options = {});

}  // namespace ptfloquet
