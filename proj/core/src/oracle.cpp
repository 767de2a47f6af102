#include "ptfloquet/oracle.hpp"

#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace ptfloquet {

namespace odeint = boost::numeric::odeint;

CVector oracle_propagate_vector(const CouplerParams& params, const TwoModeBasis& basis,
                                const CVector& v0, double z0, double z1,
                                const OracleOptions& options) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(basis.dim()) * basis.dim();
  if (v0.size() != n) throw InputError("oracle: vector length inconsistent with basis");
  if (z1 < z0) throw InputError("oracle: z1 must be >= z0");
  if (z1 == z0) return v0;

  const LiouvillianParts parts = liouvillian_parts(params.kappa, basis);
  using State = std::vector<Complex>;
  State x(v0.data(), v0.data() + n);
  const auto rhs = [&](const State& s, State& ds, double z) {
    Eigen::Map<const CVector> in(s.data(), n);
    Eigen::Map<CVector> out(ds.data(), n);
    out = parts.coherent * in;
    out += params.loss.rate(z) * (parts.dissipator * in);
  };
  using Stepper = odeint::runge_kutta_dopri5<State>;
  const double initial_step = 1e-3 * (z1 - z0);
  try {
    odeint::integrate_adaptive(
        odeint::make_controlled<Stepper>(options.abs_tol, options.rel_tol), rhs, x, z0, z1,
        initial_step);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("oracle integration failed: ") + e.what());
  }
  CVector out = Eigen::Map<const CVector>(x.data(), n);
  if (!out.allFinite()) throw NumericalError("oracle integration produced non-finite values");
  return out;
}

DensityMatrix oracle_propagate(const CouplerParams& params, const DensityMatrix& rho0, double z,
                               const OracleOptions& options) {
  const LiouvilleVector v = vectorize(rho0);
  return devectorize(rho0.basis(),
                     oracle_propagate_vector(params, rho0.basis(), v.data(), 0.0, z, options));
}

Superoperator oracle_propagator(const CouplerParams& params, const TwoModeBasis& basis, double z,
                                const OracleOptions& options) {
  const auto n = static_cast<Eigen::Index>(basis.dim()) * basis.dim();
  CMatrix u(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    u.col(col) = oracle_propagate_vector(params, basis, CVector::Unit(n, col), 0.0, z, options);
  }
  return Superoperator(basis, std::move(u), "U_oracle");
}

Superoperator oracle_monodromy(const CouplerParams& params, const TwoModeBasis& basis,
                               const OracleOptions& options) {
  return oracle_propagator(params, basis, params.loss.period(), options);
}

}  // namespace ptfloquet
