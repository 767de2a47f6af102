#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ptfloquet/types.hpp"

namespace ptfloquet {

struct OdeTolerances {
  double rel = 1e-10;
  double abs = 1e-12;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

/// Adaptive Dormand-Prince 5(4) for complex vector ODEs y' = rhs(z, y).
///
/// `observe(z, y)` runs after every accepted step; returning false discards that
/// step and stops integration at the previous point. Returns the z reached; `y`
/// holds the solution there. Throws NumericalError on step-size underflow.
template <class Rhs, class Observer>
double integrate_dopri5(Rhs&& rhs, CVector& y, double z0, double z1, const OdeTolerances& tol,
                        Observer&& observe, OdeStats* stats = nullptr) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeStats local;
  OdeStats& st = stats ? *stats : local;
  if (z1 == z0) return z0;
  if (!(z1 > z0)) throw InputError("integration interval must be increasing");

  const auto n = y.size();
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n);
  rhs(z0, y, k1);
  ++st.evaluations;

  const auto scaled_norm = [&](const CVector& v, const CVector& ref) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = tol.abs + tol.rel * std::abs(ref[i]);
      worst = std::max(worst, std::abs(v[i]) / sc);
    }
    return worst;
  };

  const double span = z1 - z0;
  double h;
  {
    const double d0 = scaled_norm(y, y);
    const double d1 = scaled_norm(k1, y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h = std::min(h, span);
  }

  double z = z0;
  while (z < z1) {
    const bool last = z + h >= z1;
    if (last) h = z1 - z;
    if (!last && h <= 1e-14 * std::max(1.0, std::abs(z))) {
      throw NumericalError("step size underflow at z = " + std::to_string(z));
    }

    ynew = y + h * (a21 * k1);
    rhs(z + c2 * h, ynew, k2);
    ynew = y + h * (a31 * k1 + a32 * k2);
    rhs(z + c3 * h, ynew, k3);
    ynew = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(z + c4 * h, ynew, k4);
    ynew = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(z + c5 * h, ynew, k5);
    ynew = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(z + h, ynew, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(z + h, ynew, k7);
    st.evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      const double znew = last ? z1 : z + h;
      if (!observe(znew, ynew)) {
        ++st.rejected;
        return z;
      }
      ++st.accepted;
      y = ynew;
      k1 = k7;
      z = znew;
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(en, 1e-16), -0.2)));
    } else {
      ++st.rejected;
      h *= std::max(0.1, 0.9 * std::pow(en, -0.2));
    }
  }
  return z;
}

template <class Rhs>
double integrate_dopri5(Rhs&& rhs, CVector& y, double z0, double z1, const OdeTolerances& tol,
                        OdeStats* stats = nullptr) {
  return integrate_dopri5(std::forward<Rhs>(rhs), y, z0, z1, tol,
                          [](double, const CVector&) { return true; }, stats);
}

}  // namespace ptfloquet
