#include "ptfloquet/loss_profile.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ptfloquet/types.hpp"

namespace ptfloquet {

namespace {

constexpr double kQuadratureTolerance = 1e-13;
constexpr unsigned kQuadratureDepth = 20;

double family_rate(double amplitude, double sharpness, double phase_term) {
  const double x = amplitude * amplitude * std::exp(-sharpness * phase_term);
  return 2.0 * x / std::sqrt(1.0 - x);
}

template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 400) {
  double f_lo = f(lo);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol) return mid;
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError("bisection did not converge");
}

}  // namespace

LossProfile::LossProfile(Kind kind, double amplitude, double sharpness, double omega,
                         double constant_rate)
    : kind_(kind),
      amplitude_(amplitude),
      sharpness_(sharpness),
      omega_(omega),
      constant_rate_(constant_rate) {}

LossProfile LossProfile::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw InputError("loss scale factor must be non-negative, got " + std::to_string(factor));
  }
  LossProfile p = *this;
  p.scale_ *= factor;
  return p;
}

LossProfile LossProfile::modulated(double amplitude, double sharpness, double omega) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) {
    throw InputError("loss amplitude B must lie in [0, 1), got " + std::to_string(amplitude));
  }
  if (!(sharpness >= 0.0) || !std::isfinite(sharpness)) {
    throw InputError("loss sharpness beta must be non-negative, got " + std::to_string(sharpness));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InputError("modulation frequency omega must be positive, got " + std::to_string(omega));
  }
  return LossProfile(Kind::Modulated, amplitude, sharpness, omega, 0.0);
}

LossProfile LossProfile::constant(double gamma, double period) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InputError("constant loss rate must be non-negative, got " + std::to_string(gamma));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw InputError("period must be positive, got " + std::to_string(period));
  }
  return LossProfile(Kind::Constant, 0.0, 0.0, 2.0 * std::numbers::pi / period, gamma);
}

double LossProfile::period() const { return 2.0 * std::numbers::pi / omega_; }

double LossProfile::rate(double z) const {
  if (kind_ == Kind::Constant) return scale_ * constant_rate_;
  return scale_ * family_rate(amplitude_, sharpness_, 1.0 - std::cos(omega_ * z));
}

double LossProfile::gamma_max() const {
  if (kind_ == Kind::Constant) return scale_ * constant_rate_;
  return scale_ * family_rate(amplitude_, sharpness_, 0.0);
}

double LossProfile::gamma_min() const {
  if (kind_ == Kind::Constant) return scale_ * constant_rate_;
  return scale_ * family_rate(amplitude_, sharpness_, 2.0);
}

double LossProfile::integral(double z0, double z1) const {
  if (z1 < z0) return -integral(z1, z0);
  if (z1 == z0) return 0.0;
  if (kind_ == Kind::Constant) return scale_ * constant_rate_ * (z1 - z0);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto f = [this](double z) { return rate(z); };
  const double period_length = period();
  double total = 0.0;
  double a = z0;
  // Whole periods are split off so that the adaptive rule sees at most one peak.
  while (z1 - a > period_length) {
    total += Quadrature::integrate(f, a, a + period_length, kQuadratureDepth, kQuadratureTolerance);
    a += period_length;
  }
  total += Quadrature::integrate(f, a, z1, kQuadratureDepth, kQuadratureTolerance);
  return total;
}

double gamma_of_z(const LossProfile& profile, double z) { return profile.rate(z); }

double peak_rate(double amplitude) { return family_rate(amplitude, 0.0, 0.0); }

double amplitude_for_peak(double gamma_max) {
  if (!(gamma_max > 0.0) || !std::isfinite(gamma_max)) {
    throw InputError("target peak loss must be positive, got " + std::to_string(gamma_max));
  }
  // peak_rate is strictly increasing on [0, 1) and diverges at 1.
  return bisect([gamma_max](double b) { return peak_rate(b) - gamma_max; }, 0.0, 1.0, 1e-15);
}

LossProfile profile_for_target(double gamma_max, double omega, double min_ratio) {
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) {
    throw InputError("min_ratio must lie in (0, 1), got " + std::to_string(min_ratio));
  }
  if (!(omega > 0.0)) {
    throw InputError("modulation frequency omega must be positive, got " + std::to_string(omega));
  }
  const double amplitude = amplitude_for_peak(gamma_max);
  const auto ratio = [amplitude](double beta) {
    return family_rate(amplitude, beta, 2.0) / family_rate(amplitude, beta, 0.0);
  };
  // The ratio decreases monotonically from 1 at beta = 0; bracket then bisect.
  double hi = 1.0;
  while (ratio(hi) > min_ratio) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("could not bracket the loss sharpness");
  }
  double lo = 0.0;
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) > min_ratio ? lo : hi) = mid;
  }
  return LossProfile::modulated(amplitude, hi, omega);
}

double mean_loss(const LossProfile& profile) {
  const double t = profile.period();
  return profile.integral(0.0, t) / t;
}

}  // namespace ptfloquet
