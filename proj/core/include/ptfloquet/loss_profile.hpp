#pragma once

namespace ptfloquet {

/// Periodic loss rate of the first waveguide,
///
///   gamma(z) = 2 B^2 e^{-beta (1 - cos omega z)} / sqrt(1 - B^2 e^{-beta (1 - cos omega z)}),
///
/// or a constant rate (static coupler). Rates and frequencies are in units of
/// the coupling kappa, lengths in units of 1/kappa.
class LossProfile {
 public:
  enum class Kind { Modulated, Constant };

  /// Requires 0 < B < 1, beta >= 0, omega > 0. beta = 0 is accepted as the
  /// degenerate flat member of the family.
  static LossProfile modulated(double amplitude, double sharpness, double omega);
  /// Constant rate gamma >= 0. The period is only used to define a monodromy.
  static LossProfile constant(double gamma, double period);

  /// Same profile with every rate multiplied by factor >= 0.
  [[nodiscard]] LossProfile scaled(double factor) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_constant() const { return kind_ == Kind::Constant; }
  [[nodiscard]] double amplitude() const { return amplitude_; }
  [[nodiscard]] double sharpness() const { return sharpness_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double period() const;

  [[nodiscard]] double rate(double z) const;
  /// Value at z = 0 (the maximum, denoted gamma-bar).
  [[nodiscard]] double gamma_max() const;
  /// Value at cos(omega z) = -1.
  [[nodiscard]] double gamma_min() const;

  /// Integral of gamma over [z0, z1], adaptive Gauss-Kronrod per period.
  [[nodiscard]] double integral(double z0, double z1) const;

 private:
  LossProfile(Kind kind, double amplitude, double sharpness, double omega, double constant_rate);

  Kind kind_;
  double amplitude_;
  double sharpness_;
  double omega_;
  double constant_rate_;
  double scale_ = 1.0;
};

[[nodiscard]] double gamma_of_z(const LossProfile& profile, double z);

/// Peak value 2B^2/sqrt(1-B^2) of the modulated family.
[[nodiscard]] double peak_rate(double amplitude);

/// Root B in (0, 1) of 2B^2/sqrt(1-B^2) = gamma_max, by bisection to 1e-12.
[[nodiscard]] double amplitude_for_peak(double gamma_max);

/// Profile with peak gamma_max whose minimum satisfies gamma_min/gamma_max <= min_ratio
/// with the smallest such sharpness beta.
[[nodiscard]] LossProfile profile_for_target(double gamma_max, double omega, double min_ratio = 1e-3);

/// (1/T) * integral of gamma over one period.
[[nodiscard]] double mean_loss(const LossProfile& profile);

}  // namespace ptfloquet
