#pragma once

// Closed-form perturbative response of the ground-state-prepared medium.

#include <cmath>
#include <complex>
#include <utility>

#include "deltamix/types.hpp"

namespace deltamix {

/// xi = (Gamma21 + i Dd)(Gamma31 + i Dd) + |Oc|^2 / 4, in units of gamma12^2.
struct ResponseDenominator {
  Complex xi;
};

inline ResponseDenominator xi(const EffectiveLinewidths& lw, double delta_d,
                              double omega_c_magnitude) {
  return {Complex(lw.gamma21, delta_d) * Complex(lw.gamma31, delta_d) +
          0.25 * omega_c_magnitude * omega_c_magnitude};
}

inline ResponseDenominator xi(const EffectiveLinewidths& lw, const DriveConfiguration& config) {
  return xi(lw, config.delta_d, config.control_c.magnitude);
}

/// Linear coherences (rho21^(1), rho31^(1)).
inline std::pair<Complex, Complex> first_order_coherences(const DriveConfiguration& config,
                                                          const EffectiveLinewidths& lw) {
  const Complex x = xi(lw, config).xi;
  const Complex rho21 = kI * config.field_12() * Complex(lw.gamma31, config.delta_d) / (2.0 * x);
  const Complex rho31 = kI * config.field_13() * Complex(lw.gamma21, config.delta_d) / (2.0 * x);
  return {rho21, rho31};
}

/// Three-wave-mixing coherences (rho21^(2), rho31^(2)): difference-frequency
/// on 1-2 driven by Oc* (Os + Ots), sum-frequency on 1-3 driven by Oc (Od + Otd).
inline std::pair<Complex, Complex> second_order_coherences(const DriveConfiguration& config,
                                                           const EffectiveLinewidths& lw) {
  const Complex x = xi(lw, config).xi;
  const Complex oc = config.control_c.amplitude();
  const Complex rho21 = -std::conj(oc) * config.field_13() / (4.0 * x);
  const Complex rho31 = -oc * config.field_12() / (4.0 * x);
  return {rho21, rho31};
}

/// Drives above this fraction of |Oc| are outside the weak-field regime the
/// closed forms assume (rho11 ~ 1). Reported, never enforced.
inline constexpr double kWeakDriveFraction = 0.1;

inline bool weak_drive_bound_exceeded(const DriveConfiguration& config) {
  const double limit = kWeakDriveFraction * config.control_c.magnitude;
  return config.drive_d.magnitude > limit || config.signal_s.magnitude > limit;
}

}  // namespace deltamix
