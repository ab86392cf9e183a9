#pragma once

// Envelope propagation of the four weak fields through the medium.
//
// Under the slowly varying envelope approximation the four envelopes split
// into two autonomous pairs that exchange energy through the control field:
//   pair A = (Od, Ots): the drive feeds sum-frequency generation on 1-3,
//   pair B = (Os, Otd): the signal feeds difference-frequency generation on 1-2.
// Each pair obeys dx/dZ = M x with
//   dO(1-2 field)/dZ = i * rho21-part,
//   dO(1-3 field)/dZ = i (Gamma31/Gamma21) * rho31-part,
// where the Gamma31/Gamma21 factor carries kappa13 = kappa12 Gamma31/Gamma21.
// Z = kappa12 z is measured in units of gamma12.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "deltamix/error.hpp"
#include "deltamix/types.hpp"
#include "deltamix/wave_mixing.hpp"

namespace deltamix {

using Matrix2 = Eigen::Matrix<Complex, 2, 2>;
using Vector2 = Eigen::Matrix<Complex, 2, 1>;

enum class FieldId { d, td, s, ts };

struct PropagationSpec {
  double z = 1.0;
  int steps = 10000;

  void validate() const {
    if (!(z >= 0.0) || !std::isfinite(z)) throw ValidationError("Z", "must be finite and >= 0");
    if (steps < 1) throw ValidationError("steps", "must be >= 1");
  }

  friend bool operator==(const PropagationSpec&, const PropagationSpec&) = default;
};

struct PairPropagator {
  Matrix2 matrix = Matrix2::Zero();
  std::array<FieldId, 2> channels{FieldId::d, FieldId::ts};
};

/// Coupling matrices of pair A = (d, ts) and pair B = (s, td).
inline std::pair<PairPropagator, PairPropagator> pair_matrices(const DriveConfiguration& config,
                                                               const EffectiveLinewidths& lw) {
  const double r = lw.ratio();
  const Complex x = xi(lw, config).xi;
  const Complex oc = config.control_c.amplitude();
  const Complex pre = -1.0 / (2.0 * x);
  const Complex d12 = Complex(lw.gamma31, config.delta_d);      // Gamma31 + i Dd
  const Complex d13 = r * Complex(lw.gamma21, config.delta_d);  // r (Gamma21 + i Dd)

  PairPropagator a;
  a.channels = {FieldId::d, FieldId::ts};
  a.matrix << d12, kI * std::conj(oc) / 2.0,
              kI * r * oc / 2.0, d13;
  a.matrix *= pre;

  PairPropagator b;
  b.channels = {FieldId::s, FieldId::td};
  b.matrix << d13, kI * r * oc / 2.0,
              kI * std::conj(oc) / 2.0, d12;
  b.matrix *= pre;
  return {a, b};
}

namespace detail {

// sin(t)/t with the removable singularity at t = 0.
inline Complex sinc(Complex t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

}  // namespace detail

/// exp(M Z) x0 for a 2x2 M, using
/// exp(MZ) = exp(aZ) [cos(theta) I + sin(theta)/theta (M - aI) Z],
/// a = tr(M)/2, theta^2 = det(M - aI) Z^2.
inline Vector2 propagate_expm(const PairPropagator& pair, const Vector2& initial, double z) {
  if (!(z >= 0.0)) throw ContractError("propagate_expm: Z must be >= 0");
  const Matrix2& m = pair.matrix;
  const Complex alpha = 0.5 * m.trace();
  const Matrix2 n = m - alpha * Matrix2::Identity();
  const Complex theta = std::sqrt(n.determinant()) * z;
  const Matrix2 e = std::exp(alpha * z) *
                    (std::cos(theta) * Matrix2::Identity() + detail::sinc(theta) * z * n);
  return e * initial;
}

/// Fixed-step classical RK4 on dx/dZ = M x. Independent of propagate_expm.
inline Vector2 propagate_stepwise(const PairPropagator& pair, const Vector2& initial, double z,
                                  int steps) {
  if (steps < 1) throw ContractError("propagate_stepwise: steps must be >= 1");
  if (!(z >= 0.0)) throw ContractError("propagate_stepwise: Z must be >= 0");
  const Matrix2& m = pair.matrix;
  const double h = z / steps;
  Vector2 x = initial;
  for (int k = 0; k < steps; ++k) {
    const Vector2 k1 = m * x;
    const Vector2 k2 = m * (x + 0.5 * h * k1);
    const Vector2 k3 = m * (x + 0.5 * h * k2);
    const Vector2 k4 = m * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// F = sqrt(Dd^2 (1 - Gamma31/Gamma21)^2 + (Gamma31/Gamma21) |Oc|^2).
inline double closed_form_F(const EffectiveLinewidths& lw, double delta_d,
                            double omega_c_magnitude) {
  const double r = lw.ratio();
  return std::sqrt(delta_d * delta_d * (1.0 - r) * (1.0 - r) +
                   r * omega_c_magnitude * omega_c_magnitude);
}

/// G = exp[-Gamma31 Z/(2 xi) - i Dd (1 + Gamma31/Gamma21) Z/(4 xi)], complex xi.
inline Complex closed_form_G(const EffectiveLinewidths& lw, Complex xi_value, double delta_d,
                             double z) {
  const double r = lw.ratio();
  return std::exp(-lw.gamma31 * z / (2.0 * xi_value) -
                  kI * delta_d * (1.0 + r) * z / (4.0 * xi_value));
}

/// Normalized outputs split into the incident-field part (first two terms) and
/// the generated-field part (third term).
struct ClosedFormOutputs {
  Complex s_incident;
  Complex s_generated;
  Complex d_incident;
  Complex d_generated;

  Complex s_total() const { return s_incident + s_generated; }
  Complex d_total() const { return d_incident + d_generated; }
};

namespace detail {

inline void require_entrance_state(const DriveConfiguration& config) {
  if (config.generated_td.magnitude != 0.0 || config.generated_ts.magnitude != 0.0) {
    throw ContractError("generated fields must vanish at the medium entrance");
  }
}

inline void require_normalizable(const DriveConfiguration& config) {
  if (!(config.signal_s.magnitude > 0.0)) {
    throw NormalizationError("signal input |Omega_s0| is zero; E_s^tot/E_s0 is undefined");
  }
  if (!(config.drive_d.magnitude > 0.0)) {
    throw NormalizationError("drive input |Omega_d0| is zero; E_d^tot/E_d0 is undefined");
  }
}

}  // namespace detail

/// Analytic total outputs E_s^tot/E_s0 and E_d^tot/E_d0 at distance Z.
inline ClosedFormOutputs closed_form_outputs(const DriveConfiguration& config,
                                             const EffectiveLinewidths& lw, double z) {
  detail::require_entrance_state(config);
  detail::require_normalizable(config);
  if (!(z >= 0.0)) throw ContractError("closed_form_outputs: Z must be >= 0");
  if (!(lw.gamma31 > 0.0)) throw SingularRatioError("Gamma31 must be > 0 to form Gamma21/Gamma31");

  const double r = lw.ratio();
  const double dd = config.delta_d;
  const double oc = config.control_c.magnitude;
  const double od0 = config.drive_d.magnitude;
  const double os0 = config.signal_s.magnitude;
  const double phi_d = config.drive_d.phase;
  const double phi_c = config.control_c.phase;
  const double phi_s = config.signal_s.phase;

  const Complex x = xi(lw, dd, oc).xi;
  const double f = closed_form_F(lw, dd, oc);
  const Complex g = closed_form_G(lw, x, dd, z);
  const Complex arg = f * z / (4.0 * x);
  const Complex c = std::cos(arg);
  // sin(FZ/4xi)/F, finite as F -> 0
  const Complex sin_over_f = std::abs(arg) < 1e-8 ? (z / (4.0 * x)) * detail::sinc(arg)
                                                  : std::sin(arg) / f;
  const Complex sin_arg = std::sin(arg);

  ClosedFormOutputs out;
  const Complex detuning_term = kI * dd * g * (r - 1.0) * sin_over_f;
  out.s_incident = g * c - detuning_term;
  out.d_incident = g * c + detuning_term;

  if (oc > 0.0) {
    const double ir = lw.gamma21 / lw.gamma31;
    const double denom4 = std::sqrt(dd * dd * (1.0 - ir) * (1.0 - ir) + oc * oc * ir);
    out.s_generated = -kI * std::exp(-kI * (phi_d + phi_c - phi_s)) * g * od0 * oc / os0 *
                      sin_arg / denom4;
    out.d_generated = -kI * std::exp(-kI * (phi_s - phi_c - phi_d)) * g * os0 * oc / od0 *
                      sin_arg / f;
  }
  return out;
}

/// The four envelopes at distance Z.
struct FieldAmplitudes {
  Complex omega_d;
  Complex omega_td;
  Complex omega_s;
  Complex omega_ts;

  Complex total_d() const { return omega_d + omega_td; }
  Complex total_s() const { return omega_s + omega_ts; }
};

/// Propagates both pairs from the entrance (generated fields zero) to Z with
/// the matrix exponential.
inline FieldAmplitudes propagate_fields(const DriveConfiguration& config,
                                        const EffectiveLinewidths& lw, double z) {
  detail::require_entrance_state(config);
  const auto [a, b] = pair_matrices(config, lw);
  const Vector2 pa = propagate_expm(a, Vector2(config.drive_d.amplitude(), 0.0), z);
  const Vector2 pb = propagate_expm(b, Vector2(config.signal_s.amplitude(), 0.0), z);
  return {pa(0), pb(1), pb(0), pa(1)};
}

/// Same as propagate_fields, integrated with RK4.
inline FieldAmplitudes propagate_fields_stepwise(const DriveConfiguration& config,
                                                 const EffectiveLinewidths& lw, double z,
                                                 int steps) {
  detail::require_entrance_state(config);
  const auto [a, b] = pair_matrices(config, lw);
  const Vector2 pa = propagate_stepwise(a, Vector2(config.drive_d.amplitude(), 0.0), z, steps);
  const Vector2 pb = propagate_stepwise(b, Vector2(config.signal_s.amplitude(), 0.0), z, steps);
  return {pa(0), pb(1), pb(0), pa(1)};
}

/// Normalized intensities of one output channel.
struct ChannelIntensities {
  Complex total_ratio;
  double intensity_total = 0.0;
  double intensity_incident = 0.0;
  double intensity_generated = 0.0;
  double interference_term = 0.0;
};

struct InterferenceRecord {
  ChannelIntensities s;
  ChannelIntensities d;
};

inline ChannelIntensities channel_intensities(Complex incident_ratio, Complex generated_ratio) {
  ChannelIntensities c;
  c.total_ratio = incident_ratio + generated_ratio;
  c.intensity_total = std::norm(c.total_ratio);
  c.intensity_incident = std::norm(incident_ratio);
  c.intensity_generated = std::norm(generated_ratio);
  c.interference_term = c.intensity_total - c.intensity_incident - c.intensity_generated;
  return c;
}

/// Splits each output channel into incident, generated and interference parts
/// using the pair propagations.
inline InterferenceRecord interference_decomposition(const DriveConfiguration& config,
                                                     const EffectiveLinewidths& lw, double z) {
  detail::require_normalizable(config);
  const FieldAmplitudes f = propagate_fields(config, lw, z);
  const Complex s0 = config.signal_s.amplitude();
  const Complex d0 = config.drive_d.amplitude();
  return {channel_intensities(f.omega_s / s0, f.omega_ts / s0),
          channel_intensities(f.omega_d / d0, f.omega_td / d0)};
}

/// |a - b| / max(|a|, |b|), zero when both vanish.
inline double relative_deviation(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace deltamix
