#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "deltamix/error.hpp"

namespace deltamix {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double phase) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(phase, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

/// Relaxation and pure-dephasing rates of the three-level system.
///
/// All rates are expressed in units of gamma12, so a normalized instance always
/// carries gamma12 == 1. Use from_raw() for rates given in arbitrary units; it
/// rescales everything by the raw gamma12.
class RelaxationRates {
 public:
  RelaxationRates() = default;

  /// Rates already in units of gamma12.
  RelaxationRates(double gamma13, double gamma23, double gphi2 = 0.0, double gphi3 = 0.0)
      : gamma13_(gamma13), gamma23_(gamma23), gphi2_(gphi2), gphi3_(gphi3) {
    check("gamma13", gamma13_);
    check("gamma23", gamma23_);
    check("gphi2", gphi2_);
    check("gphi3", gphi3_);
  }

  static RelaxationRates from_raw(double gamma12, double gamma13, double gamma23,
                                  double gphi2, double gphi3) {
    if (!(gamma12 > 0.0) || !std::isfinite(gamma12)) {
      throw ValidationError("gamma12", "raw gamma12 must be positive and finite");
    }
    return RelaxationRates(gamma13 / gamma12, gamma23 / gamma12, gphi2 / gamma12,
                           gphi3 / gamma12);
  }

  double gamma12() const noexcept { return 1.0; }
  double gamma13() const noexcept { return gamma13_; }
  double gamma23() const noexcept { return gamma23_; }
  double gphi2() const noexcept { return gphi2_; }
  double gphi3() const noexcept { return gphi3_; }

  friend bool operator==(const RelaxationRates&, const RelaxationRates&) = default;

 private:
  static void check(const char* name, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError(name, "rate must be finite and >= 0");
    }
  }

  double gamma13_ = 0.0;
  double gamma23_ = 0.0;
  double gphi2_ = 0.0;
  double gphi3_ = 0.0;
};

/// Coherence decay rates of the 1-2 and 1-3 transitions.
struct EffectiveLinewidths {
  double gamma21 = 0.0;
  double gamma31 = 0.0;

  /// Gamma31 / Gamma21; throws SingularRatioError when Gamma21 vanishes.
  double ratio() const {
    if (!(gamma21 > 0.0)) throw SingularRatioError("Gamma21 must be > 0 to form Gamma31/Gamma21");
    return gamma31 / gamma21;
  }
};

inline EffectiveLinewidths effective_linewidths(const RelaxationRates& rates) {
  return {0.5 * (rates.gamma12() + rates.gphi2()),
          0.5 * (rates.gamma13() + rates.gamma23() + rates.gphi3())};
}

/// A classical field described by its Rabi frequency magnitude and phase.
/// The complex amplitude is magnitude * exp(-i * phase) everywhere in the library.
struct DriveField {
  double magnitude = 0.0;
  double phase = 0.0;

  Complex amplitude() const { return std::polar(magnitude, -phase); }

  static DriveField from_amplitude(Complex amplitude) {
    return {std::abs(amplitude), -std::arg(amplitude)};
  }

  friend bool operator==(const DriveField&, const DriveField&) = default;
};

/// Local field configuration seen by one slice of the medium.
///
/// The control field is resonant with the 2-3 transition and undepleted, so
/// delta_d is the only detuning.
struct DriveConfiguration {
  DriveField drive_d;
  DriveField control_c;
  DriveField signal_s;
  DriveField generated_td;
  DriveField generated_ts;
  double delta_d = 0.0;

  /// Field driving the 1-2 transition (incident plus difference-frequency).
  Complex field_12() const { return drive_d.amplitude() + generated_td.amplitude(); }
  /// Field driving the 1-3 transition (incident plus sum-frequency).
  Complex field_13() const { return signal_s.amplitude() + generated_ts.amplitude(); }

  /// phi = phi_d + phi_c - phi_s, wrapped into (-pi, pi].
  double relative_phase() const {
    return wrap_phase(drive_d.phase + control_c.phase - signal_s.phase);
  }

  void validate() const {
    auto check = [](const char* name, const DriveField& f) {
      if (!(f.magnitude >= 0.0) || !std::isfinite(f.magnitude)) {
        throw ValidationError(std::string(name) + ".magnitude", "must be finite and >= 0");
      }
      if (!std::isfinite(f.phase)) throw ValidationError(std::string(name) + ".phase", "must be finite");
    };
    check("drive_d", drive_d);
    check("control_c", control_c);
    check("signal_s", signal_s);
    check("generated_td", generated_td);
    check("generated_ts", generated_ts);
    if (!std::isfinite(delta_d)) throw ValidationError("delta_d", "must be finite");
  }
};

}  // namespace deltamix
