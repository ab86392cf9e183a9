#pragma once

// Parameter sets of the published detuning scans.
//
// All presets use gamma13 = 3, gamma23 = 1, no dephasing and Z = 1 on a
// 401-point grid over [-10, 10].
//   fig2a..d: |Oc| = 5, |Od0|/|Os0| = 1, phi = -pi/2, 0, pi/2, pi (s channel)
//   fig3a..d: |Oc| = 10, (phi, |Os0|/|Od0|) = (pi/2, 1), (-pi/2, 1), (pi/2, 3),
//             (-pi/2, 3) (d channel, generated E_td intensity reported)
// Outputs are normalized to the inputs, so only the amplitude ratio matters;
// the absolute input amplitudes are kept below 0.1*|Oc| (weak-field regime)
// and chosen as powers of two so the ratios are exact.

#include <array>
#include <numbers>
#include <string>
#include <string_view>

#include "deltamix/config.hpp"
#include "deltamix/error.hpp"

namespace deltamix {

inline constexpr std::array<std::string_view, 8> kPresetNames{
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d"};

inline constexpr double kPresetInput = 0.125;

inline SimulationConfig figure_preset(std::string_view name) {
  constexpr double pi = std::numbers::pi;

  SimulationConfig c;
  c.rates = RelaxationRates(3.0, 1.0, 0.0, 0.0);
  c.propagation = {1.0, 10000};
  c.sweep.delta_d_min = -10.0;
  c.sweep.delta_d_max = 10.0;
  c.sweep.points = 401;
  c.delta_d = 0.0;

  auto fig2 = [&](double phi) {
    c.control = {5.0, 0.0};
    c.input_d = {kPresetInput, phi};
    c.input_s = {kPresetInput, 0.0};
    c.sweep.phi_values = {phi};
    c.sweep.channel = Channel::s;
    c.inset_td = false;
  };
  auto fig3 = [&](double phi, double s_over_d) {
    c.control = {10.0, 0.0};
    c.input_d = {kPresetInput, phi};
    c.input_s = {s_over_d * kPresetInput, 0.0};
    c.sweep.phi_values = {phi};
    c.sweep.channel = Channel::d;
    c.inset_td = true;
  };

  if (name == "fig2a") fig2(-pi / 2);
  else if (name == "fig2b") fig2(0.0);
  else if (name == "fig2c") fig2(pi / 2);
  else if (name == "fig2d") fig2(pi);
  else if (name == "fig3a") fig3(pi / 2, 1.0);
  else if (name == "fig3b") fig3(-pi / 2, 1.0);
  else if (name == "fig3c") fig3(pi / 2, 3.0);
  else if (name == "fig3d") fig3(-pi / 2, 3.0);
  else throw ConfigError("unknown preset '" + std::string(name) + "'");
  return c;
}

}  // namespace deltamix
