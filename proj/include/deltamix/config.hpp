#pragma once

// Simulation configuration: a flat "key = value" text format.
//
//   # comment
//   gamma13 = 3
//   phi_values = -pi/2, 0, pi/2
//
// Every quantity is in units of gamma12. Angles accept plain numbers or
// multiples of pi ("pi", "-pi/2", "0.25*pi", "3pi/4"). Unknown or repeated keys
// are rejected.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deltamix/error.hpp"
#include "deltamix/propagation.hpp"
#include "deltamix/types.hpp"

namespace deltamix {

enum class Channel { s, d, both };

inline std::string to_string(Channel c) {
  switch (c) {
    case Channel::s: return "s";
    case Channel::d: return "d";
    case Channel::both: return "both";
  }
  return "both";
}

/// Detuning grid and list of relative phases. Each phase is applied as
/// phi_d = phi with phi_c = phi_s = 0.
struct SweepSpec {
  double delta_d_min = -10.0;
  double delta_d_max = 10.0;
  int points = 401;
  std::vector<double> phi_values{0.0};
  Channel channel = Channel::both;

  double delta_at(int i) const {
    return delta_d_min + (delta_d_max - delta_d_min) * static_cast<double>(i) / (points - 1);
  }

  void validate() const {
    if (points < 2) throw ValidationError("points", "must be >= 2");
    if (!std::isfinite(delta_d_min) || !std::isfinite(delta_d_max)) {
      throw ValidationError("delta_d_min", "detuning bounds must be finite");
    }
    if (!(delta_d_min < delta_d_max)) {
      throw ValidationError("delta_d_max", "must be greater than delta_d_min");
    }
    if (phi_values.empty()) throw ValidationError("phi_values", "must list at least one phase");
    for (double phi : phi_values) {
      if (!std::isfinite(phi)) throw ValidationError("phi_values", "phases must be finite");
    }
  }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SimulationConfig {
  RelaxationRates rates{3.0, 1.0};
  DriveField control{5.0, 0.0};
  DriveField input_d{1.0, 0.0};
  DriveField input_s{1.0, 0.0};
  /// Detuning for single-point commands (steady-state, coherences, propagate).
  double delta_d = 0.0;
  PropagationSpec propagation{1.0, 10000};
  SweepSpec sweep;
  /// Report the generated difference-frequency intensity |E_td/E_d0|^2.
  bool inset_td = false;

  double z() const { return propagation.z; }

  void validate() const {
    auto check_field = [](const std::string& name, const DriveField& f) {
      if (!(f.magnitude >= 0.0) || !std::isfinite(f.magnitude)) {
        throw ValidationError(name + "_magnitude", "must be finite and >= 0");
      }
      if (!std::isfinite(f.phase)) throw ValidationError(name + "_phase", "must be finite");
    };
    check_field("control", control);
    check_field("input_d", input_d);
    check_field("input_s", input_s);
    if (!std::isfinite(delta_d)) throw ValidationError("delta_d", "must be finite");
    if (!(effective_linewidths(rates).gamma31 > 0.0)) {
      throw ValidationError("gamma13", "gamma13 + gamma23 + gphi3 must be > 0");
    }
    propagation.validate();
    sweep.validate();
  }

  /// Local configuration at the medium entrance for a sweep point.
  DriveConfiguration sweep_point(double delta, double phi) const {
    DriveConfiguration c;
    c.drive_d = {input_d.magnitude, phi};
    c.control_c = {control.magnitude, 0.0};
    c.signal_s = {input_s.magnitude, 0.0};
    c.delta_d = delta;
    return c;
  }

  /// Local configuration at the medium entrance using the phases as given.
  DriveConfiguration single_point() const {
    DriveConfiguration c;
    c.drive_d = input_d;
    c.control_c = control;
    c.signal_s = input_s;
    c.delta_d = delta_d;
    return c;
  }

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::optional<double> parse_angle(std::string_view s) {
  s = trim(s);
  if (auto plain = parse_number(s)) return plain;
  static const std::regex pi_form(
      R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi(?:\s*/\s*((?:\d+\.?\d*|\.\d+)))?$)");
  std::cmatch m;
  if (!std::regex_match(s.begin(), s.end(), m, pi_form)) return std::nullopt;
  double value = std::numbers::pi;
  if (m[2].matched) value *= *parse_number(m[2].str());
  if (m[3].matched) {
    const double den = *parse_number(m[3].str());
    if (den == 0.0) return std::nullopt;
    value /= den;
  }
  if (m[1].str() == "-") value = -value;
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses a comma-separated list of angles, e.g. "-pi/2,0,pi/2".
inline std::vector<double> parse_angle_list(std::string_view text, const std::string& field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto value = detail::parse_angle(item);
    if (!value) throw ValidationError(field, "cannot parse angle '" + std::string(detail::trim(item)) + "'");
    out.push_back(*value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parses and validates configuration text.
inline SimulationConfig parse_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (detail::trim(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      const auto col = line.find_first_not_of(" \t");
      throw ParseError(line_no, static_cast<int>(col) + 1, "expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, static_cast<int>(eq) + 1, "missing key before '='");
    if (value.empty()) throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    if (!entries.emplace(key, std::make_pair(value, line_no)).second) {
      throw ParseError(line_no, 1, "duplicate key '" + key + "'");
    }
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string v = it->second.first;
    entries.erase(it);
    return v;
  };
  auto number = [&](const std::string& key, double fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const auto parsed = detail::parse_number(*v);
    if (!parsed) throw ValidationError(key, "expected a number, got '" + *v + "'");
    return *parsed;
  };
  auto angle = [&](const std::string& key, double fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const auto parsed = detail::parse_angle(*v);
    if (!parsed) throw ValidationError(key, "expected an angle, got '" + *v + "'");
    return *parsed;
  };
  auto integer = [&](const std::string& key, int fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw ValidationError(key, "expected an integer, got '" + *v + "'");
    }
    return out;
  };

  SimulationConfig cfg;
  const double gamma12 = number("gamma12", 1.0);
  if (gamma12 != 1.0) throw ValidationError("gamma12", "rates are in units of gamma12, so gamma12 must be 1");
  cfg.rates = RelaxationRates(number("gamma13", cfg.rates.gamma13()), number("gamma23", cfg.rates.gamma23()),
                              number("gphi2", cfg.rates.gphi2()), number("gphi3", cfg.rates.gphi3()));
  cfg.control = {number("control_magnitude", cfg.control.magnitude), angle("control_phase", cfg.control.phase)};
  cfg.input_d = {number("input_d_magnitude", cfg.input_d.magnitude), angle("input_d_phase", cfg.input_d.phase)};
  cfg.input_s = {number("input_s_magnitude", cfg.input_s.magnitude), angle("input_s_phase", cfg.input_s.phase)};
  cfg.delta_d = number("delta_d", cfg.delta_d);
  cfg.propagation.z = number("Z", cfg.propagation.z);
  cfg.propagation.steps = integer("steps", cfg.propagation.steps);
  cfg.sweep.delta_d_min = number("delta_d_min", cfg.sweep.delta_d_min);
  cfg.sweep.delta_d_max = number("delta_d_max", cfg.sweep.delta_d_max);
  cfg.sweep.points = integer("points", cfg.sweep.points);
  if (auto v = take("phi_values")) cfg.sweep.phi_values = parse_angle_list(*v, "phi_values");
  if (auto v = take("channel")) {
    if (*v == "s") cfg.sweep.channel = Channel::s;
    else if (*v == "d") cfg.sweep.channel = Channel::d;
    else if (*v == "both") cfg.sweep.channel = Channel::both;
    else throw ValidationError("channel", "must be one of s, d, both");
  }
  if (auto v = take("inset_td")) {
    if (*v == "true") cfg.inset_td = true;
    else if (*v == "false") cfg.inset_td = false;
    else throw ValidationError("inset_td", "must be true or false");
  }

  if (!entries.empty()) {
    throw ValidationError(entries.begin()->first, "unknown key (line " +
                                                      std::to_string(entries.begin()->second.second) + ")");
  }
  cfg.validate();
  return cfg;
}

inline SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const SimulationConfig& c) {
  using detail::format_double;
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  out += "# deltamix configuration\n";
  out += "# units: rates, Rabi frequencies, detunings and Z in gamma12; phases in radians\n";
  put("gamma12", "1");
  put("gamma13", format_double(c.rates.gamma13()));
  put("gamma23", format_double(c.rates.gamma23()));
  put("gphi2", format_double(c.rates.gphi2()));
  put("gphi3", format_double(c.rates.gphi3()));
  put("control_magnitude", format_double(c.control.magnitude));
  put("control_phase", format_double(c.control.phase));
  put("input_d_magnitude", format_double(c.input_d.magnitude));
  put("input_d_phase", format_double(c.input_d.phase));
  put("input_s_magnitude", format_double(c.input_s.magnitude));
  put("input_s_phase", format_double(c.input_s.phase));
  put("delta_d", format_double(c.delta_d));
  put("Z", format_double(c.propagation.z));
  put("steps", std::to_string(c.propagation.steps));
  put("delta_d_min", format_double(c.sweep.delta_d_min));
  put("delta_d_max", format_double(c.sweep.delta_d_max));
  put("points", std::to_string(c.sweep.points));
  std::string phis;
  for (std::size_t i = 0; i < c.sweep.phi_values.size(); ++i) {
    if (i) phis += ", ";
    phis += format_double(c.sweep.phi_values[i]);
  }
  put("phi_values", phis);
  put("channel", to_string(c.sweep.channel));
  put("inset_td", c.inset_td ? "true" : "false");
  return out;
}

}  // namespace deltamix
