#pragma once

#include <algorithm>
#include <array>
#include <exception>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "deltamix/config.hpp"
#include "deltamix/error.hpp"
#include "deltamix/propagation.hpp"

namespace deltamix {

struct SweepRow {
  double delta_d = 0.0;
  double phi = 0.0;
  double z = 0.0;
  ChannelIntensities s;
  ChannelIntensities d;
  /// Largest relative deviation between the closed-form totals and the
  /// matrix-exponential totals over both channels.
  double oracle_dev = 0.0;
};

/// One row from an entrance configuration. phi is the relative phase recorded
/// in the row.
inline SweepRow compute_row(const DriveConfiguration& point, const EffectiveLinewidths& lw,
                            double z, double phi) {
  const InterferenceRecord rec = interference_decomposition(point, lw, z);
  const ClosedFormOutputs closed = closed_form_outputs(point, lw, z);

  SweepRow row;
  row.delta_d = point.delta_d;
  row.phi = phi;
  row.z = z;
  row.s = rec.s;
  row.d = rec.d;
  row.oracle_dev = std::max(relative_deviation(closed.s_total(), rec.s.total_ratio),
                            relative_deviation(closed.d_total(), rec.d.total_ratio));
  return row;
}

inline SweepRow compute_row(const SimulationConfig& config, double delta, double phi) {
  return compute_row(config.sweep_point(delta, phi), effective_linewidths(config.rates),
                     config.z(), phi);
}

/// Grid points (indices into the row list) where both channels are amplified.
inline std::vector<std::size_t> exclusivity_violations(const std::vector<SweepRow>& rows) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].s.intensity_total > 1.0 && rows[i].d.intensity_total > 1.0) out.push_back(i);
  }
  return out;
}

/// Evaluates the whole grid: rows ordered by ascending detuning, then by the
/// order of phi_values. Rows are independent; with threads > 1 they are split
/// across workers and written back by index, so the output does not depend on
/// scheduling.
inline std::vector<SweepRow> run_sweep(const SimulationConfig& config, unsigned threads = 1) {
  config.validate();
  const auto& sweep = config.sweep;
  const std::size_t n_phi = sweep.phi_values.size();
  const std::size_t total = static_cast<std::size_t>(sweep.points) * n_phi;
  std::vector<SweepRow> rows(total);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < total; k += stride) {
      const int i = static_cast<int>(k / n_phi);
      rows[k] = compute_row(config, sweep.delta_at(i), sweep.phi_values[k % n_phi]);
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    work(0, 1);
    return rows;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline constexpr std::array<const char*, 16> kCsvColumns{
    "delta_d", "phi",      "Z",        "re_s_tot", "im_s_tot", "I_s_tot",
    "I_s_inc", "I_s_gen",  "I_s_interf", "re_d_tot", "im_d_tot", "I_d_tot",
    "I_d_inc", "I_d_gen",  "I_d_interf", "oracle_dev"};

inline std::array<double, 16> row_values(const SweepRow& r) {
  return {r.delta_d,
          r.phi,
          r.z,
          r.s.total_ratio.real(),
          r.s.total_ratio.imag(),
          r.s.intensity_total,
          r.s.intensity_incident,
          r.s.intensity_generated,
          r.s.interference_term,
          r.d.total_ratio.real(),
          r.d.total_ratio.imag(),
          r.d.intensity_total,
          r.d.intensity_incident,
          r.d.intensity_generated,
          r.d.interference_term,
          r.oracle_dev};
}

/// CSV text: header plus one line per row, 17 significant digits, LF endings.
inline std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  out += '\n';
  char buf[32];
  for (const auto& r : rows) {
    const auto values = row_values(r);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (rows.empty()) throw ContractError("emit_csv: no rows to write");
  const std::string text = format_csv(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

/// Reads the numeric table back (header checked, values in column order).
inline std::vector<std::array<double, 16>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::string expected;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) expected += ',';
    expected += kCsvColumns[i];
  }
  if (line != expected) throw IoError("unexpected CSV header in '" + path + "'");

  std::vector<std::array<double, 16>> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 16> values{};
    std::istringstream fields(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(fields, cell, ',')) {
      if (i >= values.size()) throw IoError("too many CSV fields");
      values[i++] = std::stod(cell);
    }
    if (i != values.size()) throw IoError("too few CSV fields");
    table.push_back(values);
  }
  return table;
}

}  // namespace deltamix
