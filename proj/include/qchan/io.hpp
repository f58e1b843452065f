#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qchan/capacity.hpp"
#include "qchan/protocols.hpp"

namespace qchan {

using ordered_json = nlohmann::ordered_json;

/// Shortest representation with up to 17 significant digits; round-trips
/// doubles exactly.
inline std::string format_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

/// CSV with header `mode,m,power,hbar,rate`, one row per point, rows ordered
/// by (mode, m, power). Byte-identical for identical inputs.
inline void emit_capacity_csv(std::span<const CapacityPoint> points, std::ostream& sink) {
  std::vector<CapacityPoint> ordered(points.begin(), points.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CapacityPoint& a, const CapacityPoint& b) {
                     if (a.mode != b.mode) return a.mode < b.mode;
                     if (a.m != b.m) return a.m < b.m;
                     return a.power < b.power;
                   });
  sink << "mode,m,power,hbar,rate\n";
  for (const CapacityPoint& p : ordered) {
    sink << to_string(p.mode) << ',' << p.m << ',' << format_float(p.power) << ','
         << format_float(p.hbar) << ',' << format_float(p.rate) << '\n';
  }
  if (!sink) throw std::runtime_error("emit_capacity_csv: write failure");
}

inline ordered_json to_json(const TransferReport& report) {
  return ordered_json{{"latency", report.latency},
                      {"mean_energy", report.mean_energy},
                      {"power", report.power},
                      {"midpoint_residual", report.midpoint_residual},
                      {"final_fidelity", report.final_fidelity},
                      {"bits_delivered", report.bits_delivered}};
}

inline ordered_json to_json(const ChainReport& report) {
  return ordered_json{{"sites", report.sites},
                      {"hop_count", report.hop_count},
                      {"latency", report.latency},
                      {"per_hop_energy", report.per_hop_energy},
                      {"average_power", report.average_power},
                      {"pipelined_rate", report.pipelined_rate},
                      {"final_fidelity", report.final_fidelity}};
}

inline ordered_json to_json(const SpinWaveCurve& curve) {
  return ordered_json{{"coupling", curve.coupling},
                      {"times", curve.times},
                      {"fidelities", curve.fidelities},
                      {"peak_time", curve.peak_time},
                      {"peak_fidelity", curve.peak_fidelity},
                      {"max_norm_error", curve.max_norm_error},
                      {"max_excitation_drift", curve.max_excitation_drift}};
}

inline ordered_json to_json(const DecoherenceReport& report) {
  return ordered_json{{"trials", report.trials},
                      {"corrupted_count", report.corrupted_count},
                      {"mean_attempts", report.mean_attempts},
                      {"attempt_histogram", report.attempt_histogram},
                      {"seed", report.seed}};
}

/// Single report object with fixed key order: schema_version, command,
/// config, results.
inline ordered_json report_envelope(std::string_view command, ordered_json config,
                                    ordered_json results) {
  ordered_json envelope;
  envelope["schema_version"] = "1";
  envelope["command"] = std::string(command);
  envelope["config"] = std::move(config);
  envelope["results"] = std::move(results);
  return envelope;
}

inline void emit_report_json(const ordered_json& envelope, std::ostream& sink) {
  sink << envelope.dump(2) << '\n';
  if (!sink) throw std::runtime_error("emit_report_json: write failure");
}

}  // namespace qchan
