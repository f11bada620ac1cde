#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crc/codesign.hpp"
#include "crc/scenario.hpp"

namespace crc {

// One parameter sweep: a base scenario recipe and design setup, a parameter
// name with a value list, and a number of paired random trials per value
// (trial t uses seed base+t at every value, so curves are seed-matched).
struct SweepConfig {
  std::string name = "sweep";
  ScenarioConfig scenario;
  CodesignParams design;
  std::string parameter = "none";  // none | similarity | mi_min | papr_bound |
                                   // inr_r_db | patch_count | baseline
  std::vector<double> values;
  std::vector<std::string> baseline_values;  // used when parameter == "baseline"
  int trials = 10;
  std::uint64_t seed = 1;
};

SweepConfig parse_sweep_config(const std::string& json_text);
SweepConfig load_sweep_config(const std::string& path);

struct SweepPoint {
  int value_index = 0;
  double value = 0.0;
  std::string value_label;
  int trial = 0;
  std::uint64_t seed = 0;
  double sinr_db = 0.0;
  double rate_nats = 0.0;
  double leakage = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  bool precoder_feasible = true;
  bool waveform_feasible = true;
  // Constraint audit values of the final design.
  double power_used = 0.0;        // tr(V V^H)
  double waveform_energy = 0.0;   // ||s||^2
  double similarity_value = 0.0;  // s^H (I - s0 s0^H / P_R) s
  double papr = 0.0;
  double mi_min = 0.0;
  double elapsed_ms = 0.0;
};

struct SweepSummaryRow {
  double value = 0.0;
  std::string value_label;
  int trials = 0;
  double mean_sinr_db = 0.0;
  double mean_rate_nats = 0.0;
  double mean_outer_iterations = 0.0;
  bool all_converged = true;
  bool all_feasible = true;
};

/// Worker count: the CRC_THREADS environment variable when set, otherwise the
/// hardware concurrency (at least 1).
int resolve_thread_count();

/// Runs every (value, trial) cell of the sweep; output order is deterministic
/// regardless of the worker count.
std::vector<SweepPoint> run_sweep(const SweepConfig& cfg, int threads);

std::vector<SweepSummaryRow> summarize_sweep(const SweepConfig& cfg,
                                             const std::vector<SweepPoint>& points);

/// Number rendering used by every CSV writer: 12 significant digits.
std::string format_sig(double x);

void ensure_directory(const std::string& dir);

/// Writes <dir>/<name>.csv (per-trial rows) and <dir>/<name>_summary.csv
/// (per-value means).
void write_sweep_outputs(const std::string& dir, const SweepConfig& cfg,
                         const std::vector<SweepPoint>& points);

/// Writes <dir>/<name>.gp, a gnuplot script plotting the summary curve.
void write_sweep_gnuplot(const std::string& dir, const SweepConfig& cfg);

void write_history_csv(const std::string& path, const std::vector<CodesignHistoryRow>& rows);
void write_precoder_trace_csv(const std::string& path, const std::vector<PrecoderTraceRow>& rows);
void write_waveform_trace_csv(const std::string& path, const std::vector<WaveformTraceRow>& rows);

/// Transmit-receive pattern of the final (w, s) pair on a half-degree grid
/// over [-90, 90] degrees.
void write_beampattern_csv(const std::string& path, const ScenarioInstance& inst, const VecC& w,
                           const VecC& s);

/// Full design dump: metrics, flags, history, and the complex blocks as
/// [re, im] pairs.
void write_design_json(const std::string& path, const CodesignResult& result);

}  // namespace crc
