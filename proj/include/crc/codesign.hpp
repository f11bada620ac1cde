#pragma once

#include <string>
#include <vector>

#include "crc/precoder_design.hpp"
#include "crc/waveform_design.hpp"

namespace crc {

// Which blocks stay at their initial value during the alternating design.
struct CodesignBaseline {
  bool fixed_v = false;
  bool fixed_s = false;
  bool fixed_w = false;
};

// Parse a comma-separated flag list: "none", "fixed_v", "fixed_s", "fixed_w",
// e.g. "fixed_v,fixed_w". Throws on unknown flags or on fixing both radar
// blocks (fixed_s plus fixed_w leaves the radar side entirely frozen).
CodesignBaseline parse_baseline(const std::string& text);
std::string baseline_to_string(const CodesignBaseline& b);

struct CodesignParams {
  WaveformMode mode = WaveformMode::similarity;
  double mi_min = 7.0;
  double similarity = 0.7;
  double papr_bound = 3.0;
  double outer_tol = 1e-3;  // stop when the logged SINR (dB) moves less than this
  int outer_max_iter = 30;
  CodesignBaseline baseline;
  PrecoderDesignParams precoder;
  WaveformDesignParams waveform;
};

struct CodesignHistoryRow {
  int outer_iter = 0;
  double sinr_db = 0.0;
  double rate_nats = 0.0;
};

struct CodesignResult {
  MatC v;
  VecC s;
  ReceiveFilter filter;
  double sinr = 0.0;  // linear scale
  double rate_nats = 0.0;
  double leakage = 0.0;  // downlink power into the radar filter at exit
  int outer_iterations = 0;
  bool converged = false;
  bool stalled = false;
  bool precoder_feasible = true;
  bool waveform_feasible = true;
  std::vector<CodesignHistoryRow> history;
  std::vector<PrecoderTraceRow> last_precoder_trace;
  std::vector<WaveformTraceRow> last_waveform_trace;
};

// Uniform full-power precoder: the first d antennas carry one stream each.
MatC initial_precoder(const SystemDims& dims, double p_b);

// Alternating block design: precoder, then waveform, then receive filter,
// repeated until the SINR settles.
CodesignResult run_codesign(const ScenarioInstance& inst, const CodesignParams& params = {});

}  // namespace crc
