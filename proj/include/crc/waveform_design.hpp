#pragma once

#include <vector>

#include "crc/comm_metrics.hpp"
#include "crc/radar_metrics.hpp"
#include "crc/scenario.hpp"
#include "crc/sdp.hpp"

namespace crc {

enum class WaveformMode { similarity, papr };

struct WaveformTraceRow {
  int iter = 0;
  double sinr_db = 0.0;
  double rate_nats = 0.0;
  int rank_before_reduction = 0;
  double papr = 0.0;
};

struct WaveformDesignParams {
  WaveformMode mode = WaveformMode::similarity;
  double similarity = 0.7;  // fraction of the power budget the deviation may use
  double papr_bound = 3.0;  // peak-to-average power ratio cap per transmit sample
  double mi_min = 7.0;      // average-rate floor in nats
  double sca_tol = 1e-3;    // stop when the logged SINR (dB) moves less than this
  int sca_max_iter = 50;
  SdpParams sdp;
  double rank_rel_tol = 1e-6;
};

struct WaveformDesignResult {
  VecC s;
  double sinr = 0.0;  // linear scale
  double rate_nats = 0.0;
  int iterations = 0;
  bool feasible = true;
  std::vector<WaveformTraceRow> trace;
};

// Chirp reference: unit-modulus linear-FM pulse train across transmitters,
// scaled so its total energy equals p_r.
VecC reference_waveform_lfm(const SystemDims& dims, double p_r);

// Peak-to-average power ratio of the stacked transmit samples.
double papr_of(const VecC& s);

// Maximize the radar output SINR over the waveform subject to the energy
// budget, the average-rate floor, and either a similarity or a PAPR shaping
// constraint, by successive convex approximation over lifted covariances.
WaveformDesignResult design_waveform(const ScenarioInstance& inst, const ReceiveFilter& filter,
                                     const MatC& v, const VecC& s_init, const VecC& s_ref,
                                     const WaveformDesignParams& params = {});

}  // namespace crc
