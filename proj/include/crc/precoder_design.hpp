#pragma once

#include <vector>

#include "crc/admm.hpp"
#include "crc/comm_metrics.hpp"
#include "crc/radar_metrics.hpp"
#include "crc/scenario.hpp"

namespace crc {

struct PrecoderTraceRow {
  int iter = 0;
  double r_of_v = 0.0;  // filtered interference-plus-noise power at this step
  double rate_nats = 0.0;
  int admm_iters = 0;
};

struct PrecoderDesignParams {
  double mi_min = 7.0;   // average-rate floor in nats
  double sca_tol = 1e-3; // absolute objective-change stopping threshold
  int sca_max_iter = 50;
  int restoration_max_rounds = 20;
  AdmmParams admm;
};

struct PrecoderDesignResult {
  MatC v;                  // nt x d precoder
  double leakage = 0.0;    // objective value at exit
  double rate_nats = 0.0;
  int iterations = 0;
  bool feasible = true;    // rate floor was attainable from this start
  std::vector<PrecoderTraceRow> trace;
};

// Minimize the downlink leakage into the radar receive filter subject to the
// transmit power budget and the average-rate floor, by successive convex
// approximation with an ADMM inner solver.
PrecoderDesignResult design_precoder(const ScenarioInstance& inst, const ReceiveFilter& filter,
                                     const VecC& s, const MatC& v_init,
                                     const PrecoderDesignParams& params = {});

}  // namespace crc
