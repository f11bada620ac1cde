#pragma once

// Radar receive-side quantities: the interference-plus-noise covariance seen
// by the pulse-stacked receive filter, the matched filter that maximizes
// output SINR for a fixed waveform/precoder pair, and the waveform-domain
// quadratic forms consumed by the waveform optimizer.

#include "crc/scenario.hpp"

namespace crc {

/// Covariance of downlink leakage + signal-dependent clutter + noise at the
/// radar array, for precoder V (nt x d) and stacked waveform s (mt*k_pulse).
/// Dimensions (mr*k_pulse)^2.
MatC interference_covariance(const ScenarioInstance& inst, const MatC& v, const VecC& s);

/// Second-moment matrix of the stacked target returns (direct + patches)
/// for waveform s. Rank at most 1 + #patches.
MatC target_return_cov(const ScenarioInstance& inst, const VecC& s);

struct ReceiveFilter {
  VecC w;             // unit norm, largest-magnitude entry rotated real >= 0
  double sinr = 0.0;  // SINR attained by w
};

/// SINR-optimal receive filter for fixed (V, s): the dominant generalized
/// eigenvector of (target_return_cov, interference_covariance), computed via
/// Cholesky whitening and a Hermitian eigensolve.
ReceiveFilter update_receive_filter(const ScenarioInstance& inst, const MatC& v, const VecC& s);

/// Radar output SINR for an arbitrary filter w:
/// sum_j var_j |w^H H_j s|^2 / (w^H R(V, s) w).
double radar_sinr(const ScenarioInstance& inst, const VecC& w, const VecC& s, const MatC& v);

// Waveform-domain recasting of the SINR for a fixed filter: quadratic forms
// in s plus the filtered downlink-interference power.
struct RadarDesignMatrices {
  MatC psi_tilde;     // target quadratic numerator matrix (mt*k_pulse)^2
  MatC r_tilde;       // clutter quadratic denominator matrix (mt*k_pulse)^2
  double r_of_v = 0;  // filtered downlink leakage + noise power (waveform-independent)
  MatC w_outer;       // w w^H, kept for per-sample block access
  int mr = 0;

  /// (i, j) sample block of w w^H, each mr x mr.
  MatC w_block(int i, int j) const;
};

RadarDesignMatrices design_matrices(const ScenarioInstance& inst, const VecC& w, const MatC& v);

/// SINR evaluated from the waveform-domain forms:
/// s^H psi_tilde s / (s^H r_tilde s + r_of_v). Equals radar_sinr for the
/// same (w, s, V).
double radar_sinr_waveform_domain(const RadarDesignMatrices& dm, const VecC& s);

/// Transmit-receive beampattern in dB over an angle grid (radians), floored
/// at -100 dB: 10 log10(|w^H (I (x) b_r b_t^T) s|^2 / (mt mr |w|^2 |s|^2)).
VecR beampattern_db(const ScenarioInstance& inst, const VecC& w, const VecC& s,
                    const VecR& theta_grid_rad);

}  // namespace crc
