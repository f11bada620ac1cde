#pragma once

// Downlink-side quantities: per-sample radar interference covariance at the
// user, the interval-averaged mutual information of the link, a lifted-matrix
// route to the same rate, and the concave minorants of the rate in the
// precoder and in the radar waveform that the designers optimize against.

#include "crc/scenario.hpp"

namespace crc {

/// Radar leakage + noise covariance at the user for interval sample k
/// (nr x nr), for stacked waveform s.
MatC radar_interference_cov_at_k(const ScenarioInstance& inst, const VecC& s, int k);

/// Downlink signal covariance sum_l var_l G_l V V^H G_l^H (nr x nr).
MatC downlink_signal_cov(const ScenarioInstance& inst, const MatC& v);

/// Interval-averaged mutual information of the downlink in nats/symbol:
/// (1/k_pri) sum_k log det(I + downlink_signal_cov * inv(cov_at_k)).
double avg_rate(const ScenarioInstance& inst, const MatC& v, const VecC& s);

/// Second-moment matrix of the downlink paths lifted to the stacked-precoder
/// space (nr*nt*d square, Hermitian PSD). Satisfies
/// (I (x) v^T) Delta (I (x) v^*) == downlink_signal_cov for v = vec(V).
MatC delta_matrix(const ScenarioInstance& inst);

/// delta_matrix plus its PSD square root, computed once per scenario and
/// shared across surrogate builds.
struct CommGeometry {
  MatC delta;
  MatC delta_sqrt;
  static CommGeometry build(const ScenarioInstance& inst);
};

/// Lifted block matrix whose inverse's leading block reproduces the rate
/// integrand at sample k; dimension (nr*nt*d + nr)^2.
MatC ek_matrix(const ScenarioInstance& inst, const VecC& v, const VecC& s, int k);

/// Rate recomputed through the lifted route: the log-determinant of the
/// leading block of inv(ek_matrix), averaged over the interval. Agrees with
/// avg_rate to floating-point accuracy; kept as an independent cross-check.
double mi_via_lemma1(const ScenarioInstance& inst, const VecC& v, const VecC& s);

// Concave quadratic minorant of the rate in the stacked precoder v, anchored
// at v_bar: rate(v) >= rate_anchor + 2 Re(gamma12_bar v) - v^H gamma22_bar v,
// with equality at v_bar.
struct PrecoderSurrogate {
  MatC gamma22_bar;       // PSD quadratic coefficient, (nt*d)^2
  RowVecC gamma12_bar;    // linear coefficient, 1 x (nt*d)
  double rate_anchor = 0.0;  // constant term of the minorant

  /// Minorant value at v.
  double value(const VecC& v) const;
};

PrecoderSurrogate precoder_surrogate(const ScenarioInstance& inst, const VecC& v_bar,
                                     const VecC& s, const CommGeometry* geo = nullptr);

// Affine minorant of the rate in the waveform second moment, anchored at
// s_bar: rate(s) >= rate_anchor - s^H gamma_hat s, with equality at s_bar.
struct WaveformSurrogate {
  MatC gamma_hat;            // PSD penalty matrix, (mt*k_pulse)^2
  double rate_anchor = 0.0;  // rate(s_bar) + s_bar^H gamma_hat s_bar

  /// Minorant value at s.
  double value(const VecC& s) const;
};

WaveformSurrogate waveform_surrogate(const ScenarioInstance& inst, const VecC& s_bar,
                                     const MatC& v);

/// Quadratic form reproducing the filtered downlink-leakage power at the
/// radar: v^H pi_matrix v == r_of_v - sigma_r_sq ||w||^2 for v = vec(V).
/// Dimensions (nt*d)^2, Hermitian PSD.
MatC pi_matrix(const ScenarioInstance& inst, const VecC& w);

}  // namespace crc
