#include "crc/comm_metrics.hpp"

#include <stdexcept>

namespace crc {
namespace {

void check_precoder(const ScenarioInstance& inst, const MatC& v) {
  if (v.rows() != inst.dims.nt || v.cols() != inst.dims.d)
    throw std::invalid_argument("precoder must be nt x d");
}

void check_waveform(const ScenarioInstance& inst, const VecC& s) {
  if (s.size() != inst.dims.radar_tx_len())
    throw std::invalid_argument("waveform must have length mt * k_pulse");
}

void check_stacked_precoder(const ScenarioInstance& inst, const VecC& v) {
  if (v.size() != inst.dims.precoder_len())
    throw std::invalid_argument("stacked precoder must have length nt * d");
}

// (I_{nr} (x) v^*): column q carries conj(v) in its q-th length-|v| segment.
MatC eye_kron_conj(const VecC& v, int nr) {
  const int len = static_cast<int>(v.size());
  MatC m = MatC::Zero(static_cast<Eigen::Index>(nr) * len, nr);
  for (int q = 0; q < nr; ++q) m.block(q * len, q, len, 1) = v.conjugate();
  return m;
}

}  // namespace

MatC radar_interference_cov_at_k(const ScenarioInstance& inst, const VecC& s, int k) {
  check_waveform(inst, s);
  if (k < 0 || k >= inst.dims.k_pri)
    throw std::invalid_argument("radar_interference_cov_at_k: sample index out of range");
  const int nr = inst.dims.nr;
  MatC r = inst.sigma_c_sq * MatC::Identity(nr, nr);
  for (std::size_t i = 0; i < inst.radar_to_comm.size(); ++i) {
    const int blk = pulse_sample_index(inst.radar_to_comm[i].delay, k, inst.dims);
    if (blk < 0) continue;
    const cplx gain =
        inst.r2c_tx_steer[i].transpose() * s.segment(blk * inst.dims.mt, inst.dims.mt);
    r.noalias() += inst.radar_to_comm[i].var * std::norm(gain) * inst.r2c_rx_steer[i] *
                   inst.r2c_rx_steer[i].adjoint();
  }
  return r;
}

MatC downlink_signal_cov(const ScenarioInstance& inst, const MatC& v) {
  check_precoder(inst, v);
  const int nr = inst.dims.nr;
  MatC cov = MatC::Zero(nr, nr);
  for (std::size_t l = 0; l < inst.comm_paths.size(); ++l) {
    const MatC gv = inst.g_comm[l] * v;
    cov.noalias() += inst.comm_paths[l].var * gv * gv.adjoint();
  }
  return cov;
}

double avg_rate(const ScenarioInstance& inst, const MatC& v, const VecC& s) {
  const MatC sig = downlink_signal_cov(inst, v);
  double acc = 0.0;
  for (int k = 0; k < inst.dims.k_pri; ++k) {
    const MatC rc = radar_interference_cov_at_k(inst, s, k);
    acc += logdet_pd(rc + sig) - logdet_pd(rc);
  }
  return acc / inst.dims.k_pri;
}

MatC delta_matrix(const ScenarioInstance& inst) {
  if (!inst.finalized()) throw std::invalid_argument("scenario instance not finalized");
  const int nr = inst.dims.nr;
  const int blk = inst.dims.nt * inst.dims.d;
  MatC delta = MatC::Zero(static_cast<Eigen::Index>(nr) * blk, static_cast<Eigen::Index>(nr) * blk);
  for (std::size_t l = 0; l < inst.comm_paths.size(); ++l) {
    const VecC ar = steering_vector(nr, inst.comm_paths[l].doa);
    const VecC at = steering_vector(inst.dims.nt, inst.comm_paths[l].dod);
    const MatC outer = at * at.adjoint();  // nt x nt
    for (int q1 = 0; q1 < nr; ++q1) {
      for (int q2 = 0; q2 < nr; ++q2) {
        const cplx scale = inst.comm_paths[l].var * ar(q1) * std::conj(ar(q2));
        for (int dd = 0; dd < inst.dims.d; ++dd)
          delta.block(q1 * blk + dd * inst.dims.nt, q2 * blk + dd * inst.dims.nt, inst.dims.nt,
                      inst.dims.nt) += scale * outer;
      }
    }
  }
  return delta;
}

CommGeometry CommGeometry::build(const ScenarioInstance& inst) {
  CommGeometry geo;
  geo.delta = delta_matrix(inst);
  geo.delta_sqrt = hermitian_sqrt(geo.delta);
  return geo;
}

MatC ek_matrix(const ScenarioInstance& inst, const VecC& v, const VecC& s, int k) {
  check_stacked_precoder(inst, v);
  const CommGeometry geo = CommGeometry::build(inst);
  const int nr = inst.dims.nr;
  const Eigen::Index n = geo.delta.rows();
  const MatC a = geo.delta_sqrt * eye_kron_conj(v, nr);  // n x nr
  MatC e(n + nr, n + nr);
  e.topLeftCorner(n, n) = MatC::Identity(n, n);
  e.topRightCorner(n, nr) = a;
  e.bottomLeftCorner(nr, n) = a.adjoint();
  e.bottomRightCorner(nr, nr) = radar_interference_cov_at_k(inst, s, k) + a.adjoint() * a;
  return e;
}

double mi_via_lemma1(const ScenarioInstance& inst, const VecC& v, const VecC& s) {
  check_stacked_precoder(inst, v);
  const CommGeometry geo = CommGeometry::build(inst);
  const int nr = inst.dims.nr;
  const Eigen::Index n = geo.delta.rows();
  const MatC kron_v = eye_kron_conj(v, nr);
  const MatC a = geo.delta_sqrt * kron_v;

  double acc = 0.0;
  for (int k = 0; k < inst.dims.k_pri; ++k) {
    MatC e(n + nr, n + nr);
    e.topLeftCorner(n, n) = MatC::Identity(n, n);
    e.topRightCorner(n, nr) = a;
    e.bottomLeftCorner(nr, n) = a.adjoint();
    e.bottomRightCorner(nr, nr) = radar_interference_cov_at_k(inst, s, k) + a.adjoint() * a;

    Eigen::LLT<MatC> llt(e);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mi_via_lemma1: lifted matrix not positive definite");
    MatC rhs = MatC::Zero(n + nr, n);
    rhs.topRows(n) = MatC::Identity(n, n);
    const MatC einv_cols = llt.solve(rhs);
    acc += logdet_pd(hermitianize(einv_cols.topRows(n)));
  }
  return acc / inst.dims.k_pri;
}

double PrecoderSurrogate::value(const VecC& v) const {
  const cplx lin = gamma12_bar * v;
  const double quad = std::real(v.dot(gamma22_bar * v));
  return rate_anchor + 2.0 * std::real(lin) - quad;
}

PrecoderSurrogate precoder_surrogate(const ScenarioInstance& inst, const VecC& v_bar,
                                     const VecC& s, const CommGeometry* geo) {
  check_stacked_precoder(inst, v_bar);
  check_waveform(inst, s);
  CommGeometry local;
  if (!geo) {
    local = CommGeometry::build(inst);
    geo = &local;
  }
  const int nr = inst.dims.nr;
  const int blk = inst.dims.nt * inst.dims.d;

  // Block-closed forms of the lifted-gradient pieces: with
  // b = (I (x) v^T) Delta (I (x) v^*) and m = cov_k + b,
  //   gamma12_k = a inv(cov_k),  gamma22_k = inv(m) - inv(cov_k),
  // where a = sqrt(Delta) (I (x) v^*). Averages over k below.
  const MatC a = geo->delta_sqrt * eye_kron_conj(v_bar, nr);  // (nr*blk) x nr
  const MatC b = hermitianize(a.adjoint() * a);               // nr x nr

  MatC rinv_mean = MatC::Zero(nr, nr);
  MatC gamma22_mean = MatC::Zero(nr, nr);
  double anchor = 0.0;
  const MatC eye = MatC::Identity(nr, nr);
  for (int k = 0; k < inst.dims.k_pri; ++k) {
    const MatC rc = radar_interference_cov_at_k(inst, s, k);
    Eigen::LLT<MatC> llt_rc(rc);
    Eigen::LLT<MatC> llt_m(rc + b);
    if (llt_rc.info() != Eigen::Success || llt_m.info() != Eigen::Success)
      throw std::runtime_error("precoder_surrogate: covariance not positive definite");
    const MatC rc_inv = llt_rc.solve(eye);
    const MatC m_inv = llt_m.solve(eye);
    rinv_mean += rc_inv;
    gamma22_mean += m_inv - rc_inv;
    const double mi_k = 2.0 * llt_m.matrixL().toDenseMatrix().diagonal().real().array().log().sum() -
                        2.0 * llt_rc.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
    anchor += mi_k - std::real((rc_inv * b).trace()) - std::real((m_inv * b).trace());
  }
  rinv_mean /= inst.dims.k_pri;
  gamma22_mean /= inst.dims.k_pri;
  anchor /= inst.dims.k_pri;

  PrecoderSurrogate out;
  out.rate_anchor = anchor;

  const MatC m12 = geo->delta_sqrt * (a * rinv_mean);  // (nr*blk) x nr
  out.gamma12_bar = RowVecC::Zero(blk);
  for (int q = 0; q < nr; ++q)
    out.gamma12_bar += m12.block(q * blk, q, blk, 1).transpose();

  out.gamma22_bar = MatC::Zero(blk, blk);
  for (int q1 = 0; q1 < nr; ++q1)
    for (int q2 = 0; q2 < nr; ++q2)
      out.gamma22_bar -=
          gamma22_mean(q1, q2) * geo->delta.block(q2 * blk, q1 * blk, blk, blk).transpose();
  out.gamma22_bar = hermitianize(out.gamma22_bar);
  return out;
}

double WaveformSurrogate::value(const VecC& s) const {
  return rate_anchor - std::real(s.dot(gamma_hat * s));
}

WaveformSurrogate waveform_surrogate(const ScenarioInstance& inst, const VecC& s_bar,
                                     const MatC& v) {
  check_waveform(inst, s_bar);
  check_precoder(inst, v);
  const int nr = inst.dims.nr;
  const int mt = inst.dims.mt;
  const MatC sig = downlink_signal_cov(inst, v);
  const MatC eye = MatC::Identity(nr, nr);

  WaveformSurrogate out;
  out.gamma_hat = MatC::Zero(inst.dims.radar_tx_len(), inst.dims.radar_tx_len());
  double rate = 0.0;
  for (int k = 0; k < inst.dims.k_pri; ++k) {
    const MatC rc = radar_interference_cov_at_k(inst, s_bar, k);
    Eigen::LLT<MatC> llt_rc(rc);
    Eigen::LLT<MatC> llt_tot(rc + sig);
    if (llt_rc.info() != Eigen::Success || llt_tot.info() != Eigen::Success)
      throw std::runtime_error("waveform_surrogate: covariance not positive definite");
    const MatC diff = llt_rc.solve(eye) - llt_tot.solve(eye);  // PSD sensitivity of the rate
    rate += 2.0 * llt_tot.matrixL().toDenseMatrix().diagonal().real().array().log().sum() -
            2.0 * llt_rc.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
    for (std::size_t i = 0; i < inst.radar_to_comm.size(); ++i) {
      const int blk = pulse_sample_index(inst.radar_to_comm[i].delay, k, inst.dims);
      if (blk < 0) continue;
      const double coeff =
          inst.radar_to_comm[i].var *
          std::real(inst.r2c_rx_steer[i].dot(diff * inst.r2c_rx_steer[i]));
      out.gamma_hat.block(blk * mt, blk * mt, mt, mt) +=
          coeff * inst.r2c_tx_steer[i].conjugate() * inst.r2c_tx_steer[i].transpose();
    }
  }
  out.gamma_hat = hermitianize(out.gamma_hat / inst.dims.k_pri);
  rate /= inst.dims.k_pri;
  out.rate_anchor = rate + std::real(s_bar.dot(out.gamma_hat * s_bar));
  return out;
}

MatC pi_matrix(const ScenarioInstance& inst, const VecC& w) {
  if (!inst.finalized()) throw std::invalid_argument("scenario instance not finalized");
  if (w.size() != inst.dims.radar_rx_len())
    throw std::invalid_argument("filter must have length mr * k_pulse");
  const int mr = inst.dims.mr;
  MatC wsum = MatC::Zero(mr, mr);
  for (int k = 0; k < inst.dims.k_pulse; ++k) {
    const VecC wk = w.segment(k * mr, mr);
    wsum.noalias() += wk * wk.adjoint();
  }
  MatC inner = MatC::Zero(inst.dims.nt, inst.dims.nt);
  for (std::size_t g = 0; g < inst.comm_to_radar.size(); ++g)
    inner.noalias() += inst.comm_to_radar[g].var * inst.t_comm_to_radar[g].adjoint() * wsum *
                       inst.t_comm_to_radar[g];
  inner = hermitianize(inner);
  MatC pi = MatC::Zero(inst.dims.precoder_len(), inst.dims.precoder_len());
  for (int dd = 0; dd < inst.dims.d; ++dd)
    pi.block(dd * inst.dims.nt, dd * inst.dims.nt, inst.dims.nt, inst.dims.nt) = inner;
  return pi;
}

}  // namespace crc
