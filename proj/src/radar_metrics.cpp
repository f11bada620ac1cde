#include "crc/radar_metrics.hpp"

#include <stdexcept>

namespace crc {
namespace {

void check_shapes(const ScenarioInstance& inst, const MatC* v, const VecC* s, const VecC* w) {
  if (!inst.finalized()) throw std::invalid_argument("scenario instance not finalized");
  if (v && (v->rows() != inst.dims.nt || v->cols() != inst.dims.d))
    throw std::invalid_argument("precoder must be nt x d");
  if (s && s->size() != inst.dims.radar_tx_len())
    throw std::invalid_argument("waveform must have length mt * k_pulse");
  if (w && w->size() != inst.dims.radar_rx_len())
    throw std::invalid_argument("filter must have length mr * k_pulse");
}

}  // namespace

MatC interference_covariance(const ScenarioInstance& inst, const MatC& v, const VecC& s) {
  check_shapes(inst, &v, &s, nullptr);
  const int n = inst.dims.radar_rx_len();
  const int mr = inst.dims.mr;
  MatC r = inst.sigma_r_sq * MatC::Identity(n, n);
  // Downlink leakage is block-diagonal over pulse samples.
  const MatC vv = v * v.adjoint();
  for (std::size_t g = 0; g < inst.comm_to_radar.size(); ++g) {
    const MatC block =
        inst.comm_to_radar[g].var * inst.t_comm_to_radar[g] * vv * inst.t_comm_to_radar[g].adjoint();
    for (int k = 0; k < inst.dims.k_pulse; ++k)
      r.block(k * mr, k * mr, mr, mr) += block;
  }
  for (std::size_t q = 0; q < inst.clutter.size(); ++q) {
    const VecC u = inst.h_clutter[q] * s;
    r.noalias() += inst.clutter[q].var * u * u.adjoint();
  }
  return r;
}

MatC target_return_cov(const ScenarioInstance& inst, const VecC& s) {
  check_shapes(inst, nullptr, &s, nullptr);
  const int n = inst.dims.radar_rx_len();
  MatC psi = MatC::Zero(n, n);
  const VecC u0 = inst.h_target[0] * s;
  psi.noalias() += inst.target.var * u0 * u0.adjoint();
  for (std::size_t j = 0; j < inst.patches.size(); ++j) {
    const VecC u = inst.h_target[j + 1] * s;
    psi.noalias() += inst.patches[j].var * u * u.adjoint();
  }
  return psi;
}

ReceiveFilter update_receive_filter(const ScenarioInstance& inst, const MatC& v, const VecC& s) {
  check_shapes(inst, &v, &s, nullptr);
  const int n = inst.dims.radar_rx_len();
  const int terms = 1 + static_cast<int>(inst.patches.size());

  // Whiten against the interference covariance, then the dominant direction
  // of the whitened target matrix is found from its thin factor.
  Eigen::LLT<MatC> llt(interference_covariance(inst, v, s));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("update_receive_filter: covariance not positive definite");

  MatC u(n, terms);
  u.col(0) = std::sqrt(inst.target.var) * (inst.h_target[0] * s);
  for (int j = 1; j < terms; ++j)
    u.col(j) = std::sqrt(inst.patches[j - 1].var) * (inst.h_target[j] * s);
  const MatC b = llt.matrixL().solve(u);  // n x terms

  Eigen::SelfAdjointEigenSolver<MatC> eig(b.adjoint() * b);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("update_receive_filter: eigensolve failed");
  const int top = terms - 1;  // eigenvalues ascend
  const double lam = std::max(eig.eigenvalues()(top), 0.0);
  VecC w;
  if (lam > 0.0) {
    const VecC dir = b * eig.eigenvectors().col(top);
    w = llt.matrixL().adjoint().solve(dir);
  } else {
    w = VecC::Zero(n);  // no target energy; fall back to an arbitrary direction
    w(0) = 1.0;
  }
  w = phase_align(w / w.norm());
  return {w, lam};
}

double radar_sinr(const ScenarioInstance& inst, const VecC& w, const VecC& s, const MatC& v) {
  check_shapes(inst, &v, &s, &w);
  double num = std::norm(w.dot(inst.h_target[0] * s)) * inst.target.var;
  for (std::size_t j = 0; j < inst.patches.size(); ++j)
    num += std::norm(w.dot(inst.h_target[j + 1] * s)) * inst.patches[j].var;
  const double den = std::real(w.dot(interference_covariance(inst, v, s) * w));
  return num / den;
}

MatC RadarDesignMatrices::w_block(int i, int j) const {
  return w_outer.block(i * mr, j * mr, mr, mr);
}

RadarDesignMatrices design_matrices(const ScenarioInstance& inst, const VecC& w, const MatC& v) {
  check_shapes(inst, &v, nullptr, &w);
  const int m = inst.dims.radar_tx_len();
  RadarDesignMatrices dm;
  dm.mr = inst.dims.mr;
  dm.w_outer = w * w.adjoint();

  dm.psi_tilde = MatC::Zero(m, m);
  {
    const VecC u0 = inst.h_target[0].adjoint() * w;
    dm.psi_tilde.noalias() += inst.target.var * u0 * u0.adjoint();
    for (std::size_t j = 0; j < inst.patches.size(); ++j) {
      const VecC u = inst.h_target[j + 1].adjoint() * w;
      dm.psi_tilde.noalias() += inst.patches[j].var * u * u.adjoint();
    }
  }

  dm.r_tilde = MatC::Zero(m, m);
  for (std::size_t q = 0; q < inst.clutter.size(); ++q) {
    const VecC u = inst.h_clutter[q].adjoint() * w;
    dm.r_tilde.noalias() += inst.clutter[q].var * u * u.adjoint();
  }

  dm.r_of_v = inst.sigma_r_sq * w.squaredNorm();
  const MatC vv = v * v.adjoint();
  for (std::size_t g = 0; g < inst.comm_to_radar.size(); ++g) {
    double acc = 0.0;
    for (int k = 0; k < inst.dims.k_pulse; ++k) {
      const VecC wk = w.segment(k * inst.dims.mr, inst.dims.mr);
      const VecC tw = inst.t_comm_to_radar[g].adjoint() * wk;
      acc += std::real(tw.dot(vv * tw));
    }
    dm.r_of_v += inst.comm_to_radar[g].var * acc;
  }
  return dm;
}

double radar_sinr_waveform_domain(const RadarDesignMatrices& dm, const VecC& s) {
  const double num = std::real(s.dot(dm.psi_tilde * s));
  const double den = std::real(s.dot(dm.r_tilde * s)) + dm.r_of_v;
  return num / den;
}

VecR beampattern_db(const ScenarioInstance& inst, const VecC& w, const VecC& s,
                    const VecR& theta_grid_rad) {
  check_shapes(inst, nullptr, &s, &w);
  const int mt = inst.dims.mt;
  const int mr = inst.dims.mr;
  const double denom = mt * mr * w.squaredNorm() * s.squaredNorm();
  VecR out(theta_grid_rad.size());
  if (denom <= 0.0) {  // degenerate filter or waveform: no radiated response
    out.setConstant(-100.0);
    return out;
  }
  for (Eigen::Index t = 0; t < theta_grid_rad.size(); ++t) {
    const VecC br = steering_vector(mr, theta_grid_rad(t));
    const VecC bt = steering_vector(mt, theta_grid_rad(t));
    cplx acc = 0.0;
    for (int k = 0; k < inst.dims.k_pulse; ++k) {
      const cplx rx = w.segment(k * mr, mr).dot(br);            // w_k^H b_r
      const cplx tx = bt.transpose() * s.segment(k * mt, mt);   // b_t^T s_k
      acc += rx * tx;
    }
    const double p = std::norm(acc) / denom;
    out(t) = std::max(10.0 * std::log10(std::max(p, 1e-300)), -100.0);
  }
  return out;
}

}  // namespace crc
