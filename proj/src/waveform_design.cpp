#include "crc/waveform_design.hpp"

#include <cmath>

#include "crc/admm.hpp"

namespace crc {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Rank-one extraction: principal eigenpair, deterministic phase, rescaled to
// the given total energy when requested (energy < 0 keeps the eigen weight).
VecC extract_rank_one(const MatC& s_mat, double energy) {
  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(s_mat));
  const Eigen::Index last = s_mat.rows() - 1;
  VecC s = eig.eigenvectors().col(last);
  const double lam = std::max(eig.eigenvalues()(last), 0.0);
  s *= std::sqrt(energy >= 0.0 ? energy : lam);
  return phase_align(s);
}

int spectrum_rank(const MatC& s_mat, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(s_mat), Eigen::EigenvaluesOnly);
  return numerical_rank(eig.eigenvalues().reverse(), rel_tol);
}

}  // namespace

VecC reference_waveform_lfm(const SystemDims& dims, double p_r) {
  const int mt = dims.mt;
  const int k = dims.k_pulse;
  MatC s0(mt, k);
  const double amp = std::sqrt(p_r / static_cast<double>(mt * k));
  for (int m = 0; m < mt; ++m)
    for (int kk = 0; kk < k; ++kk) {
      const double phase =
          2.0 * kPi * m * kk / static_cast<double>(mt) + kPi * kk * kk / static_cast<double>(mt);
      s0(m, kk) = amp * std::exp(cplx(0.0, phase));
    }
  return vec(s0);
}

double papr_of(const VecC& s) {
  const double total = s.squaredNorm();
  if (total <= 0.0) return 1.0;
  return s.cwiseAbs2().maxCoeff() * static_cast<double>(s.size()) / total;
}

WaveformDesignResult design_waveform(const ScenarioInstance& inst, const ReceiveFilter& filter,
                                     const MatC& v, const VecC& s_init, const VecC& s_ref,
                                     const WaveformDesignParams& params) {
  const auto& dims = inst.dims;
  const int n = dims.radar_tx_len();
  const double p_r = inst.p_r;
  const RadarDesignMatrices mats = design_matrices(inst, filter.w, v);
  const MatC eye = MatC::Identity(n, n);

  WaveformDesignResult out;
  VecC s_bar = s_init;
  if (s_bar.squaredNorm() > p_r) s_bar *= std::sqrt(p_r) / s_bar.norm();

  double sinr_prev = radar_sinr_waveform_domain(mats, s_bar);
  double rate_prev = avg_rate(inst, v, s_bar);

  const MatC sim_a = eye - (s_ref * s_ref.adjoint()) / p_r;
  const double sim_rhs = params.similarity * p_r;
  const double papr_cap = params.papr_bound * p_r / static_cast<double>(n);

  for (int it = 0; it < params.sca_max_iter; ++it) {
    // Re-anchor the rate minorant; shrink the expansion point if the floor is
    // out of reach there (less radar energy always helps the downlink).
    WaveformSurrogate wsur = waveform_surrogate(inst, s_bar, v);
    bool shrunk_out = false;
    while (wsur.rate_anchor - params.mi_min < 1e-9) {
      s_bar *= 0.5;
      if (s_bar.squaredNorm() < 1e-12 * p_r) {
        shrunk_out = true;
        break;
      }
      wsur = waveform_surrogate(inst, s_bar, v);
    }
    if (shrunk_out) {
      out.feasible = false;
      break;
    }
    const double mi_rhs = wsur.rate_anchor - params.mi_min;

    VecC s_candidate;
    int rank_before = 0;
    if (params.mode == WaveformMode::similarity) {
      std::vector<SdpConstraint> frac_cons;
      frac_cons.push_back({eye, ConstraintSense::le, p_r});
      frac_cons.push_back({wsur.gamma_hat, ConstraintSense::le, mi_rhs});
      frac_cons.push_back({sim_a, ConstraintSense::le, sim_rhs});
      const FractionalSdpResult frac =
          solve_fractional_sdp(mats.psi_tilde, mats.r_tilde, mats.r_of_v, frac_cons, params.sdp);
      if (frac.status != SdpStatus::optimal) break;
      const double level = frac.value * (1.0 - 1e-7);

      SdpProblem min_trace;
      min_trace.n = n;
      min_trace.maximize = false;
      min_trace.c = eye;
      const MatC sinr_combo = mats.psi_tilde - level * mats.r_tilde;
      min_trace.constraints.push_back({sinr_combo, ConstraintSense::ge, level * mats.r_of_v});
      min_trace.constraints.push_back({wsur.gamma_hat, ConstraintSense::le, mi_rhs});
      min_trace.constraints.push_back({sim_a, ConstraintSense::le, sim_rhs});
      const SdpSolution trace_sol = solve_sdp(min_trace, params.sdp);
      if (trace_sol.status != SdpStatus::optimal) break;

      rank_before = spectrum_rank(trace_sol.s, params.rank_rel_tol);
      const RankReductionResult rr = rank_reduction(
          trace_sol.s, {sinr_combo, wsur.gamma_hat, sim_a}, params.rank_rel_tol);
      s_candidate = extract_rank_one(rr.s, -1.0);
    } else {
      const MatC r_breve = mats.r_tilde + (mats.r_of_v / p_r) * eye;
      const MatC gamma_papr = (wsur.gamma_hat + eye) / (mi_rhs + p_r);
      std::vector<SdpConstraint> frac_cons;
      frac_cons.push_back({gamma_papr, ConstraintSense::le, 1.0});
      frac_cons.push_back({eye, ConstraintSense::eq, p_r});
      const FractionalSdpResult frac =
          solve_fractional_sdp(mats.psi_tilde, r_breve, 0.0, frac_cons, params.sdp);
      if (frac.status != SdpStatus::optimal) break;

      rank_before = spectrum_rank(frac.s, params.rank_rel_tol);
      const RankReductionResult rr = rank_reduction(
          frac.s, {mats.psi_tilde, r_breve, gamma_papr, eye}, params.rank_rel_tol);
      VecC s3 = extract_rank_one(rr.s, rr.rank == 1 ? -1.0 : p_r);
      s_candidate = project_sphere_box(s3, p_r, papr_cap);
    }

    // Accept only steps that do not regress; in the shaping-projection mode,
    // back off toward the previous point when the projection broke a metric.
    bool accepted = false;
    double sinr_new = 0.0, rate_new = 0.0;
    const double rate_floor_here = std::min(params.mi_min, rate_prev) - 1e-6;
    for (int halving = 0; halving <= 10; ++halving) {
      sinr_new = radar_sinr_waveform_domain(mats, s_candidate);
      rate_new = avg_rate(inst, v, s_candidate);
      const bool sinr_ok = sinr_new >= sinr_prev - 1e-9 * (1.0 + std::abs(sinr_prev));
      const bool rate_ok = rate_new >= rate_floor_here;
      if (sinr_ok && rate_ok) {
        accepted = true;
        break;
      }
      if (params.mode != WaveformMode::papr) break;
      s_candidate = project_sphere_box(0.5 * (s_candidate + s_bar), p_r, papr_cap);
    }
    if (!accepted) break;  // stalled; keep the last accepted waveform

    s_bar = s_candidate;
    const double delta_db = std::abs(10.0 * std::log10(std::max(sinr_new, 1e-300)) -
                                     10.0 * std::log10(std::max(sinr_prev, 1e-300)));
    sinr_prev = sinr_new;
    rate_prev = rate_new;
    out.trace.push_back({it, 10.0 * std::log10(std::max(sinr_new, 1e-300)), rate_new,
                         rank_before, papr_of(s_bar)});
    out.iterations = it + 1;
    if (delta_db < params.sca_tol) break;
  }

  out.s = s_bar;
  out.sinr = radar_sinr_waveform_domain(mats, s_bar);
  out.rate_nats = avg_rate(inst, v, s_bar);
  return out;
}

}  // namespace crc
