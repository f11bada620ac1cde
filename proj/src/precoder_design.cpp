#include "crc/precoder_design.hpp"

#include <cmath>

namespace crc {

PrecoderDesignResult design_precoder(const ScenarioInstance& inst, const ReceiveFilter& filter,
                                     const VecC& s, const MatC& v_init,
                                     const PrecoderDesignParams& params) {
  const auto& dims = inst.dims;
  const MatC pi = pi_matrix(inst, filter.w);
  const CommGeometry geo = CommGeometry::build(inst);
  const double p_b = inst.p_b;

  VecC v_bar = vec(v_init);
  if (v_bar.squaredNorm() > p_b) v_bar *= std::sqrt(p_b) / v_bar.norm();

  PrecoderDesignResult out;
  auto leakage_of = [&](const VecC& v) { return std::real((v.adjoint() * pi * v).value()); };
  const double noise_floor = inst.sigma_r_sq * filter.w.squaredNorm();

  double obj_prev = leakage_of(v_bar);
  int restoration_rounds = 0;
  out.feasible = true;

  for (int it = 0; it < params.sca_max_iter; ++it) {
    const PrecoderSurrogate sur = precoder_surrogate(inst, v_bar, s, &geo);

    // Largest value of the concave rate surrogate on the power ball; if even
    // that misses the floor, take an ascent step on the surrogate instead of
    // solving the (infeasible) constrained subproblem.
    const VecC v_best = minimize_quadratic_on_ball(sur.gamma22_bar, sur.gamma12_bar, p_b);
    const double sur_max = sur.value(v_best);
    if (sur_max < params.mi_min) {
      if (++restoration_rounds > params.restoration_max_rounds) {
        out.feasible = false;
        v_bar = v_best;
        obj_prev = leakage_of(v_bar);
        break;
      }
      v_bar = v_best;
      obj_prev = leakage_of(v_bar);
      out.trace.push_back({it, obj_prev + noise_floor,
                           avg_rate(inst, unvec(v_bar, dims.nt, dims.d), s), 0});
      out.iterations = it + 1;
      continue;
    }

    QuadConstraint rate_floor;
    rate_floor.q = sur.gamma22_bar;
    rate_floor.l = sur.gamma12_bar;
    rate_floor.c = params.mi_min - sur.rate_anchor;

    const AdmmResult admm = admm_qcqp(pi, p_b, rate_floor, v_bar, params.admm);
    VecC v_new = admm.v;
    if (v_new.squaredNorm() > p_b) v_new *= std::sqrt(p_b) / v_new.norm();

    const double obj_new = leakage_of(v_new);
    const bool objective_ok = obj_new <= obj_prev + 1e-9 * (1.0 + std::abs(obj_prev));
    const bool rate_ok = sur.value(v_new) >= params.mi_min - 1e-6;
    if (!objective_ok || !rate_ok) break;  // stalled; keep the last accepted point

    v_bar = v_new;
    out.trace.push_back({it, obj_new + noise_floor,
                         avg_rate(inst, unvec(v_bar, dims.nt, dims.d), s),
                         admm.iterations});
    out.iterations = it + 1;
    const double delta = std::abs(obj_prev - obj_new);
    obj_prev = obj_new;
    if (delta < params.sca_tol) break;
  }

  out.v = unvec(v_bar, dims.nt, dims.d);
  out.leakage = obj_prev;
  out.rate_nats = avg_rate(inst, out.v, s);
  return out;
}

}  // namespace crc
