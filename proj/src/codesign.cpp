#include "crc/codesign.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crc {

CodesignBaseline parse_baseline(const std::string& text) {
  CodesignBaseline b;
  std::stringstream ss(text);
  std::string flag;
  while (std::getline(ss, flag, ',')) {
    const auto first = flag.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    flag = flag.substr(first, flag.find_last_not_of(" \t") - first + 1);
    if (flag == "none")
      ;
    else if (flag == "fixed_v")
      b.fixed_v = true;
    else if (flag == "fixed_s")
      b.fixed_s = true;
    else if (flag == "fixed_w")
      b.fixed_w = true;
    else
      throw std::invalid_argument("unknown baseline flag: " + flag);
  }
  if (b.fixed_s && b.fixed_w)
    throw std::invalid_argument(
        "baseline fixes both the waveform and the receive filter; the radar side would never "
        "update");
  return b;
}

std::string baseline_to_string(const CodesignBaseline& b) {
  std::string out;
  auto add = [&out](const char* flag) {
    if (!out.empty()) out += ',';
    out += flag;
  };
  if (b.fixed_v) add("fixed_v");
  if (b.fixed_s) add("fixed_s");
  if (b.fixed_w) add("fixed_w");
  if (out.empty()) out = "none";
  return out;
}

MatC initial_precoder(const SystemDims& dims, double p_b) {
  MatC v = MatC::Zero(dims.nt, dims.d);
  const double amp = std::sqrt(p_b / static_cast<double>(dims.d));
  for (int i = 0; i < dims.d; ++i) v(i, i) = amp;
  return v;
}

CodesignResult run_codesign(const ScenarioInstance& inst, const CodesignParams& params) {
  PrecoderDesignParams pparams = params.precoder;
  pparams.mi_min = params.mi_min;
  WaveformDesignParams wparams = params.waveform;
  wparams.mode = params.mode;
  wparams.mi_min = params.mi_min;
  wparams.similarity = params.similarity;
  wparams.papr_bound = params.papr_bound;

  CodesignResult out;
  out.v = initial_precoder(inst.dims, inst.p_b);
  const VecC s_ref = reference_waveform_lfm(inst.dims, inst.p_r);
  out.s = s_ref;
  out.filter = update_receive_filter(inst, out.v, out.s);

  double sinr_prev = radar_sinr(inst, out.filter.w, out.s, out.v);
  out.history.push_back(
      {0, 10.0 * std::log10(std::max(sinr_prev, 1e-300)), avg_rate(inst, out.v, out.s)});

  for (int it = 1; it <= params.outer_max_iter; ++it) {
    int inner_steps = 0;
    if (!params.baseline.fixed_v) {
      const PrecoderDesignResult pres = design_precoder(inst, out.filter, out.s, out.v, pparams);
      out.v = pres.v;
      out.precoder_feasible = out.precoder_feasible && pres.feasible;
      out.last_precoder_trace = pres.trace;
      inner_steps += pres.iterations;
    }
    if (!params.baseline.fixed_s) {
      const WaveformDesignResult wres =
          design_waveform(inst, out.filter, out.v, out.s, s_ref, wparams);
      out.s = wres.s;
      out.waveform_feasible = out.waveform_feasible && wres.feasible;
      out.last_waveform_trace = wres.trace;
      inner_steps += wres.iterations;
    }
    if (!params.baseline.fixed_w) out.filter = update_receive_filter(inst, out.v, out.s);

    const double sinr_now = radar_sinr(inst, out.filter.w, out.s, out.v);
    out.history.push_back(
        {it, 10.0 * std::log10(std::max(sinr_now, 1e-300)), avg_rate(inst, out.v, out.s)});
    out.outer_iterations = it;

    const double delta = std::abs(10.0 * std::log10(std::max(sinr_now, 1e-300)) -
                                  10.0 * std::log10(std::max(sinr_prev, 1e-300)));
    sinr_prev = sinr_now;
    if (delta < params.outer_tol) {
      out.converged = true;
      break;
    }
    if (inner_steps == 0 && params.baseline.fixed_w) {
      out.stalled = true;  // nothing can move any more
      break;
    }
  }

  out.sinr = sinr_prev;
  out.rate_nats = avg_rate(inst, out.v, out.s);
  const MatC pi = pi_matrix(inst, out.filter.w);
  const VecC v_vec = vec(out.v);
  out.leakage = std::real((v_vec.adjoint() * pi * v_vec).value());
  return out;
}

}  // namespace crc
