#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "crc/linalg.hpp"
#include "crc/radar_metrics.hpp"
#include "crc/rng.hpp"
#include "crc/scenario.hpp"

using namespace crc;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig cfg;
  cfg.dims.mt = 3;
  cfg.dims.mr = 4;
  cfg.dims.nt = 4;
  cfg.dims.nr = 3;
  cfg.dims.d = 2;
  cfg.dims.k_pulse = 3;
  cfg.dims.k_pri = 8;
  cfg.num_clutter = 2;
  cfg.num_comm_to_radar = 2;
  cfg.num_comm_paths = 2;
  cfg.num_radar_to_comm = 2;
  return cfg;
}

struct Probe {
  ScenarioInstance inst;
  MatC v;
  VecC s;
};

Probe random_probe(std::uint64_t seed) {
  Probe p;
  p.inst = sample_scenario(tiny_config(), seed);
  Rng rng(seed + 1000);
  p.v = rng.cmatrix(p.inst.dims.nt, p.inst.dims.d);
  p.v *= std::sqrt(p.inst.p_b) / p.v.norm();
  p.s = rng.cvector(p.inst.dims.radar_tx_len());
  p.s *= std::sqrt(p.inst.p_r) / p.s.norm();
  return p;
}

// Interference-plus-noise covariance assembled directly from the channel
// model: downlink leakage with per-sample precoding, signal-dependent
// clutter, and the noise floor.
MatC covariance_oracle(const ScenarioInstance& inst, const MatC& v, const VecC& s) {
  const int n = inst.dims.radar_rx_len();
  const int kp = inst.dims.k_pulse;
  MatC r = MatC::Zero(n, n);
  MatC v_stack = MatC::Zero(inst.dims.nt * kp, inst.dims.d * kp);
  for (int k = 0; k < kp; ++k)
    v_stack.block(k * inst.dims.nt, k * inst.dims.d, inst.dims.nt, inst.dims.d) = v;
  for (std::size_t g = 0; g < inst.comm_to_radar.size(); ++g) {
    const MatC hv = inst.h_comm_to_radar[g] * v_stack;
    r += inst.comm_to_radar[g].var * hv * hv.adjoint();
  }
  for (std::size_t q = 0; q < inst.clutter.size(); ++q) {
    const VecC hs = inst.h_clutter[q] * s;
    r += inst.clutter[q].var * hs * hs.adjoint();
  }
  r += inst.sigma_r_sq * MatC::Identity(n, n);
  return r;
}

MatC target_cov_oracle(const ScenarioInstance& inst, const VecC& s) {
  const int n = inst.dims.radar_rx_len();
  MatC psi = MatC::Zero(n, n);
  const VecC h0s = inst.h_target[0] * s;
  psi += inst.target.var * h0s * h0s.adjoint();
  for (std::size_t j = 0; j < inst.patches.size(); ++j) {
    const VecC hjs = inst.h_target[1 + j] * s;
    psi += inst.patches[j].var * hjs * hjs.adjoint();
  }
  return psi;
}

}  // namespace

TEST_CASE("interference covariance matches the channel-model assembly") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const Probe p = random_probe(seed);
    const MatC r = interference_covariance(p.inst, p.v, p.s);
    CHECK(rel_error(r, covariance_oracle(p.inst, p.v, p.s)) < 1e-12);
    CHECK(rel_error(r, r.adjoint()) < 1e-13);
    Eigen::SelfAdjointEigenSolver<MatC> es(r);
    CHECK(es.eigenvalues().minCoeff() >= p.inst.sigma_r_sq * (1.0 - 1e-12));
  }
}

TEST_CASE("interference covariance collapses to the noise floor without paths") {
  ScenarioConfig cfg = tiny_config();
  cfg.num_clutter = 0;
  cfg.num_comm_to_radar = 0;
  cfg.sigma_r_sq = 2.0;
  const ScenarioInstance inst = sample_scenario(cfg, 5);
  Rng rng(5);
  const MatC v = rng.cmatrix(inst.dims.nt, inst.dims.d);
  const VecC s = rng.cvector(inst.dims.radar_tx_len());
  const MatC r = interference_covariance(inst, v, s);
  CHECK(rel_error(r, 2.0 * MatC::Identity(r.rows(), r.cols())) < 1e-14);
}

TEST_CASE("target return covariance: assembly, rank cap, and energy scaling") {
  const Probe p = random_probe(31);
  const MatC psi = target_cov_oracle(p.inst, p.s);
  CHECK(rel_error(target_return_cov(p.inst, p.s), psi) < 1e-12);

  // Sum of 1 + J rank-one terms.
  Eigen::SelfAdjointEigenSolver<MatC> es(psi);
  const VecR vals = es.eigenvalues().reverse();
  const int max_rank = 1 + static_cast<int>(p.inst.patches.size());
  for (int i = max_rank; i < vals.size(); ++i)
    CHECK(std::abs(vals(i)) < 1e-12 * vals(0));

  // Quadratic in s: doubling the waveform quadruples the return power.
  CHECK(rel_error(target_return_cov(p.inst, 2.0 * p.s), 4.0 * psi) < 1e-12);
}

TEST_CASE("receive filter is unit norm, phase-pinned, and beats challengers") {
  for (std::uint64_t seed : {41, 42}) {
    const Probe p = random_probe(seed);
    const ReceiveFilter f = update_receive_filter(p.inst, p.v, p.s);
    CHECK(f.w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    int imax = 0;
    f.w.cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(f.w(imax).imag()) < 1e-12);
    CHECK(f.w(imax).real() > 0.0);

    // Reported SINR is what the filter actually achieves.
    CHECK(radar_sinr(p.inst, f.w, p.s, p.v) ==
          doctest::Approx(f.sinr).epsilon(1e-10));

    // Generalized Rayleigh optimum: no random filter does better, and the
    // analytic optimum lambda_max(R^-1 Psi) is attained.
    const MatC r = interference_covariance(p.inst, p.v, p.s);
    const MatC psi = target_return_cov(p.inst, p.s);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatC> ges(psi, r);
    CHECK(f.sinr == doctest::Approx(ges.eigenvalues().maxCoeff()).epsilon(1e-9));

    Rng rng(seed + 7);
    for (int trial = 0; trial < 100; ++trial) {
      VecC w = rng.cvector(f.w.size());
      w.normalize();
      CHECK(radar_sinr(p.inst, w, p.s, p.v) <= f.sinr * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("waveform-domain SINR equals the filter-domain SINR") {
  for (std::uint64_t seed : {51, 52, 53}) {
    const Probe p = random_probe(seed);
    Rng rng(seed + 9);
    VecC w = rng.cvector(p.inst.dims.radar_rx_len());
    w.normalize();
    const RadarDesignMatrices dm = design_matrices(p.inst, w, p.v);
    const double direct = radar_sinr(p.inst, w, p.s, p.v);
    const double via_forms = radar_sinr_waveform_domain(dm, p.s);
    CHECK(std::abs(direct - via_forms) <= 1e-10 * std::abs(direct));

    // The quadratic forms reproduce the filtered powers term by term.
    double num = 0.0;
    num += p.inst.target.var * std::norm((w.adjoint() * p.inst.h_target[0] * p.s).value());
    for (std::size_t j = 0; j < p.inst.patches.size(); ++j)
      num += p.inst.patches[j].var *
             std::norm((w.adjoint() * p.inst.h_target[1 + j] * p.s).value());
    CHECK(std::real((p.s.adjoint() * dm.psi_tilde * p.s).value()) ==
          doctest::Approx(num).epsilon(1e-10));

    double clut = 0.0;
    for (std::size_t q = 0; q < p.inst.clutter.size(); ++q)
      clut += p.inst.clutter[q].var *
              std::norm((w.adjoint() * p.inst.h_clutter[q] * p.s).value());
    CHECK(std::real((p.s.adjoint() * dm.r_tilde * p.s).value()) ==
          doctest::Approx(clut).epsilon(1e-10));

    // r_of_v carries the waveform-independent leakage-plus-noise power.
    const MatC r_full = interference_covariance(p.inst, p.v, p.s);
    const double denom_direct = std::real((w.adjoint() * r_full * w).value());
    CHECK(std::real((p.s.adjoint() * dm.r_tilde * p.s).value()) + dm.r_of_v ==
          doctest::Approx(denom_direct).epsilon(1e-10));
  }
}

TEST_CASE("w_block exposes sample blocks of the filter outer product") {
  const Probe p = random_probe(61);
  Rng rng(61);
  VecC w = rng.cvector(p.inst.dims.radar_rx_len());
  w.normalize();
  const RadarDesignMatrices dm = design_matrices(p.inst, w, p.v);
  const int mr = p.inst.dims.mr;
  for (int i = 0; i < p.inst.dims.k_pulse; ++i)
    for (int j = 0; j < p.inst.dims.k_pulse; ++j) {
      const MatC expect = w.segment(i * mr, mr) * w.segment(j * mr, mr).adjoint();
      CHECK(rel_error(dm.w_block(i, j), expect) < 1e-13);
    }
}

TEST_CASE("beampattern follows its quadratic definition with a -100 dB floor") {
  const Probe p = random_probe(71);
  Rng rng(71);
  VecC w = rng.cvector(p.inst.dims.radar_rx_len());
  const VecC s = p.s;
  VecR grid(3);
  grid << deg2rad(-30.0), deg2rad(0.0), deg2rad(20.0);
  const VecR pattern = beampattern_db(p.inst, w, s, grid);
  REQUIRE(pattern.size() == 3);
  const int kp = p.inst.dims.k_pulse;
  for (int i = 0; i < 3; ++i) {
    const VecC br = steering_vector(p.inst.dims.mr, grid(i));
    const VecC bt = steering_vector(p.inst.dims.mt, grid(i));
    MatC h = MatC::Zero(p.inst.dims.radar_rx_len(), p.inst.dims.radar_tx_len());
    for (int k = 0; k < kp; ++k)
      h.block(k * p.inst.dims.mr, k * p.inst.dims.mt, p.inst.dims.mr, p.inst.dims.mt) =
          br * bt.transpose();
    const double gain = std::norm((w.adjoint() * h * s).value()) /
                        (p.inst.dims.mt * p.inst.dims.mr * w.squaredNorm() * s.squaredNorm());
    const double expect = std::max(10.0 * std::log10(gain), -100.0);
    CHECK(pattern(i) == doctest::Approx(expect).epsilon(1e-10));
  }

  // A filter orthogonal to every probed response floors out.
  const VecR floored = beampattern_db(p.inst, VecC::Zero(w.size()), s, grid);
  for (int i = 0; i < 3; ++i) CHECK(floored(i) == -100.0);
}
