#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "crc/linalg.hpp"
#include "crc/rng.hpp"
#include "crc/scenario.hpp"

using namespace crc;

namespace {

SystemDims tiny_dims() {
  SystemDims d;
  d.mt = 3;
  d.mr = 4;
  d.nt = 4;
  d.nr = 3;
  d.d = 2;
  d.k_pulse = 3;
  d.k_pri = 8;
  return d;
}

ScenarioConfig tiny_config() {
  ScenarioConfig cfg;
  cfg.dims = tiny_dims();
  cfg.num_clutter = 2;
  cfg.num_comm_to_radar = 2;
  cfg.num_comm_paths = 2;
  cfg.num_radar_to_comm = 2;
  return cfg;
}

}  // namespace

TEST_CASE("steering_vector matches the uniform-linear-array closed form") {
  const double theta = deg2rad(20.0);
  const int n = 5;
  const VecC b = steering_vector(n, theta);
  CHECK(b.size() == n);
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const double step = -M_PI * std::sin(theta);
  for (int i = 0; i < n; ++i) {
    const cplx expect = std::polar(1.0 / std::sqrt(5.0), step * i);
    CHECK(std::abs(b(i) - expect) < 1e-14);
  }
  // Broadside: every element in phase.
  const VecC b0 = steering_vector(4, 0.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(b0(i) - cplx(0.5, 0.0)) < 1e-15);
  CHECK_THROWS_AS(steering_vector(0, 0.0), std::invalid_argument);
}

TEST_CASE("shift_matrix puts ones exactly on the k-th subdiagonal") {
  const int n = 5;
  for (int k = -n; k <= n; ++k) {
    const MatR j = shift_matrix(n, k);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        CHECK(j(r, c) == ((r - c == k) ? 1.0 : 0.0));
  }
  // J_0 is the identity; J_k acts as a sample delay on vectors.
  CHECK(shift_matrix(4, 0).isIdentity(0.0));
  VecR x(4);
  x << 1.0, 2.0, 3.0, 4.0;
  const VecR y = shift_matrix(4, 1) * x;
  CHECK(y(0) == 0.0);
  CHECK(y(1) == 1.0);
  CHECK(y(3) == 3.0);
}

TEST_CASE("pulse_sample_index agrees with the periodic pulse-train oracle") {
  SystemDims dims = tiny_dims();  // k_pulse 3, k_pri 8
  for (int tau = 0; tau < dims.k_pri; ++tau) {
    for (int k = 0; k < dims.k_pri; ++k) {
      // Oracle: emissions start at every multiple of k_pri, shifted by tau;
      // find which pulse sample (if any) lands on interval sample k.
      int expect = -1;
      int hits = 0;
      for (int m = -3; m <= 3; ++m) {
        const int idx = k - tau - m * dims.k_pri;
        if (idx >= 0 && idx < dims.k_pulse) {
          expect = idx;
          ++hits;
        }
      }
      CHECK(hits <= 1);  // pulse shorter than the interval: no overlap
      CHECK(pulse_sample_index(tau, k, dims) == expect);
    }
  }
}

TEST_CASE("direct and patch return operators are block-diagonal cross terms") {
  ScenarioInstance inst = sample_scenario(tiny_config(), 7);
  const auto& dims = inst.dims;
  const int kp = dims.k_pulse;
  const VecC br0 = steering_vector(dims.mr, inst.target.angle);
  const VecC bt0 = steering_vector(dims.mt, inst.target.angle);

  REQUIRE(inst.h_target.size() == 1 + inst.patches.size());
  // Apply to a random stacked waveform and compare column-by-column against
  // the matrix model: the return at sample k depends only on s at sample k.
  Rng rng(99);
  const MatC s_mat = rng.cmatrix(dims.mt, kp);
  const VecC s = vec(s_mat);

  const MatC y0 = unvec(inst.h_target[0] * s, dims.mr, kp);
  for (int k = 0; k < kp; ++k)
    CHECK((y0.col(k) - br0 * (bt0.transpose() * s_mat.col(k))).norm() < 1e-13);

  for (std::size_t j = 0; j < inst.patches.size(); ++j) {
    const VecC brj = steering_vector(dims.mr, inst.patches[j].angle);
    const VecC btj = steering_vector(dims.mt, inst.patches[j].angle);
    const MatC yj = unvec(inst.h_target[1 + j] * s, dims.mr, kp);
    for (int k = 0; k < kp; ++k) {
      const VecC expect = br0 * (btj.transpose() * s_mat.col(k)) +
                          brj * (bt0.transpose() * s_mat.col(k));
      CHECK((yj.col(k) - expect).norm() < 1e-13);
    }
  }
}

TEST_CASE("clutter operators implement the delayed-return matrix model") {
  ScenarioInstance inst = sample_scenario(tiny_config(), 8);
  const auto& dims = inst.dims;
  const int kp = dims.k_pulse;
  Rng rng(100);
  const MatC s_mat = rng.cmatrix(dims.mt, kp);
  const VecC s = vec(s_mat);

  REQUIRE(inst.h_clutter.size() == inst.clutter.size());
  for (std::size_t q = 0; q < inst.clutter.size(); ++q) {
    const auto& c = inst.clutter[q];
    const VecC br = steering_vector(dims.mr, c.angle);
    const VecC bt = steering_vector(dims.mt, c.angle);
    // Matrix model: Y = (br bt^T) S J_delay, so column k of Y reads column
    // k + delay of S (zero outside the pulse).
    const MatC y = unvec(inst.h_clutter[q] * s, dims.mr, kp);
    for (int k = 0; k < kp; ++k) {
      const int src = k + c.delay;
      const VecC expect = (src >= 0 && src < kp)
                              ? VecC(br * (bt.transpose() * s_mat.col(src)))
                              : VecC(VecC::Zero(dims.mr));
      CHECK((y.col(k) - expect).norm() < 1e-13);
    }
  }
}

TEST_CASE("downlink-to-radar leakage stacks one rank-one factor per sample") {
  ScenarioInstance inst = sample_scenario(tiny_config(), 9);
  const auto& dims = inst.dims;
  REQUIRE(inst.h_comm_to_radar.size() == inst.comm_to_radar.size());
  REQUIRE(inst.t_comm_to_radar.size() == inst.comm_to_radar.size());
  for (std::size_t g = 0; g < inst.comm_to_radar.size(); ++g) {
    const auto& p = inst.comm_to_radar[g];
    const VecC br = steering_vector(dims.mr, p.doa);
    const VecC at = steering_vector(dims.nt, p.dod);
    CHECK(rel_error(inst.t_comm_to_radar[g], br * at.transpose()) < 1e-14);
    // The stacked operator is block-diagonal with that factor.
    const MatC& h = inst.h_comm_to_radar[g];
    CHECK(h.rows() == dims.radar_rx_len());
    CHECK(h.cols() == dims.nt * dims.k_pulse);
    for (int k = 0; k < dims.k_pulse; ++k)
      for (int l = 0; l < dims.k_pulse; ++l) {
        const MatC block = h.block(k * dims.mr, l * dims.nt, dims.mr, dims.nt);
        if (k == l)
          CHECK(rel_error(block, inst.t_comm_to_radar[g]) < 1e-14);
        else
          CHECK(block.cwiseAbs().maxCoeff() == 0.0);
      }
  }
}

TEST_CASE("radar-to-user selector places the steering block by delay") {
  ScenarioConfig cfg = tiny_config();
  ScenarioInstance inst = sample_scenario(cfg, 10);
  // Overwrite the first leakage path with a known delay for a closed check.
  inst.radar_to_comm[0].delay = 2;
  inst.finalize();
  const auto& dims = inst.dims;
  const int kp = dims.k_pulse;  // 3
  const MatC outer = inst.r2c_rx_steer[0] * inst.r2c_tx_steer[0].transpose();

  // Sample k = delay + r hits pulse sample r; elsewhere (within the first
  // interval, before wraparound) the selector is zero.
  for (int k = 0; k < dims.k_pri; ++k) {
    const MatC g = radar_to_comm_matrix(inst, 0, k);
    CHECK(g.rows() == dims.nr);
    CHECK(g.cols() == dims.radar_tx_len());
    const int r = pulse_sample_index(2, k, dims);
    for (int blk = 0; blk < kp; ++blk) {
      const MatC sub = g.block(0, blk * dims.mt, dims.nr, dims.mt);
      if (blk == r)
        CHECK(rel_error(sub, outer) < 1e-14);
      else
        CHECK(sub.cwiseAbs().maxCoeff() == 0.0);
    }
  }

  // Wraparound: a delay near the end of the interval spills into the next
  // one, so early samples see the tail of the previous pulse.
  inst.radar_to_comm[0].delay = dims.k_pri - 1;
  inst.finalize();
  const MatC g0 = radar_to_comm_matrix(inst, 0, 0);
  CHECK(rel_error(g0.block(0, 1 * dims.mt, dims.nr, dims.mt),
                  inst.r2c_rx_steer[0] * inst.r2c_tx_steer[0].transpose()) < 1e-14);

  CHECK_THROWS_AS(radar_to_comm_matrix(inst, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(radar_to_comm_matrix(inst, 0, dims.k_pri), std::invalid_argument);
}

TEST_CASE("sampled path variances follow the configured dB ratios") {
  const ScenarioConfig cfg;  // full defaults
  ScenarioInstance inst = sample_scenario(cfg, 4);
  // var = noise * 10^(ratio/10) / budget for the relevant budget.
  CHECK(inst.target.var == doctest::Approx(10.0).epsilon(1e-12));          // 20 dB / P_R
  for (const auto& p : inst.patches)
    CHECK(p.var == doctest::Approx(std::pow(10.0, 1.8) / 10.0).epsilon(1e-12));
  for (const auto& c : inst.clutter)
    CHECK(c.var == doctest::Approx(100.0).epsilon(1e-12));                 // 30 dB / P_R
  for (const auto& p : inst.comm_to_radar)
    CHECK(p.var == doctest::Approx(100.0).epsilon(1e-12));                 // 20 dB / P_B
  for (const auto& p : inst.comm_paths)
    CHECK(p.var == doctest::Approx(std::pow(10.0, 2.5)).epsilon(1e-12));   // 25 dB / P_B
  for (const auto& p : inst.radar_to_comm)
    CHECK(p.var == doctest::Approx(1000.0).epsilon(1e-12));                // 40 dB / P_R

  // Default geometry: fixed direct angle and three fixed patches.
  CHECK(inst.target.angle == doctest::Approx(deg2rad(20.0)));
  REQUIRE(inst.patches.size() == 3);
  CHECK(inst.patches[0].angle == doctest::Approx(deg2rad(-10.0)));
  CHECK(inst.patches[1].angle == doctest::Approx(deg2rad(-17.0)));
  CHECK(inst.patches[2].angle == doctest::Approx(deg2rad(-25.0)));
  CHECK(inst.clutter.size() == 5);
  CHECK(inst.comm_to_radar.size() == 6);
  CHECK(inst.comm_paths.size() == 3);
  CHECK(inst.radar_to_comm.size() == 6);
}

TEST_CASE("sampling is deterministic per seed and varies across seeds") {
  const ScenarioConfig cfg = tiny_config();
  const ScenarioInstance a = sample_scenario(cfg, 42);
  const ScenarioInstance b = sample_scenario(cfg, 42);
  const ScenarioInstance c = sample_scenario(cfg, 43);
  CHECK(rel_error(a.h_clutter[0], b.h_clutter[0]) == 0.0);
  CHECK(a.clutter[0].angle == b.clutter[0].angle);
  CHECK(a.clutter[0].delay == b.clutter[0].delay);
  bool differs = a.clutter[0].angle != c.clutter[0].angle ||
                 a.comm_to_radar[0].doa != c.comm_to_radar[0].doa;
  CHECK(differs);
}

TEST_CASE("dimension validation rejects non-physical systems") {
  SystemDims d = tiny_dims();
  d.d = 5;  // exceeds nr = 3
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = tiny_dims();
  d.k_pulse = 9;  // exceeds k_pri = 8
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = tiny_dims();
  d.mt = 0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  CHECK_NOTHROW(tiny_dims().validate());
}

TEST_CASE("scenario JSON round-trips and rejects unknown keys") {
  ScenarioConfig cfg = tiny_config();
  cfg.theta0_deg = 12.5;
  cfg.inr_r_db = 27.0;
  cfg.patch_angles_deg = {-8.0, -21.0};
  cfg.r2c_delay_hi = 5;

  const std::string text = scenario_config_to_json_text(cfg);
  const ScenarioConfig back = scenario_config_from_json_text(text);
  CHECK(back.dims.mt == cfg.dims.mt);
  CHECK(back.dims.k_pri == cfg.dims.k_pri);
  CHECK(back.theta0_deg == doctest::Approx(12.5));
  CHECK(back.inr_r_db == doctest::Approx(27.0));
  REQUIRE(back.patch_angles_deg.size() == 2);
  CHECK(back.patch_angles_deg[1] == doctest::Approx(-21.0));
  CHECK(back.r2c_delay_hi == 5);
  CHECK(back.num_clutter == cfg.num_clutter);

  CHECK_THROWS_AS(scenario_config_from_json_text("{\"dimz\":{}}"), std::runtime_error);
  CHECK_THROWS_AS(scenario_config_from_json_text("{\"dims\":{\"mtt\":2}}"), std::runtime_error);
  CHECK_THROWS_AS(scenario_config_from_json_text("not json"), std::runtime_error);
}

TEST_CASE("finalize validates path parameters against the dimensions") {
  ScenarioInstance inst = sample_scenario(tiny_config(), 3);
  inst.clutter[0].delay = inst.dims.k_pulse;  // |delay| must stay below k_pulse
  CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  inst = sample_scenario(tiny_config(), 3);
  inst.radar_to_comm[0].delay = inst.dims.k_pri;  // outside [0, k_pri)
  CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
  inst = sample_scenario(tiny_config(), 3);
  inst.sigma_r_sq = 0.0;
  CHECK_THROWS_AS(inst.finalize(), std::invalid_argument);
}
