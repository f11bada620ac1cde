#include "crc/scenario.hpp"

#include "crc/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace crc {
namespace {

using nlohmann::json;

MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double var_from_db(double ratio_db, double noise_power, double tx_budget) {
  return noise_power * std::pow(10.0, ratio_db / 10.0) / tx_budget;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw std::runtime_error("scenario config: unknown key '" + item.key() + "' in " + ctx);
}

AngleRangeDeg range_from(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("scenario config: " + ctx + " must be a [lo, hi] pair");
  AngleRangeDeg r{j[0].get<double>(), j[1].get<double>()};
  if (r.hi < r.lo) throw std::runtime_error("scenario config: " + ctx + " has hi < lo");
  return r;
}

}  // namespace

void SystemDims::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw std::invalid_argument(std::string("dims: ") + name + " must be positive");
  };
  positive(mt, "mt");
  positive(mr, "mr");
  positive(nt, "nt");
  positive(nr, "nr");
  positive(d, "d");
  positive(k_pulse, "k_pulse");
  positive(k_pri, "k_pri");
  if (d > nt || d > nr)
    throw std::invalid_argument("dims: stream count d must not exceed nt or nr");
  if (k_pulse > k_pri)
    throw std::invalid_argument("dims: pulse length must not exceed the repetition interval");
}

VecC steering_vector(int n, double angle_rad) {
  if (n <= 0) throw std::invalid_argument("steering_vector: n must be positive");
  VecC v(n);
  const double phase_step = -M_PI * std::sin(angle_rad);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) v(i) = scale * std::polar(1.0, phase_step * i);
  return v;
}

MatR shift_matrix(int n, int k) {
  if (n <= 0) throw std::invalid_argument("shift_matrix: n must be positive");
  MatR j = MatR::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const int c = r - k;
    if (c >= 0 && c < n) j(r, c) = 1.0;
  }
  return j;
}

int pulse_sample_index(int tau, int k, const SystemDims& dims) {
  const int cur = k - tau;                      // onset within the current interval
  if (cur >= 0 && cur < dims.k_pulse) return cur;
  const int prev = k - tau + dims.k_pri;        // tail of the previous interval's pulse
  if (prev >= 0 && prev < dims.k_pulse) return prev;
  return -1;
}

void ScenarioInstance::finalize() {
  dims.validate();
  if (sigma_r_sq <= 0.0 || sigma_c_sq <= 0.0)
    throw std::invalid_argument("scenario: noise powers must be positive");
  if (p_r <= 0.0 || p_b <= 0.0)
    throw std::invalid_argument("scenario: power budgets must be positive");
  for (const auto& c : clutter)
    if (std::abs(c.delay) >= dims.k_pulse)
      throw std::invalid_argument("scenario: clutter delay must satisfy |delay| < k_pulse");
  for (const auto& p : radar_to_comm)
    if (p.delay < 0 || p.delay >= dims.k_pri)
      throw std::invalid_argument("scenario: radar-to-user delay must lie in [0, k_pri)");

  const MatC eye_k = MatC::Identity(dims.k_pulse, dims.k_pulse);
  const VecC br0 = steering_vector(dims.mr, target.angle);
  const VecC bt0 = steering_vector(dims.mt, target.angle);

  h_target.clear();
  h_target.push_back(kron(eye_k, br0 * bt0.transpose()));
  for (const auto& p : patches) {
    const VecC brj = steering_vector(dims.mr, p.angle);
    const VecC btj = steering_vector(dims.mt, p.angle);
    h_target.push_back(kron(eye_k, br0 * btj.transpose() + brj * bt0.transpose()));
  }

  h_clutter.clear();
  for (const auto& c : clutter) {
    const VecC br = steering_vector(dims.mr, c.angle);
    const VecC bt = steering_vector(dims.mt, c.angle);
    h_clutter.push_back(kron(shift_matrix(dims.k_pulse, c.delay).transpose().cast<cplx>(),
                             br * bt.transpose()));
  }

  t_comm_to_radar.clear();
  h_comm_to_radar.clear();
  for (const auto& p : comm_to_radar) {
    const VecC br = steering_vector(dims.mr, p.doa);
    const VecC at = steering_vector(dims.nt, p.dod);
    t_comm_to_radar.push_back(br * at.transpose());
    h_comm_to_radar.push_back(kron(eye_k, t_comm_to_radar.back()));
  }

  g_comm.clear();
  for (const auto& p : comm_paths) {
    const VecC ar = steering_vector(dims.nr, p.doa);
    const VecC at = steering_vector(dims.nt, p.dod);
    g_comm.push_back(ar * at.transpose());
  }

  r2c_rx_steer.clear();
  r2c_tx_steer.clear();
  for (const auto& p : radar_to_comm) {
    r2c_rx_steer.push_back(steering_vector(dims.nr, p.doa));
    r2c_tx_steer.push_back(steering_vector(dims.mt, p.dod));
  }
}

MatC radar_to_comm_matrix(const ScenarioInstance& inst, int i, int k) {
  if (i < 0 || i >= static_cast<int>(inst.radar_to_comm.size()))
    throw std::invalid_argument("radar_to_comm_matrix: path index out of range");
  if (k < 0 || k >= inst.dims.k_pri)
    throw std::invalid_argument("radar_to_comm_matrix: sample index out of range");
  MatC g = MatC::Zero(inst.dims.nr, inst.dims.radar_tx_len());
  const int r = pulse_sample_index(inst.radar_to_comm[i].delay, k, inst.dims);
  if (r >= 0)
    g.block(0, r * inst.dims.mt, inst.dims.nr, inst.dims.mt) =
        inst.r2c_rx_steer[i] * inst.r2c_tx_steer[i].transpose();
  return g;
}

ScenarioInstance sample_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.dims.validate();
  Rng rng(seed);
  ScenarioInstance inst;
  inst.dims = cfg.dims;
  inst.sigma_r_sq = cfg.sigma_r_sq;
  inst.sigma_c_sq = cfg.sigma_c_sq;
  inst.p_r = cfg.p_r;
  inst.p_b = cfg.p_b;

  inst.target = {deg2rad(cfg.theta0_deg),
                 var_from_db(cfg.snr_r_direct_db, cfg.sigma_r_sq, cfg.p_r)};

  const double patch_var = var_from_db(cfg.snr_r_indirect_db, cfg.sigma_r_sq, cfg.p_r);
  if (!cfg.patch_angles_deg.empty()) {
    for (double a : cfg.patch_angles_deg) inst.patches.push_back({deg2rad(a), patch_var});
  } else {
    for (int j = 0; j < cfg.num_patches; ++j)
      inst.patches.push_back(
          {deg2rad(rng.uniform(cfg.patch_range_deg.lo, cfg.patch_range_deg.hi)), patch_var});
  }

  const double clutter_var = var_from_db(cfg.cnr_r_db, cfg.sigma_r_sq, cfg.p_r);
  const int dlo = std::max(cfg.clutter_delay_lo, -(cfg.dims.k_pulse - 1));
  const int dhi = std::min(cfg.clutter_delay_hi, cfg.dims.k_pulse - 1);
  for (int q = 0; q < cfg.num_clutter; ++q) {
    ClutterPath c;
    c.angle = deg2rad(rng.uniform(cfg.clutter_range_deg.lo, cfg.clutter_range_deg.hi));
    c.delay = rng.uniform_int(dlo, dhi);
    c.var = clutter_var;
    inst.clutter.push_back(c);
  }

  const double c2r_var = var_from_db(cfg.inr_r_db, cfg.sigma_r_sq, cfg.p_b);
  for (int g = 0; g < cfg.num_comm_to_radar; ++g)
    inst.comm_to_radar.push_back({deg2rad(rng.uniform(cfg.c2r_doa_deg.lo, cfg.c2r_doa_deg.hi)),
                                  deg2rad(rng.uniform(cfg.c2r_dod_deg.lo, cfg.c2r_dod_deg.hi)),
                                  c2r_var});

  const double comm_var = var_from_db(cfg.snr_c_db, cfg.sigma_c_sq, cfg.p_b);
  for (int l = 0; l < cfg.num_comm_paths; ++l)
    inst.comm_paths.push_back({deg2rad(rng.uniform(cfg.comm_doa_deg.lo, cfg.comm_doa_deg.hi)),
                               deg2rad(rng.uniform(cfg.comm_dod_deg.lo, cfg.comm_dod_deg.hi)),
                               comm_var});

  const double r2c_var = var_from_db(cfg.inr_c_db, cfg.sigma_c_sq, cfg.p_r);
  const int tlo = std::max(cfg.r2c_delay_lo, 0);
  const int thi = cfg.r2c_delay_hi < 0 ? cfg.dims.k_pri - 1
                                       : std::min(cfg.r2c_delay_hi, cfg.dims.k_pri - 1);
  for (int i = 0; i < cfg.num_radar_to_comm; ++i) {
    DelayPath p;
    p.doa = deg2rad(rng.uniform(cfg.r2c_doa_deg.lo, cfg.r2c_doa_deg.hi));
    p.dod = deg2rad(rng.uniform(cfg.r2c_dod_deg.lo, cfg.r2c_dod_deg.hi));
    p.delay = rng.uniform_int(tlo, thi);
    p.var = r2c_var;
    inst.radar_to_comm.push_back(p);
  }

  inst.finalize();
  return inst;
}

ScenarioConfig scenario_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("scenario config: invalid JSON: ") + e.what());
  }
  check_keys(j, {"dims", "noise", "power", "ratios_db", "target", "clutter", "comm_to_radar",
                 "comm", "radar_to_comm"},
             "top level");
  ScenarioConfig cfg;

  if (j.contains("dims")) {
    const auto& d = j["dims"];
    check_keys(d, {"mt", "mr", "nt", "nr", "d", "k_pulse", "k_pri"}, "dims");
    if (d.contains("mt")) cfg.dims.mt = d["mt"].get<int>();
    if (d.contains("mr")) cfg.dims.mr = d["mr"].get<int>();
    if (d.contains("nt")) cfg.dims.nt = d["nt"].get<int>();
    if (d.contains("nr")) cfg.dims.nr = d["nr"].get<int>();
    if (d.contains("d")) cfg.dims.d = d["d"].get<int>();
    if (d.contains("k_pulse")) cfg.dims.k_pulse = d["k_pulse"].get<int>();
    if (d.contains("k_pri")) cfg.dims.k_pri = d["k_pri"].get<int>();
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    check_keys(n, {"sigma_r_sq", "sigma_c_sq"}, "noise");
    if (n.contains("sigma_r_sq")) cfg.sigma_r_sq = n["sigma_r_sq"].get<double>();
    if (n.contains("sigma_c_sq")) cfg.sigma_c_sq = n["sigma_c_sq"].get<double>();
  }
  if (j.contains("power")) {
    const auto& p = j["power"];
    check_keys(p, {"p_r", "p_b"}, "power");
    if (p.contains("p_r")) cfg.p_r = p["p_r"].get<double>();
    if (p.contains("p_b")) cfg.p_b = p["p_b"].get<double>();
  }
  if (j.contains("ratios_db")) {
    const auto& r = j["ratios_db"];
    check_keys(r, {"snr_r_direct", "snr_r_indirect", "cnr_r", "inr_r", "snr_c", "inr_c"},
               "ratios_db");
    if (r.contains("snr_r_direct")) cfg.snr_r_direct_db = r["snr_r_direct"].get<double>();
    if (r.contains("snr_r_indirect")) cfg.snr_r_indirect_db = r["snr_r_indirect"].get<double>();
    if (r.contains("cnr_r")) cfg.cnr_r_db = r["cnr_r"].get<double>();
    if (r.contains("inr_r")) cfg.inr_r_db = r["inr_r"].get<double>();
    if (r.contains("snr_c")) cfg.snr_c_db = r["snr_c"].get<double>();
    if (r.contains("inr_c")) cfg.inr_c_db = r["inr_c"].get<double>();
  }
  if (j.contains("target")) {
    const auto& t = j["target"];
    check_keys(t, {"theta0_deg", "patch_angles_deg", "num_patches", "patch_range_deg"}, "target");
    if (t.contains("theta0_deg")) cfg.theta0_deg = t["theta0_deg"].get<double>();
    if (t.contains("patch_angles_deg")) {
      cfg.patch_angles_deg = t["patch_angles_deg"].get<std::vector<double>>();
    } else if (t.contains("num_patches")) {
      cfg.patch_angles_deg.clear();
      cfg.num_patches = t["num_patches"].get<int>();
      if (t.contains("patch_range_deg"))
        cfg.patch_range_deg = range_from(t["patch_range_deg"], "target.patch_range_deg");
    }
  }
  if (j.contains("clutter")) {
    const auto& c = j["clutter"];
    check_keys(c, {"count", "angle_range_deg", "delay_range"}, "clutter");
    if (c.contains("count")) cfg.num_clutter = c["count"].get<int>();
    if (c.contains("angle_range_deg"))
      cfg.clutter_range_deg = range_from(c["angle_range_deg"], "clutter.angle_range_deg");
    if (c.contains("delay_range")) {
      const auto& dr = c["delay_range"];
      if (!dr.is_array() || dr.size() != 2)
        throw std::runtime_error("scenario config: clutter.delay_range must be [lo, hi]");
      cfg.clutter_delay_lo = dr[0].get<int>();
      cfg.clutter_delay_hi = dr[1].get<int>();
    }
  }
  auto parse_cross = [](const json& node, const char* ctx, int& count, AngleRangeDeg& doa,
                        AngleRangeDeg& dod) {
    check_keys(node, {"count", "doa_range_deg", "dod_range_deg"}, ctx);
    if (node.contains("count")) count = node["count"].get<int>();
    if (node.contains("doa_range_deg"))
      doa = range_from(node["doa_range_deg"], std::string(ctx) + ".doa_range_deg");
    if (node.contains("dod_range_deg"))
      dod = range_from(node["dod_range_deg"], std::string(ctx) + ".dod_range_deg");
  };
  if (j.contains("comm_to_radar"))
    parse_cross(j["comm_to_radar"], "comm_to_radar", cfg.num_comm_to_radar, cfg.c2r_doa_deg,
                cfg.c2r_dod_deg);
  if (j.contains("comm"))
    parse_cross(j["comm"], "comm", cfg.num_comm_paths, cfg.comm_doa_deg, cfg.comm_dod_deg);
  if (j.contains("radar_to_comm")) {
    const auto& r = j["radar_to_comm"];
    check_keys(r, {"count", "doa_range_deg", "dod_range_deg", "delay_range"}, "radar_to_comm");
    if (r.contains("count")) cfg.num_radar_to_comm = r["count"].get<int>();
    if (r.contains("doa_range_deg"))
      cfg.r2c_doa_deg = range_from(r["doa_range_deg"], "radar_to_comm.doa_range_deg");
    if (r.contains("dod_range_deg"))
      cfg.r2c_dod_deg = range_from(r["dod_range_deg"], "radar_to_comm.dod_range_deg");
    if (r.contains("delay_range")) {
      const auto& dr = r["delay_range"];
      if (!dr.is_array() || dr.size() != 2)
        throw std::runtime_error("scenario config: radar_to_comm.delay_range must be [lo, hi]");
      cfg.r2c_delay_lo = dr[0].get<int>();
      cfg.r2c_delay_hi = dr[1].get<int>();
    }
  }
  cfg.dims.validate();
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_config_from_json_text(buf.str());
}

std::string scenario_config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["dims"] = {{"mt", cfg.dims.mt},         {"mr", cfg.dims.mr},     {"nt", cfg.dims.nt},
               {"nr", cfg.dims.nr},         {"d", cfg.dims.d},       {"k_pulse", cfg.dims.k_pulse},
               {"k_pri", cfg.dims.k_pri}};
  j["noise"] = {{"sigma_r_sq", cfg.sigma_r_sq}, {"sigma_c_sq", cfg.sigma_c_sq}};
  j["power"] = {{"p_r", cfg.p_r}, {"p_b", cfg.p_b}};
  j["ratios_db"] = {{"snr_r_direct", cfg.snr_r_direct_db},
                    {"snr_r_indirect", cfg.snr_r_indirect_db},
                    {"cnr_r", cfg.cnr_r_db},
                    {"inr_r", cfg.inr_r_db},
                    {"snr_c", cfg.snr_c_db},
                    {"inr_c", cfg.inr_c_db}};
  j["target"]["theta0_deg"] = cfg.theta0_deg;
  if (!cfg.patch_angles_deg.empty()) {
    j["target"]["patch_angles_deg"] = cfg.patch_angles_deg;
  } else {
    j["target"]["num_patches"] = cfg.num_patches;
    j["target"]["patch_range_deg"] = {cfg.patch_range_deg.lo, cfg.patch_range_deg.hi};
  }
  j["clutter"] = {{"count", cfg.num_clutter},
                  {"angle_range_deg", {cfg.clutter_range_deg.lo, cfg.clutter_range_deg.hi}},
                  {"delay_range", {cfg.clutter_delay_lo, cfg.clutter_delay_hi}}};
  j["comm_to_radar"] = {{"count", cfg.num_comm_to_radar},
                        {"doa_range_deg", {cfg.c2r_doa_deg.lo, cfg.c2r_doa_deg.hi}},
                        {"dod_range_deg", {cfg.c2r_dod_deg.lo, cfg.c2r_dod_deg.hi}}};
  j["comm"] = {{"count", cfg.num_comm_paths},
               {"doa_range_deg", {cfg.comm_doa_deg.lo, cfg.comm_doa_deg.hi}},
               {"dod_range_deg", {cfg.comm_dod_deg.lo, cfg.comm_dod_deg.hi}}};
  j["radar_to_comm"] = {{"count", cfg.num_radar_to_comm},
                        {"doa_range_deg", {cfg.r2c_doa_deg.lo, cfg.r2c_doa_deg.hi}},
                        {"dod_range_deg", {cfg.r2c_dod_deg.lo, cfg.r2c_dod_deg.hi}},
                        {"delay_range", {cfg.r2c_delay_lo, cfg.r2c_delay_hi}}};
  return j.dump(2);
}

}  // namespace crc
