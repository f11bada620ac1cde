#include "crc/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crc/radar_metrics.hpp"

namespace crc {
namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::runtime_error(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

WaveformMode mode_from_string(const std::string& text) {
  if (text == "similarity") return WaveformMode::similarity;
  if (text == "papr") return WaveformMode::papr;
  throw std::runtime_error("unknown waveform mode: " + text);
}

const char* mode_to_string(WaveformMode mode) {
  return mode == WaveformMode::similarity ? "similarity" : "papr";
}

void parse_design(const json& j, CodesignParams& dp) {
  check_keys(j, "design",
             {"mode", "mi_min", "similarity", "papr_bound", "outer_tol", "outer_max_iter",
              "baseline", "sca_tol", "sca_max_iter", "admm_rho", "admm_tol", "admm_max_iter",
              "sdp_tol", "sdp_max_iter", "rank_rel_tol"});
  if (j.contains("mode")) dp.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("mi_min")) dp.mi_min = j.at("mi_min").get<double>();
  if (j.contains("similarity")) dp.similarity = j.at("similarity").get<double>();
  if (j.contains("papr_bound")) dp.papr_bound = j.at("papr_bound").get<double>();
  if (j.contains("outer_tol")) dp.outer_tol = j.at("outer_tol").get<double>();
  if (j.contains("outer_max_iter")) dp.outer_max_iter = j.at("outer_max_iter").get<int>();
  if (j.contains("baseline")) dp.baseline = parse_baseline(j.at("baseline").get<std::string>());
  if (j.contains("sca_tol")) {
    dp.precoder.sca_tol = j.at("sca_tol").get<double>();
    dp.waveform.sca_tol = dp.precoder.sca_tol;
  }
  if (j.contains("sca_max_iter")) {
    dp.precoder.sca_max_iter = j.at("sca_max_iter").get<int>();
    dp.waveform.sca_max_iter = dp.precoder.sca_max_iter;
  }
  if (j.contains("admm_rho")) dp.precoder.admm.rho = j.at("admm_rho").get<double>();
  if (j.contains("admm_tol")) dp.precoder.admm.tol = j.at("admm_tol").get<double>();
  if (j.contains("admm_max_iter")) dp.precoder.admm.max_iter = j.at("admm_max_iter").get<int>();
  if (j.contains("sdp_tol")) dp.waveform.sdp.tol = j.at("sdp_tol").get<double>();
  if (j.contains("sdp_max_iter")) dp.waveform.sdp.max_iter = j.at("sdp_max_iter").get<int>();
  if (j.contains("rank_rel_tol")) dp.waveform.rank_rel_tol = j.at("rank_rel_tol").get<double>();
}

struct SweepCell {
  ScenarioConfig scenario;
  CodesignParams design;
};

SweepCell apply_parameter(const SweepConfig& cfg, double value, const std::string& label) {
  SweepCell cell{cfg.scenario, cfg.design};
  const std::string& p = cfg.parameter;
  if (p == "none") {
  } else if (p == "similarity") {
    cell.design.similarity = value;
  } else if (p == "mi_min") {
    cell.design.mi_min = value;
  } else if (p == "papr_bound") {
    cell.design.papr_bound = value;
  } else if (p == "inr_r_db") {
    cell.scenario.inr_r_db = value;
  } else if (p == "patch_count") {
    const int n = static_cast<int>(std::lround(value));
    if (n < 0) throw std::invalid_argument("patch_count must be non-negative");
    auto& list = cell.scenario.patch_angles_deg;
    if (n <= static_cast<int>(list.size())) {
      list.resize(n);
      cell.scenario.num_patches = n;
    } else {
      list.clear();
      cell.scenario.num_patches = n;
    }
  } else if (p == "baseline") {
    cell.design.baseline = parse_baseline(label);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + p);
  }
  return cell;
}

struct ValueEntry {
  double value;
  std::string label;
};

std::vector<ValueEntry> value_entries(const SweepConfig& cfg) {
  std::vector<ValueEntry> out;
  if (cfg.parameter == "baseline") {
    for (std::size_t i = 0; i < cfg.baseline_values.size(); ++i)
      out.push_back({static_cast<double>(i), cfg.baseline_values[i]});
  } else if (cfg.parameter == "none") {
    out.push_back({0.0, "base"});
  } else {
    for (double v : cfg.values) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g", v);
      out.push_back({v, buf});
    }
  }
  if (out.empty()) throw std::invalid_argument("sweep has no values");
  return out;
}

SweepPoint run_one(const SweepConfig& cfg, int value_index, const ValueEntry& entry, int trial) {
  const SweepCell cell = apply_parameter(cfg, entry.value, entry.label);
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
  const ScenarioInstance inst = sample_scenario(cell.scenario, seed);

  const auto t0 = std::chrono::steady_clock::now();
  const CodesignResult res = run_codesign(inst, cell.design);
  const auto t1 = std::chrono::steady_clock::now();

  SweepPoint pt;
  pt.value_index = value_index;
  pt.value = entry.value;
  pt.value_label = entry.label;
  pt.trial = trial;
  pt.seed = seed;
  pt.sinr_db = 10.0 * std::log10(std::max(res.sinr, 1e-300));
  pt.rate_nats = res.rate_nats;
  pt.leakage = res.leakage;
  pt.outer_iterations = res.outer_iterations;
  pt.converged = res.converged;
  pt.precoder_feasible = res.precoder_feasible;
  pt.waveform_feasible = res.waveform_feasible;
  pt.power_used = res.v.squaredNorm();
  pt.waveform_energy = res.s.squaredNorm();
  const VecC s0 = reference_waveform_lfm(inst.dims, inst.p_r);
  pt.similarity_value = std::real((res.s.adjoint() * (res.s - s0 * (s0.dot(res.s) / inst.p_r))).value());
  pt.papr = papr_of(res.s);
  pt.mi_min = cell.design.mi_min;
  pt.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return pt;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("sweep config is not valid JSON: ") + e.what());
  }
  check_keys(j, "sweep config",
             {"name", "scenario", "design", "parameter", "values", "baseline_values", "trials",
              "seed"});
  SweepConfig cfg;
  if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
  if (j.contains("scenario"))
    cfg.scenario = scenario_config_from_json_text(j.at("scenario").dump());
  if (j.contains("design")) parse_design(j.at("design"), cfg.design);
  if (j.contains("parameter")) cfg.parameter = j.at("parameter").get<std::string>();
  if (j.contains("values")) cfg.values = j.at("values").get<std::vector<double>>();
  if (j.contains("baseline_values"))
    cfg.baseline_values = j.at("baseline_values").get<std::vector<std::string>>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (cfg.trials <= 0) throw std::runtime_error("sweep trials must be positive");
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str());
}

int resolve_thread_count() {
  if (const char* env = std::getenv("CRC_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<SweepPoint> run_sweep(const SweepConfig& cfg, int threads) {
  const std::vector<ValueEntry> entries = value_entries(cfg);
  const int cells = static_cast<int>(entries.size()) * cfg.trials;
  std::vector<SweepPoint> points(cells);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= cells || failed.load()) break;
      const int vi = idx / cfg.trials;
      const int trial = idx % cfg.trials;
      try {
        points[idx] = run_one(cfg, vi, entries[vi], trial);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_message.empty()) error_message = e.what();
      }
    }
  };

  const int n_workers = std::max(1, std::min(threads, cells));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("sweep cell failed: " + error_message);
  return points;
}

std::vector<SweepSummaryRow> summarize_sweep(const SweepConfig& cfg,
                                             const std::vector<SweepPoint>& points) {
  std::vector<SweepSummaryRow> rows;
  for (const SweepPoint& pt : points) {
    if (pt.value_index >= static_cast<int>(rows.size())) rows.resize(pt.value_index + 1);
    SweepSummaryRow& row = rows[pt.value_index];
    row.value = pt.value;
    row.value_label = pt.value_label;
    row.trials += 1;
    row.mean_sinr_db += pt.sinr_db;
    row.mean_rate_nats += pt.rate_nats;
    row.mean_outer_iterations += pt.outer_iterations;
    row.all_converged = row.all_converged && pt.converged;
    row.all_feasible = row.all_feasible && pt.precoder_feasible && pt.waveform_feasible;
  }
  (void)cfg;
  for (SweepSummaryRow& row : rows) {
    if (row.trials == 0) continue;
    row.mean_sinr_db /= row.trials;
    row.mean_rate_nats /= row.trials;
    row.mean_outer_iterations /= row.trials;
  }
  return rows;
}

std::string format_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

void ensure_directory(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_sweep_outputs(const std::string& dir, const SweepConfig& cfg,
                         const std::vector<SweepPoint>& points) {
  ensure_directory(dir);
  {
    std::ofstream out(dir + "/" + cfg.name + ".csv");
    out << "parameter,value,value_label,trial,seed,sinr_db,rate_nats,leakage,outer_iterations,"
           "converged,precoder_feasible,waveform_feasible,power_used,waveform_energy,"
           "similarity_value,papr,mi_min,elapsed_ms\n";
    for (const SweepPoint& pt : points) {
      out << cfg.parameter << ',' << format_sig(pt.value) << ',' << pt.value_label << ','
          << pt.trial << ',' << pt.seed << ',' << format_sig(pt.sinr_db) << ','
          << format_sig(pt.rate_nats) << ',' << format_sig(pt.leakage) << ','
          << pt.outer_iterations << ',' << (pt.converged ? 1 : 0) << ','
          << (pt.precoder_feasible ? 1 : 0) << ',' << (pt.waveform_feasible ? 1 : 0) << ','
          << format_sig(pt.power_used) << ',' << format_sig(pt.waveform_energy) << ','
          << format_sig(pt.similarity_value) << ',' << format_sig(pt.papr) << ','
          << format_sig(pt.mi_min) << ',' << format_sig(pt.elapsed_ms) << '\n';
    }
  }
  {
    std::ofstream out(dir + "/" + cfg.name + "_summary.csv");
    out << "value,value_label,trials,mean_sinr_db,mean_rate_nats,mean_outer_iterations,"
           "all_converged,all_feasible\n";
    for (const SweepSummaryRow& row : summarize_sweep(cfg, points)) {
      out << format_sig(row.value) << ',' << row.value_label << ',' << row.trials << ','
          << format_sig(row.mean_sinr_db) << ',' << format_sig(row.mean_rate_nats) << ','
          << format_sig(row.mean_outer_iterations) << ',' << (row.all_converged ? 1 : 0) << ','
          << (row.all_feasible ? 1 : 0) << '\n';
    }
  }
}

void write_sweep_gnuplot(const std::string& dir, const SweepConfig& cfg) {
  ensure_directory(dir);
  std::ofstream out(dir + "/" + cfg.name + ".gp");
  out << "set datafile separator ','\n"
      << "set key left top\n"
      << "set xlabel '" << cfg.parameter << "'\n"
      << "set ylabel 'mean SINR (dB)'\n"
      << "set grid\n"
      << "set term pngcairo size 900,600\n"
      << "set output '" << cfg.name << ".png'\n"
      << "plot '" << cfg.name << "_summary.csv' every ::1 using 1:4 with linespoints "
      << "pointtype 7 title 'mean SINR'\n";
}

void write_history_csv(const std::string& path, const std::vector<CodesignHistoryRow>& rows) {
  std::ofstream out(path);
  out << "outer_iter,sinr_db,rate_nats\n";
  for (const auto& r : rows)
    out << r.outer_iter << ',' << format_sig(r.sinr_db) << ',' << format_sig(r.rate_nats) << '\n';
}

void write_precoder_trace_csv(const std::string& path, const std::vector<PrecoderTraceRow>& rows) {
  std::ofstream out(path);
  out << "iter,r_of_v,rate_nats,admm_iters\n";
  for (const auto& r : rows)
    out << r.iter << ',' << format_sig(r.r_of_v) << ',' << format_sig(r.rate_nats) << ','
        << r.admm_iters << '\n';
}

void write_waveform_trace_csv(const std::string& path, const std::vector<WaveformTraceRow>& rows) {
  std::ofstream out(path);
  out << "iter,sinr_db,rate_nats,rank_before_reduction,papr\n";
  for (const auto& r : rows)
    out << r.iter << ',' << format_sig(r.sinr_db) << ',' << format_sig(r.rate_nats) << ','
        << r.rank_before_reduction << ',' << format_sig(r.papr) << '\n';
}

void write_beampattern_csv(const std::string& path, const ScenarioInstance& inst, const VecC& w,
                           const VecC& s) {
  const int points = 361;  // [-90, 90] in half-degree steps
  VecR grid(points);
  for (int i = 0; i < points; ++i) grid(i) = deg2rad(-90.0 + 0.5 * i);
  const VecR pattern = beampattern_db(inst, w, s, grid);
  std::ofstream out(path);
  out << "angle_deg,gain_db\n";
  for (int i = 0; i < points; ++i)
    out << format_sig(rad2deg(grid(i))) << ',' << format_sig(pattern(i)) << '\n';
}

namespace {

json complex_matrix_json(const MatC& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries_row_major", entries}};
}

}  // namespace

void write_design_json(const std::string& path, const CodesignResult& result) {
  json j;
  j["sinr"] = result.sinr;
  j["sinr_db"] = 10.0 * std::log10(std::max(result.sinr, 1e-300));
  j["rate_nats"] = result.rate_nats;
  j["leakage"] = result.leakage;
  j["outer_iterations"] = result.outer_iterations;
  j["converged"] = result.converged;
  j["stalled"] = result.stalled;
  j["precoder_feasible"] = result.precoder_feasible;
  j["waveform_feasible"] = result.waveform_feasible;
  j["filter_sinr"] = result.filter.sinr;
  j["V"] = complex_matrix_json(result.v);
  j["s"] = complex_matrix_json(result.s);
  j["w"] = complex_matrix_json(result.filter.w);
  j["history"] = json::array();
  for (const auto& r : result.history)
    j["history"].push_back(
        {{"outer_iter", r.outer_iter}, {"sinr_db", r.sinr_db}, {"rate_nats", r.rate_nats}});
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace crc
