// Command-line front end: scenario sweeps, joint designs, and the built-in
// verification suite.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "crc/experiments.hpp"
#include "crc/validation.hpp"

namespace {

int run_sweep_command(const std::string& config_path, const std::string& out_dir, int threads,
                      const std::string& dump_dir) {
  if (!dump_dir.empty()) {
    crc::ensure_directory(dump_dir);
    crc::set_sdp_dump_dir(dump_dir);
  }
  const crc::SweepConfig cfg = crc::load_sweep_config(config_path);
  const int workers = threads > 0 ? threads : crc::resolve_thread_count();
  std::printf("sweep '%s': parameter=%s, %d value(s) x %d trial(s), %d worker(s)\n",
              cfg.name.c_str(), cfg.parameter.c_str(),
              static_cast<int>(cfg.parameter == "baseline" ? cfg.baseline_values.size()
                               : cfg.parameter == "none"   ? 1
                                                           : cfg.values.size()),
              cfg.trials, workers);
  const auto points = crc::run_sweep(cfg, workers);
  crc::write_sweep_outputs(out_dir, cfg, points);
  crc::write_sweep_gnuplot(out_dir, cfg);
  for (const auto& row : crc::summarize_sweep(cfg, points))
    std::printf("  %-12s mean SINR %9.4f dB, mean rate %8.4f nats, %s\n", row.value_label.c_str(),
                row.mean_sinr_db, row.mean_rate_nats,
                row.all_converged ? "all converged" : "NOT all converged");
  std::printf("wrote %s/%s.csv\n", out_dir.c_str(), cfg.name.c_str());
  return 0;
}

int run_codesign_command(const std::string& scenario_path, const std::string& mode,
                         const std::string& baseline, const std::string& out_dir,
                         std::uint64_t seed, double mi_min, double similarity, double papr_bound,
                         const std::string& dump_dir) {
  if (!dump_dir.empty()) {
    crc::ensure_directory(dump_dir);
    crc::set_sdp_dump_dir(dump_dir);
  }
  crc::ScenarioConfig scfg;
  if (!scenario_path.empty()) scfg = crc::load_scenario_config(scenario_path);
  const crc::ScenarioInstance inst = crc::sample_scenario(scfg, seed);

  crc::CodesignParams params;
  params.mode = mode == "papr" ? crc::WaveformMode::papr : crc::WaveformMode::similarity;
  params.baseline = crc::parse_baseline(baseline);
  params.mi_min = mi_min;
  params.similarity = similarity;
  params.papr_bound = papr_bound;

  const crc::CodesignResult res = crc::run_codesign(inst, params);

  crc::ensure_directory(out_dir);
  crc::write_design_json(out_dir + "/design.json", res);
  crc::write_history_csv(out_dir + "/history.csv", res.history);
  crc::write_precoder_trace_csv(out_dir + "/precoder_trace.csv", res.last_precoder_trace);
  crc::write_waveform_trace_csv(out_dir + "/waveform_trace.csv", res.last_waveform_trace);
  crc::write_beampattern_csv(out_dir + "/beampattern.csv", inst, res.filter.w, res.s);

  std::printf("codesign (%s, baseline %s): SINR %.4f dB, rate %.4f nats, %d outer iteration(s)%s\n",
              mode.c_str(), crc::baseline_to_string(params.baseline).c_str(),
              10.0 * std::log10(res.sinr > 0 ? res.sinr : 1e-300), res.rate_nats,
              res.outer_iterations, res.converged ? "" : " (no convergence)");
  if (!res.precoder_feasible || !res.waveform_feasible)
    std::printf("warning: rate floor unreachable for %s\n",
                !res.precoder_feasible ? "the precoder stage" : "the waveform stage");
  std::printf("wrote %s/design.json\n", out_dir.c_str());
  return res.converged ? 0 : 3;
}

int run_validate_command(std::uint64_t seed, int threads, bool quick) {
  const int workers = threads > 0 ? threads : crc::resolve_thread_count();
  std::vector<crc::CriterionResult> results;
  if (quick) {
    results.push_back(crc::check_rate_identity(seed));
    results.push_back(crc::check_leakage_identity(seed));
    results.push_back(crc::check_surrogates(seed));
    results.push_back(crc::check_filter_optimality(seed));
    results.push_back(crc::check_sdp_kernel(seed));
    results.push_back(crc::check_rank_reduction(seed));
    results.push_back(crc::check_admm_vs_ipm(seed));
  } else {
    results = crc::run_all_criteria(seed, workers);
  }
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%s\n", crc::format_criterion(r).c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%s\n", all_pass ? "all checks passed" : "some checks FAILED");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint radar/communication coexistence designer"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", dump_dir;
  int threads = 0;

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--threads", threads, "worker threads (default: CRC_THREADS or hardware)");
  sweep->add_option("--dump-sdp", dump_dir, "directory for per-solve conic problem dumps");

  std::string scenario_path, mode = "similarity", baseline = "none";
  std::uint64_t seed = 1;
  double mi_min = 7.0, similarity = 0.7, papr_bound = 3.0;

  CLI::App* codesign = app.add_subcommand("codesign", "run one joint design");
  codesign->add_option("--scenario", scenario_path, "scenario config JSON (default: built-in)");
  codesign->add_option("--mode", mode, "waveform constraint mode")
      ->check(CLI::IsMember({"similarity", "papr"}));
  codesign->add_option("--baseline", baseline,
                       "comma-separated blocks to freeze: none|fixed_v|fixed_s|fixed_w");
  codesign->add_option("--out", out_dir, "output directory");
  codesign->add_option("--seed", seed, "scenario draw seed");
  codesign->add_option("--mi-min", mi_min, "average-rate floor (nats)");
  codesign->add_option("--similarity", similarity, "similarity budget fraction");
  codesign->add_option("--papr-bound", papr_bound, "peak-to-average power cap");
  codesign->add_option("--dump-sdp", dump_dir, "directory for per-solve conic problem dumps");

  bool quick = false;
  CLI::App* validate = app.add_subcommand("validate", "run the verification suite");
  validate->add_option("--seed", seed, "base seed");
  validate->add_option("--threads", threads, "worker threads");
  validate->add_flag("--quick", quick, "skip the long design-suite checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return run_sweep_command(config_path, out_dir, threads, dump_dir);
    if (codesign->parsed())
      return run_codesign_command(scenario_path, mode, baseline, out_dir, seed, mi_min,
                                  similarity, papr_bound, dump_dir);
    if (validate->parsed()) return run_validate_command(seed, threads, quick);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
