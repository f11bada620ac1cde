#pragma once

// Geometry and channel model for a co-located pulsed MIMO radar sharing
// spectrum with a MIMO downlink. Builds every propagation operator the
// metric and design layers consume: target/clutter returns stacked over
// the pulse samples, downlink-to-radar leakage, downlink multipath, and
// the delayed radar-to-user interference selectors.
//
// Conventions: angles in radians, indices 0-based, vec() is column-major,
// one pulse-repetition interval is modeled per pulse (periodic extension
// covers earlier intervals).

#include "crc/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crc {

struct SystemDims {
  int mt = 8;       // radar transmit elements
  int mr = 18;      // radar receive elements
  int nt = 10;      // downlink transmit antennas
  int nr = 4;       // user receive antennas
  int d = 4;        // spatial data streams
  int k_pulse = 4;  // fast-time samples per radar pulse
  int k_pri = 60;   // fast-time samples per pulse-repetition interval

  int radar_tx_len() const { return mt * k_pulse; }  // length of the stacked waveform
  int radar_rx_len() const { return mr * k_pulse; }  // length of the stacked receive filter
  int precoder_len() const { return nt * d; }        // length of the stacked precoder

  /// Throws std::invalid_argument when any dimension is non-physical
  /// (non-positive, d > min(nt, nr), or k_pulse > k_pri).
  void validate() const;
};

/// Unit-norm uniform-linear-array steering vector
/// (1/sqrt(n)) [1, e^{-j pi sin(angle)}, ..., e^{-j pi (n-1) sin(angle)}]^T.
VecC steering_vector(int n, double angle_rad);

/// n-by-n matrix with ones where row - col == k, zeros elsewhere.
MatR shift_matrix(int n, int k);

/// Fast-time sample of the pulse that a radar emission delayed by `tau`
/// contributes at interval sample `k` (0-based), or -1 when the delayed
/// pulse does not cover that sample. Accounts for spill-over of the
/// previous interval's pulse into the current one.
int pulse_sample_index(int tau, int k, const SystemDims& dims);

struct TargetPath {
  double angle = 0.0;  // radians
  double var = 1.0;    // second moment of the return amplitude
};

struct ClutterPath {
  double angle = 0.0;
  int delay = 0;  // fast-time sample offset, may be negative
  double var = 1.0;
};

struct CrossPath {  // angle pair without delay (downlink-to-radar, downlink multipath)
  double doa = 0.0;
  double dod = 0.0;
  double var = 1.0;
};

struct DelayPath {  // radar-to-user leakage: angle pair plus fast-time delay
  double doa = 0.0;
  double dod = 0.0;
  int delay = 0;  // in [0, k_pri)
  double var = 1.0;
};

struct ScenarioInstance {
  SystemDims dims;
  double sigma_r_sq = 1.0;  // radar receiver noise power
  double sigma_c_sq = 1.0;  // user receiver noise power
  double p_r = 10.0;        // radar waveform energy budget
  double p_b = 1.0;         // downlink precoder power budget
  TargetPath target;                   // direct return
  std::vector<TargetPath> patches;     // indirect returns scattered off nearby patches
  std::vector<ClutterPath> clutter;    // signal-dependent clutter
  std::vector<CrossPath> comm_to_radar;
  std::vector<CrossPath> comm_paths;   // downlink propagation paths
  std::vector<DelayPath> radar_to_comm;

  // Cached operators, filled by finalize().
  std::vector<MatC> h_target;         // direct + per-patch return operators (mr*k x mt*k)
  std::vector<MatC> h_clutter;        // per-clutter-path return operators (mr*k x mt*k)
  std::vector<MatC> h_comm_to_radar;  // stacked leakage operators (mr*k x nt*k)
  std::vector<MatC> t_comm_to_radar;  // single-sample leakage factors (mr x nt)
  std::vector<MatC> g_comm;           // downlink path matrices (nr x nt)
  std::vector<VecC> r2c_rx_steer;     // user-side steering per leakage path (nr)
  std::vector<VecC> r2c_tx_steer;     // radar-side steering per leakage path (mt)

  /// Validates dimensions/path parameters and builds the cached operators.
  void finalize();

  bool finalized() const { return !h_target.empty(); }
};

/// Radar-to-user interference operator for leakage path `i` at interval
/// sample `k`: zero except one mt-column block carrying the rank-one
/// steering outer product when the delayed pulse covers sample k.
/// Dimensions nr x (mt * k_pulse).
MatC radar_to_comm_matrix(const ScenarioInstance& inst, int i, int k);

struct AngleRangeDeg {
  double lo = 0.0;
  double hi = 0.0;
};

// Sampling recipe for random scenario draws. Power ratios are in dB relative
// to the respective receiver noise floor and are converted to per-path
// amplitude variances against the transmit budgets.
struct ScenarioConfig {
  SystemDims dims;
  double sigma_r_sq = 1.0;
  double sigma_c_sq = 1.0;
  double p_r = 10.0;
  double p_b = 1.0;

  double snr_r_direct_db = 20.0;    // direct target return
  double snr_r_indirect_db = 18.0;  // patch returns
  double cnr_r_db = 30.0;           // clutter
  double inr_r_db = 20.0;           // downlink-to-radar leakage
  double snr_c_db = 25.0;           // downlink signal paths
  double inr_c_db = 40.0;           // radar-to-user leakage

  double theta0_deg = 20.0;                          // direct-path angle
  std::vector<double> patch_angles_deg{-10.0, -17.0, -25.0};  // fixed patch list
  int num_patches = 3;                               // used when the fixed list is empty
  AngleRangeDeg patch_range_deg{-30.0, -5.0};

  int num_clutter = 5;
  AngleRangeDeg clutter_range_deg{0.0, 10.0};
  int clutter_delay_lo = -3;  // defaults rewritten to +/-(k_pulse-1) when out of range
  int clutter_delay_hi = 3;

  int num_comm_to_radar = 6;
  AngleRangeDeg c2r_doa_deg{30.0, 50.0};
  AngleRangeDeg c2r_dod_deg{-90.0, 90.0};

  int num_comm_paths = 3;
  AngleRangeDeg comm_doa_deg{-90.0, 90.0};
  AngleRangeDeg comm_dod_deg{-90.0, 90.0};

  int num_radar_to_comm = 6;
  AngleRangeDeg r2c_doa_deg{-10.0, 20.0};
  AngleRangeDeg r2c_dod_deg{30.0, 70.0};
  int r2c_delay_lo = 0;
  int r2c_delay_hi = -1;  // -1 means k_pri - 1
};

/// Draws one finalized scenario from the recipe with a dedicated seed.
ScenarioInstance sample_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Parses a config from its JSON form (angles in degrees). Unknown keys are
/// rejected; missing keys keep their defaults. Throws std::runtime_error on
/// malformed input.
ScenarioConfig scenario_config_from_json_text(const std::string& text);

/// Loads and parses a JSON config file.
ScenarioConfig load_scenario_config(const std::string& path);

/// Serializes a config back to JSON text (angles in degrees).
std::string scenario_config_to_json_text(const ScenarioConfig& cfg);

inline double deg2rad(double deg) { return deg * M_PI / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace crc
