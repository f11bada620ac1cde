#include "crc/validation.hpp"

#include <sstream>

namespace crc {

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.index << " (" << r.name << "): "
      << r.detail;
  return out.str();
}

namespace {
CriterionResult placeholder(int index, const char* name) {
  return {index, name, false, "not implemented yet"};
}
}  // namespace

CriterionResult check_rate_identity(std::uint64_t) { return placeholder(1, "rate identity"); }
CriterionResult check_leakage_identity(std::uint64_t) { return placeholder(2, "leakage identity"); }
CriterionResult check_surrogates(std::uint64_t) { return placeholder(3, "surrogates"); }
CriterionResult check_filter_optimality(std::uint64_t) { return placeholder(4, "filter"); }
CriterionResult check_sdp_kernel(std::uint64_t) { return placeholder(5, "sdp kernel"); }
CriterionResult check_rank_reduction(std::uint64_t) { return placeholder(6, "rank reduction"); }
CriterionResult check_admm_vs_ipm(std::uint64_t) { return placeholder(7, "admm vs ipm"); }
std::vector<CriterionResult> check_design_suite(std::uint64_t, int) {
  return {placeholder(8, "monotonicity"), placeholder(9, "trends"), placeholder(10, "audit")};
}

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed, int threads) {
  std::vector<CriterionResult> out;
  out.push_back(check_rate_identity(seed));
  out.push_back(check_leakage_identity(seed));
  out.push_back(check_surrogates(seed));
  out.push_back(check_filter_optimality(seed));
  out.push_back(check_sdp_kernel(seed));
  out.push_back(check_rank_reduction(seed));
  out.push_back(check_admm_vs_ipm(seed));
  for (auto& r : check_design_suite(seed, threads)) out.push_back(std::move(r));
  return out;
}

}  // namespace crc
