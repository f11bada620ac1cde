#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crc {

// One verification check: an executable property of the implementation,
// reported as pass/fail with a human-readable measurement summary.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

CriterionResult check_rate_identity(std::uint64_t seed);       // two independent rate routes agree
CriterionResult check_leakage_identity(std::uint64_t seed);    // quadratic-form vs filtered-power route
CriterionResult check_surrogates(std::uint64_t seed);          // tightness, minorant, gradient match
CriterionResult check_filter_optimality(std::uint64_t seed);   // no random filter beats the update
CriterionResult check_sdp_kernel(std::uint64_t seed);          // KKT residuals + analytic instances
CriterionResult check_rank_reduction(std::uint64_t seed);      // rank-one output, preserved functionals
CriterionResult check_admm_vs_ipm(std::uint64_t seed);         // inner solver against a lifted oracle

// The design-suite checks share one batch of full-size runs:
// monotone logged iterations and runtimes, qualitative trends, and the
// final-design constraint audit.
std::vector<CriterionResult> check_design_suite(std::uint64_t seed, int threads);

// All checks in order 1..10.
std::vector<CriterionResult> run_all_criteria(std::uint64_t seed, int threads);

// "PASS criterion 3 (...) detail" / "FAIL ..." one-liner.
std::string format_criterion(const CriterionResult& r);

}  // namespace crc
