#pragma once

// Dense solver stack for the small complex Hermitian semidefinite programs
// the designers produce: a primal-dual path-following interior-point method
// on the real embedding (Nesterov-Todd scaling, predictor-corrector), a
// linear-fractional wrapper that homogenizes ratio objectives with a scalar
// block, and a rank-reduction post-processor that walks an optimal face
// down to a rank-one solution while preserving selected trace functionals.

#include "crc/linalg.hpp"

#include <string>
#include <vector>

namespace crc {

enum class ConstraintSense { le, ge, eq };

struct SdpConstraint {
  MatC a;  // Hermitian coefficient of tr(a S)
  ConstraintSense sense = ConstraintSense::le;
  double b = 0.0;
};

struct SdpProblem {
  int n = 0;             // complex dimension of the Hermitian variable
  bool maximize = false;
  MatC c;                // objective tr(c S)
  std::vector<SdpConstraint> constraints;
};

enum class SdpStatus {
  optimal,
  infeasible,               // primal infeasibility certificate found
  degenerate_denominator,   // fractional problems: homogenization scale collapsed
  numerical_failure,
  max_iterations,
};
const char* to_string(SdpStatus s);

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  MatC s;                    // Hermitian PSD primal variable
  VecR y;                    // multipliers, one per constraint (minimization orientation)
  double objective = 0.0;    // tr(c s), in the problem's own orientation
  double primal_infeas = 0.0;  // scaled constraint residual
  double dual_infeas = 0.0;    // scaled dual residual
  double gap = 0.0;            // scaled complementarity gap
  int iterations = 0;
};

struct SdpParams {
  double tol = 1e-9;   // target for scaled residuals and gap
  int max_iter = 100;
};

SdpSolution solve_sdp(const SdpProblem& prob, const SdpParams& params = {});

/// When set to a non-empty directory, every subsequent solve serializes its
/// problem there as sequence-numbered self-describing JSON.
void set_sdp_dump_dir(const std::string& dir);

struct FractionalSdpResult {
  SdpStatus status = SdpStatus::numerical_failure;
  MatC s;              // de-homogenized solution
  double value = 0.0;  // achieved ratio
  double t = 0.0;      // homogenization scale
  VecR y;              // multipliers of the homogenized problem
};

/// Maximizes tr(num S) / (tr(den S) + den_const) over S >= 0 under the given
/// trace constraints (all must be positively homogeneous in S for the
/// homogenization to be exact, which trace constraints are). den must be PSD
/// and den_const >= 0 with at least one of them nonzero on the feasible set.
FractionalSdpResult solve_fractional_sdp(const MatC& num, const MatC& den, double den_const,
                                         const std::vector<SdpConstraint>& constraints,
                                         const SdpParams& params = {});

struct RankReductionResult {
  MatC s;
  int rank = 0;    // numerical rank of the output
  int steps = 0;   // face-walking steps taken
  bool nullspace_exhausted = false;  // true when no further step direction existed
};

/// Reduces the rank of PSD `s` while keeping tr(a s) fixed for every matrix
/// in `preserve`. Each step moves along a Hermitian nullspace direction of
/// the compressed constraints and strictly lowers the rank; stops at rank
/// one or when the compressed system has no nullspace.
RankReductionResult rank_reduction(const MatC& s, const std::vector<MatC>& preserve,
                                   double rank_rel_tol = 1e-6);

}  // namespace crc
