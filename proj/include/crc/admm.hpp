#pragma once

#include <functional>

#include "crc/linalg.hpp"

namespace crc {

// Quadratic inequality v^H q v - 2 Re(l v) + c <= 0 with Hermitian PSD q.
struct QuadConstraint {
  MatC q;
  RowVecC l;
  double c = 0.0;

  double g(const VecC& v) const;
};

struct AdmmParams {
  double rho = 100.0;
  double tol = 1e-6;
  int max_iter = 2000;
};

struct AdmmResult {
  VecC v;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

// Minimize v^H quad_cost v subject to ||v||^2 <= ball_radius_sq and
// constraint.g(v) <= 0, by consensus ADMM with one projection copy per set.
AdmmResult admm_qcqp(const MatC& quad_cost, double ball_radius_sq,
                     const QuadConstraint& constraint, const VecC& v_init,
                     const AdmmParams& params = {});

// Exact minimizer of v^H q v - 2 Re(l v) over ||v||^2 <= radius_sq
// (trust-region subproblem: eigendecomposition plus multiplier bisection).
VecC minimize_quadratic_on_ball(const MatC& q, const RowVecC& l, double radius_sq);

// Root of a continuous decreasing function on [lo, +inf): doubles hi until
// f(hi) <= 0, then bisects the bracket.
double bisection_root(const std::function<double(double)>& f, double lo, double hi_init);

// Alternating projection onto the intersection of the sphere ||s||^2 = sphere_sq
// and the per-entry modulus box |s_i|^2 <= cap_sq; always lands exactly on the
// sphere, with box violations vanishing as the alternation converges.
VecC project_sphere_box(const VecC& s, double sphere_sq, double cap_sq);

}  // namespace crc
