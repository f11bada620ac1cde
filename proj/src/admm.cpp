#include "crc/admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crc {

double QuadConstraint::g(const VecC& v) const {
  return std::real((v.adjoint() * q * v).value()) - 2.0 * std::real((l * v).value()) + c;
}

double bisection_root(const std::function<double(double)>& f, double lo, double hi_init) {
  double hi = std::max(hi_init, lo + 1e-12);
  if (f(lo) <= 0.0) return lo;
  int doublings = 0;
  while (f(hi) > 0.0) {
    if (++doublings > 200) return hi;  // no sign change within range; best effort
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

VecC minimize_quadratic_on_ball(const MatC& q, const RowVecC& l, double radius_sq) {
  const Eigen::Index n = q.rows();
  const double radius = std::sqrt(std::max(radius_sq, 0.0));
  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(q));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("minimize_quadratic_on_ball: eigensolve failed");
  const VecR mu = eig.eigenvalues().cwiseMax(0.0);
  const MatC u = eig.eigenvectors();
  const VecC b = u.adjoint() * l.adjoint();
  const double b_norm = b.norm();
  if (b_norm == 0.0) return VecC::Zero(n);

  const double tiny = 1e-12 * std::max(1.0, mu.maxCoeff());
  double interior_norm_sq = 0.0;
  double null_comp = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (mu(k) > tiny)
      interior_norm_sq += std::norm(b(k)) / (mu(k) * mu(k));
    else
      null_comp = std::max(null_comp, std::abs(b(k)));
  }
  if (null_comp <= 1e-10 * (1.0 + b_norm) && interior_norm_sq <= radius_sq) {
    VecC x = VecC::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k)
      if (mu(k) > tiny) x(k) = b(k) / mu(k);
    return u * x;
  }

  auto phi = [&](double lam) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double den = mu(k) + lam;
      acc += std::norm(b(k)) / (den * den);
    }
    return acc - radius_sq;
  };
  const double lam = bisection_root(phi, 1e-300, b_norm / std::max(radius, 1e-300));
  VecC x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = b(k) / (mu(k) + lam);
  return u * x;
}

AdmmResult admm_qcqp(const MatC& quad_cost, double ball_radius_sq,
                     const QuadConstraint& constraint, const VecC& v_init,
                     const AdmmParams& params) {
  const Eigen::Index n = v_init.size();
  const double radius = std::sqrt(std::max(ball_radius_sq, 0.0));
  const double rho = params.rho;

  Eigen::LLT<MatC> step_fac(hermitianize(quad_cost) + rho * MatC::Identity(n, n));
  if (step_fac.info() != Eigen::Success)
    throw std::runtime_error("admm_qcqp: cost matrix factorization failed");

  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(constraint.q));
  if (eig.info() != Eigen::Success) throw std::runtime_error("admm_qcqp: eigensolve failed");
  const VecR mu = eig.eigenvalues().cwiseMax(0.0);
  const MatC u_eig = eig.eigenvectors();
  const VecC kappa = u_eig.adjoint() * constraint.l.adjoint();

  auto project_ball = [&](const VecC& t) -> VecC {
    const double norm = t.norm();
    if (norm <= radius || norm == 0.0) return t;
    return t * (radius / norm);
  };

  auto project_constraint = [&](const VecC& t) -> VecC {
    if (constraint.g(t) <= 0.0) return t;
    const VecC tt = u_eig.adjoint() * t;
    auto x_of = [&](double lam) {
      VecC x(n);
      for (Eigen::Index k = 0; k < n; ++k)
        x(k) = (tt(k) + lam * kappa(k)) / (1.0 + lam * mu(k));
      return x;
    };
    auto f = [&](double lam) {
      const VecC x = x_of(lam);
      double val = constraint.c;
      for (Eigen::Index k = 0; k < n; ++k)
        val += mu(k) * std::norm(x(k)) - 2.0 * std::real(std::conj(kappa(k)) * x(k));
      return val;
    };
    const double lam = bisection_root(f, 0.0, 1.0);
    return u_eig * x_of(lam);
  };

  VecC v = v_init;
  VecC v1 = v, v2 = v;
  VecC c1 = VecC::Zero(n), c2 = VecC::Zero(n);

  AdmmResult out;
  for (int it = 0; it < params.max_iter; ++it) {
    v1 = project_ball(v - c1);
    v2 = project_constraint(v - c2);
    const VecC v_prev = v;
    v = step_fac.solve((rho / 2.0) * (v1 + c1 + v2 + c2));
    c1 += v1 - v;
    c2 += v2 - v;

    out.iterations = it + 1;
    out.primal_residual = std::max((v1 - v).norm(), (v2 - v).norm());
    out.dual_residual = rho * (v - v_prev).norm();
    if (out.primal_residual < params.tol && out.dual_residual < params.tol) {
      out.converged = true;
      break;
    }
  }
  out.v = v;
  return out;
}

VecC project_sphere_box(const VecC& s, double sphere_sq, double cap_sq) {
  const Eigen::Index n = s.size();
  if (cap_sq * static_cast<double>(n) < sphere_sq * (1.0 - 1e-9))
    throw std::invalid_argument("project_sphere_box: box excludes the sphere");
  const double sphere = std::sqrt(sphere_sq);
  const double cap = std::sqrt(cap_sq);
  VecC v = s;
  if (v.norm() < 1e-150)
    v = VecC::Constant(n, cplx(std::sqrt(sphere_sq / static_cast<double>(n)), 0.0));
  for (int cycle = 0; cycle < 500; ++cycle) {
    const VecC prev = v;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(v(i));
      if (a > cap) v(i) *= cap / a;
    }
    double norm = v.norm();
    if (norm < 1e-150) {
      v = VecC::Constant(n, cplx(std::sqrt(sphere_sq / static_cast<double>(n)), 0.0));
      norm = v.norm();
    }
    v *= sphere / norm;
    if ((v - prev).norm() < 1e-10 * sphere) break;
  }
  return v;
}

}  // namespace crc
