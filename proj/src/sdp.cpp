#include "crc/sdp.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace crc {
namespace {

std::mutex g_dump_mutex;
std::string g_dump_dir;
std::atomic<int> g_dump_counter{0};

nlohmann::json matrix_to_json(const MatC& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries_row_major", entries}};
}

void maybe_dump(const SdpProblem& prob) {
  std::string dir;
  {
    std::lock_guard<std::mutex> lock(g_dump_mutex);
    dir = g_dump_dir;
  }
  if (dir.empty()) return;
  const int id = ++g_dump_counter;
  nlohmann::json j;
  j["n"] = prob.n;
  j["sense"] = prob.maximize ? "maximize" : "minimize";
  j["objective"] = matrix_to_json(prob.c);
  j["constraints"] = nlohmann::json::array();
  for (const auto& con : prob.constraints) {
    const char* s = con.sense == ConstraintSense::le   ? "<="
                    : con.sense == ConstraintSense::ge ? ">="
                                                       : "==";
    j["constraints"].push_back({{"matrix", matrix_to_json(con.a)}, {"sense", s}, {"rhs", con.b}});
  }
  std::ostringstream name;
  name << dir << "/sdp_" << std::setw(6) << std::setfill('0') << id << ".json";
  std::ofstream out(name.str());
  out << j.dump(2) << "\n";
}

// Swap-based evaluation of the complex-structure symmetry J X J^T with
// J = [[0, -I], [I, 0]]; averaging X with it projects onto the embedded
// complex subspace.
void complex_symmetrize(MatR& x) {
  const Eigen::Index n = x.rows() / 2;
  const MatR x11 = x.topLeftCorner(n, n);
  const MatR x12 = x.topRightCorner(n, n);
  const MatR x21 = x.bottomLeftCorner(n, n);
  const MatR x22 = x.bottomRightCorner(n, n);
  x.topLeftCorner(n, n) = 0.5 * (x11 + x22);
  x.topRightCorner(n, n) = 0.5 * (x12 - x21);
  x.bottomLeftCorner(n, n) = 0.5 * (x21 - x12);
  x.bottomRightCorner(n, n) = 0.5 * (x22 + x11);
}

double frob_inner(const MatR& a, const MatR& b) { return (a.array() * b.array()).sum(); }

// Largest step alpha such that x + alpha * dx stays PSD, given the Cholesky
// factor of x. Returns +inf when dx curves away from the boundary.
double max_psd_step(const Eigen::LLT<MatR>& llt_x, const MatR& dx) {
  const MatR half = llt_x.matrixL().solve(dx);
  const MatR b = llt_x.matrixL().solve(half.transpose());
  Eigen::SelfAdjointEigenSolver<MatR> eig(0.5 * (b + b.transpose()),
                                          Eigen::EigenvaluesOnly);
  const double lam = eig.eigenvalues().minCoeff();
  if (lam >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lam;
}

struct RealProblem {
  int nn = 0;  // realified dimension
  MatR c;
  std::vector<MatR> a;
  VecR b;
  std::vector<int> sigma;      // +1 le, -1 ge, 0 eq
  std::vector<int> slack_idx;  // per-constraint slack position, -1 for eq
  int num_slacks = 0;
};

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::degenerate_denominator: return "degenerate_denominator";
    case SdpStatus::numerical_failure: return "numerical_failure";
    case SdpStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

void set_sdp_dump_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(g_dump_mutex);
  g_dump_dir = dir;
  g_dump_counter = 0;
}

SdpSolution solve_sdp(const SdpProblem& prob, const SdpParams& params) {
  if (prob.n <= 0) throw std::invalid_argument("solve_sdp: variable dimension must be positive");
  if (prob.c.rows() != prob.n || prob.c.cols() != prob.n)
    throw std::invalid_argument("solve_sdp: objective has wrong shape");
  if (prob.constraints.empty())
    throw std::invalid_argument("solve_sdp: at least one constraint required");
  for (const auto& con : prob.constraints)
    if (con.a.rows() != prob.n || con.a.cols() != prob.n)
      throw std::invalid_argument("solve_sdp: constraint has wrong shape");
  maybe_dump(prob);

  RealProblem rp;
  rp.nn = 2 * prob.n;
  const MatC c_complex = hermitianize(prob.maximize ? MatC(-prob.c) : prob.c);
  rp.c = realify(c_complex);
  const int m_count = static_cast<int>(prob.constraints.size());
  rp.b.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    const auto& con = prob.constraints[m];
    rp.a.push_back(realify(hermitianize(con.a)));
    rp.b(m) = 2.0 * con.b;
    const int sig = con.sense == ConstraintSense::le ? 1 : con.sense == ConstraintSense::ge ? -1 : 0;
    rp.sigma.push_back(sig);
    rp.slack_idx.push_back(sig == 0 ? -1 : rp.num_slacks++);
  }

  const int nn = rp.nn;
  const int p = rp.num_slacks;
  const double norm_b = rp.b.norm();
  const double norm_c = rp.c.norm();
  double max_a_norm = 0.0;
  for (const auto& a : rp.a) max_a_norm = std::max(max_a_norm, a.norm());

  // Cold start on the central ray, scaled to the data.
  double xi_p = std::max(10.0, std::sqrt(static_cast<double>(nn)));
  for (int m = 0; m < m_count; ++m)
    xi_p = std::max(xi_p, nn * (1.0 + std::abs(rp.b(m))) / (1.0 + rp.a[m].norm()));
  const double xi_d =
      std::max({10.0, std::sqrt(static_cast<double>(nn)), 1.0 + std::max(norm_c, max_a_norm)});

  MatR x = xi_p * MatR::Identity(nn, nn);
  MatR z = xi_d * MatR::Identity(nn, nn);
  VecR y = VecR::Zero(m_count);
  VecR s_lp = VecR::Constant(std::max(p, 1), xi_p);
  VecR z_lp = VecR::Constant(std::max(p, 1), xi_d);

  SdpSolution sol;
  sol.y = VecR::Zero(m_count);
  const double gamma = 0.98;  // fraction-to-boundary
  int stall_count = 0;

  auto finish = [&](SdpStatus status, int iter) {
    MatR xs = x;
    complex_symmetrize(xs);
    sol.status = status;
    sol.s = hermitianize(derealify(xs));
    sol.y = y;
    sol.objective = std::real((hermitianize(prob.c) * sol.s).trace());
    sol.iterations = iter;
    return sol;
  };

  for (int iter = 0; iter < params.max_iter; ++iter) {
    // Residuals.
    VecR rp_vec(m_count);
    for (int m = 0; m < m_count; ++m) {
      double lhs = frob_inner(rp.a[m], x);
      if (rp.sigma[m] != 0) lhs += rp.sigma[m] * s_lp(rp.slack_idx[m]);
      rp_vec(m) = rp.b(m) - lhs;
    }
    MatR rd = rp.c - z;
    for (int m = 0; m < m_count; ++m) rd -= y(m) * rp.a[m];
    VecR rd_lp = VecR::Zero(std::max(p, 1));
    for (int m = 0; m < m_count; ++m)
      if (rp.sigma[m] != 0) rd_lp(rp.slack_idx[m]) = -rp.sigma[m] * y(m) - z_lp(rp.slack_idx[m]);

    const double gap_abs = frob_inner(x, z) + (p > 0 ? s_lp.head(p).dot(z_lp.head(p)) : 0.0);
    const double pobj = frob_inner(rp.c, x);
    const double dobj = rp.b.dot(y);
    sol.primal_infeas = rp_vec.norm() / (1.0 + norm_b);
    sol.dual_infeas =
        std::sqrt(rd.squaredNorm() + (p > 0 ? rd_lp.head(p).squaredNorm() : 0.0)) / (1.0 + norm_c);
    sol.gap = std::abs(gap_abs) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (sol.primal_infeas < params.tol && sol.dual_infeas < params.tol && sol.gap < params.tol)
      return finish(SdpStatus::optimal, iter);

    // Farkas-style certificate: y with sum_m y_m A_m <= 0 (and the right
    // slack signs) but b^T y > 0 proves primal infeasibility.
    if (y.norm() > 1e4) {
      const VecR yh = y / y.norm();
      MatR acc = MatR::Zero(nn, nn);
      for (int m = 0; m < m_count; ++m) acc += yh(m) * rp.a[m];
      bool sign_ok = true;
      for (int m = 0; m < m_count; ++m)
        if (rp.sigma[m] != 0 && rp.sigma[m] * yh(m) > 1e-9) sign_ok = false;
      if (sign_ok && rp.b.dot(yh) > 1e-7 * (1.0 + norm_b)) {
        Eigen::SelfAdjointEigenSolver<MatR> eig(acc, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().maxCoeff() < 1e-8 * (1.0 + max_a_norm))
          return finish(SdpStatus::infeasible, iter);
      }
    }

    // Nesterov-Todd scaling point.
    Eigen::LLT<MatR> llt_x(x);
    Eigen::LLT<MatR> llt_z(z);
    if (llt_x.info() != Eigen::Success || llt_z.info() != Eigen::Success)
      return finish(SdpStatus::numerical_failure, iter);
    const MatR lx = llt_x.matrixL();
    const MatR lz = llt_z.matrixL();
    Eigen::BDCSVD<MatR> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VecR d = svd.singularValues();
    if (d.minCoeff() <= 0.0) return finish(SdpStatus::numerical_failure, iter);
    const MatR e_fac = lx * svd.matrixV() * d.cwiseSqrt().cwiseInverse().asDiagonal();
    const MatR e_inv = d.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
                       lx.triangularView<Eigen::Lower>().solve(MatR::Identity(nn, nn));
    const MatR w_scal = e_fac * e_fac.transpose();

    // Schur complement of the reduced KKT system.
    std::vector<MatR> a_scaled(m_count);
    for (int m = 0; m < m_count; ++m) a_scaled[m] = e_fac.transpose() * rp.a[m] * e_fac;
    MatR schur(m_count, m_count);
    for (int m = 0; m < m_count; ++m)
      for (int k = m; k < m_count; ++k) {
        schur(m, k) = frob_inner(a_scaled[m], a_scaled[k]);
        schur(k, m) = schur(m, k);
      }
    for (int m = 0; m < m_count; ++m)
      if (rp.sigma[m] != 0) {
        const int i = rp.slack_idx[m];
        schur(m, m) += s_lp(i) / z_lp(i);
      }
    Eigen::LDLT<MatR> schur_fac(schur);
    if (schur_fac.info() != Eigen::Success) return finish(SdpStatus::numerical_failure, iter);

    const MatR wrdw = w_scal * rd * w_scal;

    auto solve_direction = [&](const MatR& r_target, const VecR& rc_lp, MatR& dx, MatR& dz,
                               VecR& ds, VecR& dz_lp_out, VecR& dy) {
      MatR r_tilde(nn, nn);
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) r_tilde(i, j) = 2.0 * r_target(i, j) / (d(i) + d(j));
      const MatR t0 = e_fac * r_tilde * e_fac.transpose();
      VecR h(m_count);
      for (int m = 0; m < m_count; ++m) {
        h(m) = rp_vec(m) - frob_inner(rp.a[m], t0) + frob_inner(rp.a[m], wrdw);
        if (rp.sigma[m] != 0) {
          const int i = rp.slack_idx[m];
          h(m) -= rp.sigma[m] * (rc_lp(i) - s_lp(i) * rd_lp(i)) / z_lp(i);
        }
      }
      dy = schur_fac.solve(h);
      dz = rd;
      for (int m = 0; m < m_count; ++m) dz -= dy(m) * rp.a[m];
      dx = t0 - w_scal * dz * w_scal;
      dx = 0.5 * (dx + dx.transpose());
      ds = VecR::Zero(std::max(p, 1));
      dz_lp_out = VecR::Zero(std::max(p, 1));
      for (int m = 0; m < m_count; ++m)
        if (rp.sigma[m] != 0) {
          const int i = rp.slack_idx[m];
          dz_lp_out(i) = rd_lp(i) - rp.sigma[m] * dy(m);
          ds(i) = (rc_lp(i) - s_lp(i) * dz_lp_out(i)) / z_lp(i);
        }
    };

    auto lp_max_step = [&](const VecR& cur, const VecR& delta) {
      double a = std::numeric_limits<double>::infinity();
      for (int i = 0; i < p; ++i)
        if (delta(i) < 0.0) a = std::min(a, -cur(i) / delta(i));
      return a;
    };

    const double mu = gap_abs / (nn + p);

    // Predictor: aim at the boundary.
    MatR r1 = MatR::Zero(nn, nn);
    for (int i = 0; i < nn; ++i) r1(i, i) = -d(i) * d(i);
    VecR rc1 = VecR::Zero(std::max(p, 1));
    for (int i = 0; i < p; ++i) rc1(i) = -s_lp(i) * z_lp(i);
    MatR dx_aff, dz_aff;
    VecR ds_aff, dzl_aff, dy_aff;
    solve_direction(r1, rc1, dx_aff, dz_aff, ds_aff, dzl_aff, dy_aff);

    const double ap_aff =
        std::min({1.0, gamma * max_psd_step(llt_x, dx_aff), gamma * lp_max_step(s_lp, ds_aff)});
    const double ad_aff =
        std::min({1.0, gamma * max_psd_step(llt_z, dz_aff), gamma * lp_max_step(z_lp, dzl_aff)});
    double gap_aff = frob_inner(x + ap_aff * dx_aff, z + ad_aff * dz_aff);
    for (int i = 0; i < p; ++i)
      gap_aff += (s_lp(i) + ap_aff * ds_aff(i)) * (z_lp(i) + ad_aff * dzl_aff(i));
    const double sigma_c =
        std::min(1.0, std::max(1e-8, std::pow(std::max(gap_aff, 0.0) / gap_abs, 3.0)));

    // Corrector: recentered target with the second-order term.
    const MatR u_aff = e_inv * dx_aff * e_inv.transpose();
    const MatR v_aff = e_fac.transpose() * dz_aff * e_fac;
    const MatR uv = u_aff * v_aff;
    MatR r2 = -0.5 * (uv + uv.transpose());
    for (int i = 0; i < nn; ++i) r2(i, i) += sigma_c * mu - d(i) * d(i);
    VecR rc2 = VecR::Zero(std::max(p, 1));
    for (int i = 0; i < p; ++i) rc2(i) = sigma_c * mu - s_lp(i) * z_lp(i) - ds_aff(i) * dzl_aff(i);
    MatR dx_c, dz_c;
    VecR ds_c, dzl_c, dy_c;
    solve_direction(r2, rc2, dx_c, dz_c, ds_c, dzl_c, dy_c);

    const double ap =
        std::min({1.0, gamma * max_psd_step(llt_x, dx_c), gamma * lp_max_step(s_lp, ds_c)});
    const double ad =
        std::min({1.0, gamma * max_psd_step(llt_z, dz_c), gamma * lp_max_step(z_lp, dzl_c)});

    x += ap * dx_c;
    s_lp += ap * ds_c;
    y += ad * dy_c;
    z += ad * dz_c;
    z_lp += ad * dzl_c;
    complex_symmetrize(x);
    complex_symmetrize(z);

    if (!x.allFinite() || !z.allFinite() || !y.allFinite())
      return finish(SdpStatus::numerical_failure, iter);
    if (ap < 1e-8 && ad < 1e-8) {
      if (++stall_count >= 3) {
        const bool close = sol.primal_infeas < 1e3 * params.tol &&
                           sol.dual_infeas < 1e3 * params.tol && sol.gap < 1e3 * params.tol;
        return finish(close ? SdpStatus::max_iterations : SdpStatus::numerical_failure, iter);
      }
    } else {
      stall_count = 0;
    }
  }
  return finish(SdpStatus::max_iterations, params.max_iter);
}

FractionalSdpResult solve_fractional_sdp(const MatC& num, const MatC& den, double den_const,
                                         const std::vector<SdpConstraint>& constraints,
                                         const SdpParams& params) {
  const int n = static_cast<int>(num.rows());
  if (den.rows() != n || den.cols() != n)
    throw std::invalid_argument("solve_fractional_sdp: numerator/denominator shape mismatch");

  SdpProblem prob;
  prob.n = n + 1;
  prob.maximize = true;
  prob.c = MatC::Zero(n + 1, n + 1);
  prob.c.topLeftCorner(n, n) = num;

  // Scale normalization tr(den T) + den_const * t <= 1.
  SdpConstraint norm_con;
  norm_con.a = MatC::Zero(n + 1, n + 1);
  norm_con.a.topLeftCorner(n, n) = den;
  norm_con.a(n, n) = den_const;
  norm_con.sense = ConstraintSense::le;
  norm_con.b = 1.0;
  prob.constraints.push_back(norm_con);

  // Each ratio-level constraint tr(A S) <= b becomes tr(A T) - b t <= 0.
  for (const auto& con : constraints) {
    if (con.a.rows() != n || con.a.cols() != n)
      throw std::invalid_argument("solve_fractional_sdp: constraint shape mismatch");
    SdpConstraint hom;
    hom.a = MatC::Zero(n + 1, n + 1);
    hom.a.topLeftCorner(n, n) = con.a;
    hom.a(n, n) = -con.b;
    hom.sense = con.sense;
    hom.b = 0.0;
    prob.constraints.push_back(hom);
  }

  const SdpSolution sdp = solve_sdp(prob, params);
  FractionalSdpResult out;
  out.status = sdp.status;
  out.y = sdp.y;
  if (sdp.status != SdpStatus::optimal && sdp.status != SdpStatus::max_iterations) return out;

  const double t = std::real(sdp.s(n, n));
  out.t = t;
  // The scale variable collapses (relative to the lifted iterate, not in
  // absolute terms) when the ratio is only attained in the limit of a
  // vanishing denominator; de-homogenizing would divide noise by noise.
  const double t_floor =
      std::max(1e-12, 1e3 * params.tol * (1.0 + std::abs(std::real(sdp.s.trace()))));
  if (t <= t_floor) {
    out.status = SdpStatus::degenerate_denominator;
    return out;
  }
  out.s = hermitianize(sdp.s.topLeftCorner(n, n) / t);
  const double den_val = std::real((den * out.s).trace()) + den_const;
  if (den_val <= 0.0) {
    out.status = SdpStatus::degenerate_denominator;
    return out;
  }
  out.value = std::real((num * out.s).trace()) / den_val;
  return out;
}

RankReductionResult rank_reduction(const MatC& s, const std::vector<MatC>& preserve,
                                   double rank_rel_tol) {
  RankReductionResult out;
  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(s));
  if (eig.info() != Eigen::Success) throw std::runtime_error("rank_reduction: eigensolve failed");
  VecR lam = eig.eigenvalues().reverse();  // descending
  MatC vecs = eig.eigenvectors().rowwise().reverse();
  int r = numerical_rank(lam, rank_rel_tol);
  if (r == 0) {
    out.s = MatC::Zero(s.rows(), s.cols());
    return out;
  }
  MatC u = vecs.leftCols(r) * lam.head(r).cwiseMax(0.0).cwiseSqrt().asDiagonal();

  const int max_steps = 64;
  while (r > 1 && out.steps < max_steps) {
    // Compress the preserved functionals onto the current factor.
    std::vector<MatC> comp;
    comp.reserve(preserve.size());
    for (const auto& a : preserve) comp.push_back(hermitianize(u.adjoint() * a * u));

    // Real parametrization of Hermitian directions: r diagonal entries, then
    // (re, im) for each strict upper-triangle entry.
    const int dof = r * r;
    MatR coef(static_cast<int>(comp.size()), dof);
    for (std::size_t m = 0; m < comp.size(); ++m) {
      int col = 0;
      for (int i = 0; i < r; ++i) coef(m, col++) = std::real(comp[m](i, i));
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
          coef(m, col++) = 2.0 * std::real(comp[m](i, j));
          coef(m, col++) = 2.0 * std::imag(comp[m](i, j));
        }
    }

    Eigen::JacobiSVD<MatR> svd(coef, Eigen::ComputeFullV);
    const VecR sv = svd.singularValues();
    const double sv_max = sv.size() > 0 ? sv(0) : 0.0;
    const int rank_coef = [&] {
      int rr = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(1.0, sv_max)) ++rr;
      return rr;
    }();
    if (rank_coef >= dof) {
      out.nullspace_exhausted = true;
      break;
    }
    const VecR dir = svd.matrixV().col(dof - 1);  // nullspace direction

    MatC lambda = MatC::Zero(r, r);
    {
      int col = 0;
      for (int i = 0; i < r; ++i) lambda(i, i) = dir(col++);
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
          const double re = dir(col++);
          const double im = dir(col++);
          lambda(i, j) = cplx(re, im);
          lambda(j, i) = cplx(re, -im);
        }
    }

    Eigen::SelfAdjointEigenSolver<MatC> leig(lambda);
    const VecR lev = leig.eigenvalues();
    Eigen::Index imax = 0;
    lev.cwiseAbs().maxCoeff(&imax);
    const double delta = lev(imax);
    if (std::abs(delta) < 1e-14) {
      out.nullspace_exhausted = true;
      break;
    }
    // Scale so I - lambda/delta is PSD with at least one zero eigenvalue.
    VecR shrink = VecR::Ones(r) - lev / delta;
    MatC u_next_full = u * leig.eigenvectors();
    int keep = 0;
    for (int i = 0; i < r; ++i)
      if (shrink(i) > 1e-12) ++keep;
    MatC u_next(u.rows(), keep);
    int col = 0;
    for (int i = 0; i < r; ++i)
      if (shrink(i) > 1e-12) u_next.col(col++) = std::sqrt(shrink(i)) * u_next_full.col(i);
    u = u_next;
    r = keep;
    ++out.steps;
    if (keep == 0) break;
  }

  out.s = hermitianize(u * u.adjoint());
  Eigen::SelfAdjointEigenSolver<MatC> eig2(out.s, Eigen::EigenvaluesOnly);
  out.rank = numerical_rank(eig2.eigenvalues().reverse(), rank_rel_tol);
  return out;
}

}  // namespace crc
