#include "smalm/auglag.hpp"

#include <cmath>

namespace smalm {

namespace {

void require_s(const ProblemDef& problem, const Vec& s) {
  if (s.size() != problem.m) {
    throw ConfigError("s has length " + std::to_string(s.size()) + ", expected " +
                      std::to_string(problem.m));
  }
}

void require_eq(const ProblemDef& problem, const EqualityState& eq) {
  if (problem.p == 0) throw ConfigError("problem " + problem.name + " has no equality constraints");
  if (eq.lambda.size() != problem.p) throw ConfigError("lambda has wrong length");
}

}  // namespace

AuglagEval eval_F(const ProblemDef& problem, const Vec& x, const Vec& s,
                  const SmoothingParams& params) {
  params.validate();
  require_s(problem, s);
  const double rho = params.rho;

  const double f = eval_objective(problem, x);
  const Vec c = eval_constraints(problem, x);
  const Vec gf = eval_objective_grad(problem, x);
  const Mat jac = eval_constraints_jac(problem, x);

  AuglagEval out;
  out.slacks = eval_zy(c, s, params);
  const Vec& y = out.slacks.y;

  const double hsum = eval_h_scaled(c, s, params).sum();
  out.scaled_value = f / rho + hsum;
  out.scaled_grad_x = gf / rho - jac * y;

  out.value = f + rho * hsum;
  out.grad_x = gf - jac * (rho * y);
  out.value_overflow = !std::isfinite(out.value) || !out.grad_x.allFinite();
  return out;
}

Mat hess_x_F(const ProblemDef& problem, const Vec& x, const Vec& s,
             const SmoothingParams& params) {
  if (!problem.objective_hess || !problem.constraints_hess) {
    throw ConfigError("problem " + problem.name + " provides no Hessians");
  }
  params.validate();
  require_s(problem, s);
  const double rho = params.rho;

  const Vec c = eval_constraints(problem, x);
  const Mat jac = eval_constraints_jac(problem, x);
  const SmoothedSlacks zy = eval_zy(c, s, params);

  Mat H = eval_objective_hess(problem, x);
  for (int i = 0; i < problem.m; ++i) {
    H -= (rho * zy.y(i)) * eval_constraints_hess(problem, x, i);
  }
  H += rho * jac * zy.frac_y.asDiagonal() * jac.transpose();
  return 0.5 * (H + H.transpose());
}

Vec grad_s_F(const ProblemDef& problem, const Vec& x, const Vec& s,
             const SmoothingParams& params) {
  require_s(problem, s);
  const Vec c = eval_constraints(problem, x);
  return eval_zy(c, s, params).z - c;
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> hess_s_F(const ProblemDef& problem, const Vec& x,
                                                       const Vec& s, const SmoothingParams& params) {
  require_s(problem, s);
  const Vec c = eval_constraints(problem, x);
  Vec d = -eval_zy(c, s, params).frac_z / params.rho;
  return d.asDiagonal();
}

AuglagEval eval_F_eq(const ProblemDef& problem, const Vec& x, const Vec& s,
                     const EqualityState& eq, const SmoothingParams& params) {
  require_eq(problem, eq);
  AuglagEval out = eval_F(problem, x, s, params);
  const double rho = params.rho;
  const Vec h = eval_equalities(problem, x);
  const Mat jh = eval_equalities_jac(problem, x);

  out.scaled_value += eq.lambda.dot(h) / rho + 0.5 * h.squaredNorm();
  out.scaled_grad_x += jh * (eq.lambda / rho + h);
  out.value += eq.lambda.dot(h) + 0.5 * rho * h.squaredNorm();
  out.grad_x += jh * (eq.lambda + rho * h);
  out.value_overflow = !std::isfinite(out.value) || !out.grad_x.allFinite();
  return out;
}

Mat hess_x_F_eq(const ProblemDef& problem, const Vec& x, const Vec& s,
                const EqualityState& eq, const SmoothingParams& params) {
  require_eq(problem, eq);
  if (!problem.equalities_hess) {
    throw ConfigError("problem " + problem.name + " provides no equality Hessians");
  }
  Mat H = hess_x_F(problem, x, s, params);
  const double rho = params.rho;
  const Vec h = eval_equalities(problem, x);
  const Mat jh = eval_equalities_jac(problem, x);
  for (int i = 0; i < problem.p; ++i) {
    H += (eq.lambda(i) + rho * h(i)) * eval_equalities_hess(problem, x, i);
  }
  H += rho * jh * jh.transpose();
  return 0.5 * (H + H.transpose());
}

EqualityState update_lambda(const EqualityState& eq, const Vec& h_val, double rho) {
  if (h_val.size() != eq.lambda.size()) throw ConfigError("h and lambda lengths differ");
  return EqualityState{eq.lambda + rho * h_val};
}

}  // namespace smalm
