#include "smalm/nlp_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "smalm/bench.hpp"

namespace smalm {

namespace {

void require_finite(const Mat& v, const std::string& what) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (!std::isfinite(v(i, j))) {
        int idx = static_cast<int>(j * v.rows() + i);
        throw EvaluationError(what + " returned a non-finite value at component " +
                                  std::to_string(idx),
                              idx);
      }
    }
  }
}

void require_shape(const Mat& v, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
  if (v.rows() != rows || v.cols() != cols) {
    throw EvaluationError(what + " returned " + std::to_string(v.rows()) + "x" +
                              std::to_string(v.cols()) + ", expected " +
                              std::to_string(rows) + "x" + std::to_string(cols),
                          -1);
  }
}

void require_x(const ProblemDef& problem, const Vec& x) {
  if (x.size() != problem.n) {
    throw ConfigError("x has length " + std::to_string(x.size()) + ", problem " +
                      problem.name + " has n = " + std::to_string(problem.n));
  }
}

Mat checked(const Mat& v, Eigen::Index rows, Eigen::Index cols,
            const std::string& what) {
  require_shape(v, rows, cols, what);
  require_finite(v, what);
  return v;
}

}  // namespace

bool ProblemDef::has_hessians() const {
  if (!objective_hess || !constraints_hess) return false;
  if (p > 0 && !equalities_hess) return false;
  return true;
}

void ProblemDef::validate() const {
  if (n <= 0) throw ConfigError("problem " + name + ": n must be positive");
  if (m < 0 || p < 0) throw ConfigError("problem " + name + ": negative m or p");
  if (!objective || !objective_grad || !constraints || !constraints_jac) {
    throw ConfigError("problem " + name + ": missing f, grad f, c or jac c");
  }
  if (p > 0 && (!equalities || !equalities_jac)) {
    throw ConfigError("problem " + name + ": p > 0 but h or jac h missing");
  }
  if (x0.size() != n) throw ConfigError("problem " + name + ": x0 has wrong length");
}

double eval_objective(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  double f = problem.objective(x);
  if (!std::isfinite(f)) throw EvaluationError("objective is not finite", 0);
  return f;
}

Vec eval_objective_grad(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  return checked(problem.objective_grad(x), problem.n, 1, "objective gradient");
}

Mat eval_objective_hess(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  if (!problem.objective_hess) throw ConfigError("problem " + problem.name + " has no objective Hessian");
  return checked(problem.objective_hess(x), problem.n, problem.n, "objective Hessian");
}

Vec eval_constraints(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  return checked(problem.constraints(x), problem.m, 1, "constraints");
}

Mat eval_constraints_jac(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  return checked(problem.constraints_jac(x), problem.n, problem.m, "constraint Jacobian");
}

Mat eval_constraints_hess(const ProblemDef& problem, const Vec& x, int i) {
  require_x(problem, x);
  if (!problem.constraints_hess) throw ConfigError("problem " + problem.name + " has no constraint Hessians");
  return checked(problem.constraints_hess(x, i), problem.n, problem.n,
                 "Hessian of constraint " + std::to_string(i));
}

Vec eval_equalities(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  if (problem.p == 0) return Vec(0);
  return checked(problem.equalities(x), problem.p, 1, "equalities");
}

Mat eval_equalities_jac(const ProblemDef& problem, const Vec& x) {
  require_x(problem, x);
  if (problem.p == 0) return Mat(problem.n, 0);
  return checked(problem.equalities_jac(x), problem.n, problem.p, "equality Jacobian");
}

Mat eval_equalities_hess(const ProblemDef& problem, const Vec& x, int i) {
  require_x(problem, x);
  if (!problem.equalities_hess) throw ConfigError("problem " + problem.name + " has no equality Hessians");
  return checked(problem.equalities_hess(x, i), problem.n, problem.n,
                 "Hessian of equality " + std::to_string(i));
}

Residuals eval_residuals(const ProblemDef& problem, const Vec& x, const Vec& s,
                         double rho) {
  return eval_residuals(problem, x, s, Vec::Zero(problem.p), rho);
}

Residuals eval_residuals(const ProblemDef& problem, const Vec& x, const Vec& s,
                         const Vec& lambda, double rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (s.size() != problem.m) throw ConfigError("s has wrong length");
  if (lambda.size() != problem.p) throw ConfigError("lambda has wrong length");

  Vec c = eval_constraints(problem, x);
  Mat jac = eval_constraints_jac(problem, x);
  Vec viol = (-c).cwiseMax(0.0);

  Vec dual = eval_objective_grad(problem, x) - jac * s;
  Vec infeas_grad = jac * viol;
  double e3 = problem.m > 0 ? viol.lpNorm<Eigen::Infinity>() : 0.0;
  if (problem.p > 0) {
    Vec h = eval_equalities(problem, x);
    Mat jh = eval_equalities_jac(problem, x);
    dual += jh * lambda;
    infeas_grad -= jh * h;
    e3 = std::max(e3, h.lpNorm<Eigen::Infinity>());
  }

  Residuals r;
  r.e1 = dual.lpNorm<Eigen::Infinity>() / rho;
  r.e2 = problem.m > 0 ? s.cwiseProduct(c).lpNorm<Eigen::Infinity>() / rho : 0.0;
  r.e3 = e3;
  r.e4 = infeas_grad.size() > 0 ? infeas_grad.lpNorm<Eigen::Infinity>() : 0.0;
  return r;
}

double relative_error(const Mat& analytic, const Mat& numeric) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < numeric.cols(); ++j) {
    double scale = std::max(1.0, numeric.col(j).lpNorm<Eigen::Infinity>());
    double err = (analytic.col(j) - numeric.col(j)).lpNorm<Eigen::Infinity>() / scale;
    worst = std::max(worst, err);
  }
  return worst;
}

namespace {

// Central-difference Jacobian of a vector map, n x rows (gradients as columns).
template <typename F>
Mat fd_columns(const F& fun, const Vec& x, Eigen::Index rows) {
  const Eigen::Index n = x.size();
  Mat out(n, rows);
  Vec xp = x;
  for (Eigen::Index k = 0; k < n; ++k) {
    double h = 1e-6 * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + h;
    Vec fp = fun(xp);
    xp(k) = x(k) - h;
    Vec fm = fun(xp);
    xp(k) = x(k);
    out.row(k) = ((fp - fm) / (2.0 * h)).transpose();
  }
  return out;
}

}  // namespace

FdReport finite_diff_check(const ProblemDef& problem, const Vec& x, double tol) {
  FdReport rep;
  const int n = problem.n;

  auto fvec = [&](const Vec& v) { return Vec::Constant(1, eval_objective(problem, v)); };
  rep.grad_err = relative_error(eval_objective_grad(problem, x), fd_columns(fvec, x, 1));

  auto cvec = [&](const Vec& v) { return eval_constraints(problem, v); };
  rep.jac_err = relative_error(eval_constraints_jac(problem, x), fd_columns(cvec, x, problem.m));

  if (problem.objective_hess) {
    auto g = [&](const Vec& v) { return eval_objective_grad(problem, v); };
    rep.obj_hess_err = relative_error(eval_objective_hess(problem, x), fd_columns(g, x, n));
  }
  if (problem.constraints_hess) {
    for (int i = 0; i < problem.m; ++i) {
      auto gi = [&](const Vec& v) -> Vec { return eval_constraints_jac(problem, v).col(i); };
      rep.con_hess_err = std::max(
          rep.con_hess_err, relative_error(eval_constraints_hess(problem, x, i), fd_columns(gi, x, n)));
    }
  }
  if (problem.p > 0) {
    auto hvec = [&](const Vec& v) { return eval_equalities(problem, v); };
    rep.eq_jac_err = relative_error(eval_equalities_jac(problem, x), fd_columns(hvec, x, problem.p));
    if (problem.equalities_hess) {
      for (int i = 0; i < problem.p; ++i) {
        auto gi = [&](const Vec& v) -> Vec { return eval_equalities_jac(problem, v).col(i); };
        rep.eq_hess_err = std::max(
            rep.eq_hess_err, relative_error(eval_equalities_hess(problem, x, i), fd_columns(gi, x, n)));
      }
    }
  }

  rep.max_err = std::max({rep.grad_err, rep.jac_err, rep.obj_hess_err, rep.con_hess_err,
                          rep.eq_jac_err, rep.eq_hess_err});
  rep.pass = rep.max_err < tol;
  return rep;
}

namespace {

const std::map<std::string, ProblemDef>& registry() {
  static const std::map<std::string, ProblemDef> reg = register_problems();
  return reg;
}

}  // namespace

ProblemDef get_problem(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(std::string(name));
  if (it == reg.end()) {
    std::string known;
    for (const auto& [key, _] : reg) known += (known.empty() ? "" : ", ") + key;
    throw LookupError("unknown problem '" + std::string(name) + "' (available: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> problem_names() {
  std::vector<std::string> out;
  for (const auto& [key, _] : registry()) out.push_back(key);
  return out;
}

}  // namespace smalm
