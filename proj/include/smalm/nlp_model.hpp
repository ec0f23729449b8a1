#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace smalm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A callback produced a NaN or inf. `index` is the offending component.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, int index)
      : std::runtime_error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

// Invalid parameters or a solver mode the problem cannot support.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/**
 * Nonlinear program
 *
 *   min f(x)  s.t.  c(x) >= 0,  h(x) = 0
 *
 * Jacobians are stored n x m, one constraint gradient per column.
 * Hessian callbacks are optional; leave them empty for quasi-Newton use.
 */
struct ProblemDef {
  std::string name;
  int n = 0;
  int m = 0;
  int p = 0;

  std::function<double(const Vec&)> objective;
  std::function<Vec(const Vec&)> objective_grad;
  std::function<Mat(const Vec&)> objective_hess;

  std::function<Vec(const Vec&)> constraints;
  std::function<Mat(const Vec&)> constraints_jac;
  std::function<Mat(const Vec&, int)> constraints_hess;

  std::function<Vec(const Vec&)> equalities;
  std::function<Mat(const Vec&)> equalities_jac;
  std::function<Mat(const Vec&, int)> equalities_hess;

  Vec x0;

  bool has_hessians() const;
  // Throws ConfigError on inconsistent dimensions or missing callbacks.
  void validate() const;
};

// Checked evaluation: dimensions and finiteness are verified on every call.
double eval_objective(const ProblemDef& problem, const Vec& x);
Vec eval_objective_grad(const ProblemDef& problem, const Vec& x);
Mat eval_objective_hess(const ProblemDef& problem, const Vec& x);
Vec eval_constraints(const ProblemDef& problem, const Vec& x);
Mat eval_constraints_jac(const ProblemDef& problem, const Vec& x);
Mat eval_constraints_hess(const ProblemDef& problem, const Vec& x, int i);
Vec eval_equalities(const ProblemDef& problem, const Vec& x);
Mat eval_equalities_jac(const ProblemDef& problem, const Vec& x);
Mat eval_equalities_hess(const ProblemDef& problem, const Vec& x, int i);

struct Residuals {
  double e1 = 0.0;  // dual infeasibility / rho
  double e2 = 0.0;  // complementarity / rho
  double e3 = 0.0;  // primal infeasibility
  double e4 = 0.0;  // stationarity of the infeasibility measure
};

Residuals eval_residuals(const ProblemDef& problem, const Vec& x, const Vec& s,
                         double rho);

// With equality constraints, lambda enters e1 as +grad h * lambda and
// e3/e4 include |h| and grad h * h.
Residuals eval_residuals(const ProblemDef& problem, const Vec& x, const Vec& s,
                         const Vec& lambda, double rho);

struct FdReport {
  double grad_err = 0.0;
  double jac_err = 0.0;
  double obj_hess_err = 0.0;  // 0 when no Hessian callbacks
  double con_hess_err = 0.0;
  double eq_jac_err = 0.0;
  double eq_hess_err = 0.0;
  double max_err = 0.0;
  bool pass = false;
};

// Central differences, step 1e-6 * max(1, |x_i|). Errors are measured
// relative to max(1, |finite-difference column|_inf).
FdReport finite_diff_check(const ProblemDef& problem, const Vec& x, double tol);

double relative_error(const Mat& analytic, const Mat& numeric);

ProblemDef get_problem(std::string_view name);
std::vector<std::string> problem_names();

}  // namespace smalm
