#include "smalm/inner_solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>

namespace smalm {

void InnerConfig::validate() const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("backtrack must lie in (0,1)");
  if (max_iters <= 0) throw ConfigError("max_iters must be positive");
  if (min_iters < 0 || min_iters > max_iters) throw ConfigError("min_iters must lie in [0, max_iters]");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw ConfigError("min_step must lie in (0,1]");
}

namespace {

struct Point {
  double phi;
  Vec g;
};

class ScaledObjective {
 public:
  ScaledObjective(const ProblemDef& problem, const Vec& s, const SmoothingParams& params,
                  const EqualityState* eq)
      : problem_(problem), s_(s), params_(params), eq_(eq) {}

  Point at(const Vec& x) const {
    AuglagEval ev = eq_ ? eval_F_eq(problem_, x, s_, *eq_, params_)
                        : eval_F(problem_, x, s_, params_);
    return {ev.scaled_value, ev.scaled_grad_x};
  }

  // Trial points may leave the region where callbacks are finite.
  std::optional<double> try_value(const Vec& x) const {
    try {
      AuglagEval ev = eq_ ? eval_F_eq(problem_, x, s_, *eq_, params_)
                          : eval_F(problem_, x, s_, params_);
      if (!std::isfinite(ev.scaled_value)) return std::nullopt;
      return ev.scaled_value;
    } catch (const EvaluationError&) {
      return std::nullopt;
    } catch (const ParameterOverflow&) {
      return std::nullopt;
    }
  }

  Mat hessian(const Vec& x) const {
    Mat H = eq_ ? hess_x_F_eq(problem_, x, s_, *eq_, params_) : hess_x_F(problem_, x, s_, params_);
    return H / params_.rho;
  }

 private:
  const ProblemDef& problem_;
  const Vec& s_;
  SmoothingParams params_;
  const EqualityState* eq_;
};

// Newton matrix with the smallest tau in {0, tau0, 2 tau0, ...} that factors.
Vec newton_direction(const Mat& H, const Vec& g, double& shift) {
  const Eigen::Index n = H.rows();
  Eigen::LLT<Mat> llt(H);
  shift = 0.0;
  if (llt.info() == Eigen::Success) return -llt.solve(g);
  double tau = 1e-8 * std::max(1.0, std::abs(H.trace()) / static_cast<double>(n));
  for (int k = 0; k < 1100; ++k, tau *= 2.0) {
    llt.compute(H + tau * Mat::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      shift = tau;
      return -llt.solve(g);
    }
  }
  throw EvaluationError("Newton matrix could not be made positive definite", -1);
}

void bfgs_update(Mat& B, const Vec& step, const Vec& dg) {
  const double sy = step.dot(dg);
  if (!(sy > 1e-8 * step.norm() * dg.norm())) return;
  const Vec Bs = B * step;
  const double sBs = step.dot(Bs);
  if (!(sBs > 0.0)) return;
  B += dg * dg.transpose() / sy - Bs * Bs.transpose() / sBs;
  B = 0.5 * (B + B.transpose());
}

}  // namespace

InnerResult minimize_subproblem(const ProblemDef& problem, const Vec& s,
                                const SmoothingParams& params, const Vec& x_start,
                                const InnerConfig& config, Mat& B, const EqualityState* eq) {
  config.validate();
  params.validate();
  const bool newton = config.method == InnerMethod::newton;
  if (newton && !problem.has_hessians()) {
    throw ConfigError("Newton inner mode needs Hessians, problem " + problem.name + " has none");
  }
  const Eigen::Index n = problem.n;
  if (B.rows() != n || B.cols() != n) B = Mat::Identity(n, n);

  ScaledObjective obj(problem, s, params, eq);
  const double tol = 0.95 * params.mu;

  InnerResult res;
  Vec x = x_start;
  Point cur = obj.at(x);
  double gnorm = cur.g.lpNorm<Eigen::Infinity>();

  for (;;) {
    if (gnorm <= tol && res.iters >= config.min_iters) {
      res.status = InnerStatus::converged;
      break;
    }
    if (res.iters >= config.max_iters) {
      res.status = gnorm <= tol ? InnerStatus::converged : InnerStatus::iteration_limit;
      break;
    }

    InnerStep step;
    Vec d;
    if (newton) {
      d = newton_direction(obj.hessian(x), cur.g, step.shift);
    } else {
      Eigen::LLT<Mat> llt(B);
      if (llt.info() != Eigen::Success) {
        B = Mat::Identity(n, n);
        llt.compute(B);
      }
      d = -llt.solve(cur.g);
    }
    double slope = cur.g.dot(d);
    if (!(slope <= 0.0)) {
      B = Mat::Identity(n, n);
      d = -cur.g;
      slope = -cur.g.squaredNorm();
    }

    double alpha = 1.0;
    std::optional<double> phi_new;
    while (alpha >= config.min_step) {
      phi_new = obj.try_value(x + alpha * d);
      if (phi_new && *phi_new <= cur.phi + config.sigma * alpha * slope) break;
      phi_new.reset();
      alpha *= config.backtrack;
    }
    if (!phi_new) {
      res.status = gnorm <= tol ? InnerStatus::converged : InnerStatus::linesearch_failure;
      break;
    }

    Vec x_next = x + alpha * d;
    Point next = obj.at(x_next);
    if (!newton) bfgs_update(B, x_next - x, next.g - cur.g);

    step.alpha = alpha;
    step.phi_before = cur.phi;
    step.phi_after = next.phi;
    step.slope = slope;
    step.grad_inf_after = next.g.lpNorm<Eigen::Infinity>();
    res.steps.push_back(step);

    x = std::move(x_next);
    cur = std::move(next);
    gnorm = step.grad_inf_after;
    ++res.iters;
  }

  res.x_new = x;
  res.final_scaled_grad_inf = gnorm;
  return res;
}

}  // namespace smalm
