#include "smalm/outer_alm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace smalm {

void OuterConfig::validate() const {
  if (!(mu0 > 0.0 && mu0 < 1.0)) throw ConfigError("mu0 must lie in (0,1)");
  if (!(rho0 >= 1.0) || !std::isfinite(rho0)) throw ConfigError("rho0 must be >= 1");
  if (!(eps > 0.0 && eps < mu0)) throw ConfigError("eps must lie in (0, mu0)");
  if (max_outer <= 0) throw ConfigError("max_outer must be positive");
  if (!(rho_cap >= rho0)) throw ConfigError("rho_cap must be >= rho0");
  if (singular_tol && !(*singular_tol >= 0.0)) throw ConfigError("singular_tol must be >= 0");
  inner.validate();
}

namespace {

constexpr std::array<std::pair<SolveStatus, std::string_view>, 6> kStatusNames{{
    {SolveStatus::kkt, "kkt"},
    {SolveStatus::infeasible_stationary, "infeasible_stationary"},
    {SolveStatus::singular_stationary, "singular_stationary"},
    {SolveStatus::iteration_limit, "iteration_limit"},
    {SolveStatus::inner_failure, "inner_failure"},
    {SolveStatus::rho_overflow, "rho_overflow"},
}};

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

std::string_view to_string(SolveStatus status) {
  for (const auto& [st, name] : kStatusNames) {
    if (st == status) return name;
  }
  return "unknown";
}

std::optional<SolveStatus> status_from_string(std::string_view name) {
  for (const auto& [st, nm] : kStatusNames) {
    if (nm == name) return st;
  }
  return std::nullopt;
}

bool is_terminus(SolveStatus status) {
  return status == SolveStatus::kkt || status == SolveStatus::infeasible_stationary ||
         status == SolveStatus::singular_stationary;
}

int SolveResult::total_inner_iterations() const {
  int total = 0;
  for (const auto& rec : history) total += rec.inner_iters;
  return total;
}

std::optional<SolveStatus> classify_termination(const Residuals& r, const OuterConfig& config) {
  const double eps = config.eps;
  if (std::max({r.e1, r.e2, r.e3}) < eps) return SolveStatus::kkt;
  if (r.e3 > eps && r.e4 < eps) {
    return r.e3 <= config.singular_threshold() ? SolveStatus::singular_stationary
                                               : SolveStatus::infeasible_stationary;
  }
  return std::nullopt;
}

SolveResult solve(const ProblemDef& problem, const OuterConfig& config) {
  return solve(problem, config, problem.x0, Vec::Ones(problem.m));
}

SolveResult solve(const ProblemDef& problem, const OuterConfig& config, const Vec& x_start,
                  const Vec& s_start) {
  problem.validate();
  config.validate();
  if (config.inner.method == InnerMethod::newton && !problem.has_hessians()) {
    throw ConfigError("Newton inner mode needs Hessians, problem " + problem.name + " has none");
  }
  if (x_start.size() != problem.n) throw ConfigError("x_start has wrong length");
  if (s_start.size() != problem.m) throw ConfigError("s_start has wrong length");
  if (problem.m > 0 && s_start.minCoeff() < 0.0) throw ConfigError("s_start must be nonnegative");

  const bool basic = config.update_rule == UpdateRule::basic;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Vec x = x_start;
  Vec s = s_start;
  EqualityState eq{Vec::Zero(problem.p)};
  const EqualityState* eq_ptr = problem.p > 0 ? &eq : nullptr;
  double mu = config.mu0;
  double rho = config.rho0;
  Mat B = Mat::Identity(problem.n, problem.n);

  SolveResult out;
  IterationRecord rec;
  rec.k = 0;
  rec.f_val = eval_objective(problem, x);
  rec.residuals = eval_residuals(problem, x, s, eq.lambda, rho);
  rec.mu = mu;
  rec.rho = rho;
  rec.e_hat = nan;
  rec.e_tilde = nan;
  rec.x = x;
  rec.s = s;
  out.history.push_back(rec);

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.x_final = x;
    out.s_final = s;
    out.lambda_final = eq.lambda;
    return out;
  };

  for (int k = 0;; ++k) {
    if (auto verdict = classify_termination(out.history.back().residuals, config)) {
      return finish(*verdict);
    }
    if (k >= config.max_outer) return finish(SolveStatus::iteration_limit);

    if (!config.inner.warm_start_B) B = Mat::Identity(problem.n, problem.n);
    const SmoothingParams params{mu, rho};
    InnerResult inner = minimize_subproblem(problem, s, params, x, config.inner, B, eq_ptr);
    if (inner.status != InnerStatus::converged) return finish(SolveStatus::inner_failure);
    x = inner.x_new;

    // Unscaled |grad_x F(x_{k+1}, s_k)|_inf
    const double g = inner.final_scaled_grad_inf * rho;
    const Vec c = eval_constraints(problem, x);
    const SmoothedSlacks hat = eval_zy(c, s, params);
    const Vec s_cand = rho * hat.y;
    const SmoothedSlacks tilde = eval_zy(c, s_cand, params);

    rec = IterationRecord{};
    rec.k = k + 1;
    rec.inner_iters = inner.iters;
    rec.e_hat = inf_norm(hat.z - c);
    rec.e_tilde = inf_norm(tilde.z - c);

    if (rec.e_tilde > 0.95 * mu) {
      rec.accepted = false;
      rho = basic ? 2.0 * rho : std::max(2.0 * rho, std::min(rho * rho, (rho / g) * (rho / g)));
    } else {
      rec.accepted = true;
      if (eq_ptr) eq = update_lambda(eq, eval_equalities(problem, x), rho);
      s = s_cand;
      mu = basic ? 0.1 * mu : std::min(0.1 * mu, std::max(mu * mu, g * g));
      rho = std::max(rho, inf_norm(s));
    }

    rec.f_val = eval_objective(problem, x);
    rec.x = x;
    rec.s = s;
    rec.mu = mu;
    rec.rho = rho;
    if (!(rho <= config.rho_cap)) {
      rec.residuals = eval_residuals(problem, x, s, eq.lambda, std::min(rho, config.rho_cap));
      out.history.push_back(rec);
      return finish(SolveStatus::rho_overflow);
    }
    rec.residuals = eval_residuals(problem, x, s, eq.lambda, rho);
    out.history.push_back(rec);
  }
}

}  // namespace smalm
