#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smalm/inner_solver.hpp"

namespace smalm {

enum class UpdateRule { basic, adaptive };

struct OuterConfig {
  double mu0 = 0.1;
  double rho0 = 1.0;
  double eps = 1e-8;
  int max_outer = 200;
  UpdateRule update_rule = UpdateRule::adaptive;
  double rho_cap = 1e30;
  // Threshold on e3 separating singular from infeasible stationary points.
  // Unset means 100 * eps.
  std::optional<double> singular_tol;
  InnerConfig inner;

  double singular_threshold() const { return singular_tol.value_or(100.0 * eps); }
  void validate() const;
};

enum class SolveStatus {
  kkt,
  infeasible_stationary,
  singular_stationary,
  iteration_limit,
  inner_failure,
  rho_overflow,
};

std::string_view to_string(SolveStatus status);
std::optional<SolveStatus> status_from_string(std::string_view name);
// kkt and the two stationary outcomes.
bool is_terminus(SolveStatus status);

struct IterationRecord {
  int k = 0;
  double f_val = 0.0;
  Residuals residuals;
  double mu = 0.0;
  double rho = 0.0;
  int inner_iters = 0;
  bool accepted = false;
  // |z(x_{k}, s_{k-1}) - c|_inf and the same with the candidate multipliers;
  // NaN on the initial record.
  double e_hat = 0.0;
  double e_tilde = 0.0;
  Vec x;
  Vec s;
};

struct SolveResult {
  SolveStatus status = SolveStatus::iteration_limit;
  Vec x_final;
  Vec s_final;
  Vec lambda_final;  // empty when p = 0
  std::vector<IterationRecord> history;

  int outer_iterations() const { return static_cast<int>(history.size()) - 1; }
  int total_inner_iterations() const;
  const IterationRecord& last() const { return history.back(); }
};

// nullopt means "keep iterating".
std::optional<SolveStatus> classify_termination(const Residuals& residuals,
                                                const OuterConfig& config);

SolveResult solve(const ProblemDef& problem, const OuterConfig& config);
SolveResult solve(const ProblemDef& problem, const OuterConfig& config, const Vec& x_start,
                  const Vec& s_start);

}  // namespace smalm
