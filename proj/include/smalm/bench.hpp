#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smalm/outer_alm.hpp"

namespace smalm {

// tp1 .. tp5, all with analytic Hessians.
std::map<std::string, ProblemDef> register_problems();

struct ReferenceOutcome {
  std::string problem;
  SolveStatus expected_status = SolveStatus::kkt;
  Vec x_expected;
  double x_tol = 1e-3;
  std::array<double, 4> row0;  // e1..e4 at x0, s = 1, rho = 1
  double f0 = 0.0;
  int reported_total_iters = 0;  // reference count the budget is scaled from
  int iter_budget = 0;           // allowed total inner iterations
  std::optional<double> e3_expected;
  double e3_tol = 1e-3;
  std::optional<double> e4_max;
  std::optional<Vec> s_expected;
  double s_tol = 1e-4;
  std::optional<double> rho_min;
  std::optional<double> mu_max;
  bool fast_infeasibility = false;  // e4 drops >= 5x per step at the end
};

std::vector<ReferenceOutcome> reference_outcomes();

struct CriterionResult {
  std::string problem;
  std::string criterion;
  bool applicable = true;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<CriterionResult> rows;
  std::map<std::string, SolveResult> runs;

  bool all_pass() const;
};

// Whether iteration budgets were calibrated for this configuration.
bool is_reference_config(const OuterConfig& config);

// e4 shrinks by `factor` on each of the last two transitions of the history.
bool e4_decays(const std::vector<IterationRecord>& history, double factor);

SuiteReport run_reference_suite(const OuterConfig& config);

}  // namespace smalm
