#pragma once

#include <vector>

#include "smalm/auglag.hpp"

namespace smalm {

enum class InnerMethod { quasi_newton, newton };

struct InnerConfig {
  InnerMethod method = InnerMethod::quasi_newton;
  double sigma = 1e-4;     // Armijo constant
  double backtrack = 0.5;  // step reduction factor
  int max_iters = 100;
  // Steps taken before the inexactness test may end the subproblem. With 0
  // an outer iteration whose start already passes the test leaves x where it
  // is, and a rejected multiplier update then only grows rho.
  int min_iters = 2;
  double min_step = 1e-16;
  bool warm_start_B = true;

  void validate() const;
};

enum class InnerStatus { converged, iteration_limit, linesearch_failure };

struct InnerStep {
  double alpha = 0.0;
  double phi_before = 0.0;
  double phi_after = 0.0;
  double slope = 0.0;  // g'd at the start of the step
  double grad_inf_after = 0.0;
  double shift = 0.0;  // Newton only: tau added to the diagonal
};

struct InnerResult {
  Vec x_new;
  double final_scaled_grad_inf = 0.0;
  int iters = 0;
  InnerStatus status = InnerStatus::converged;
  std::vector<InnerStep> steps;
};

/**
 * Armijo line-search minimization of (1/rho) F(., s; mu, rho) from x_start,
 * stopping once |(1/rho) grad_x F|_inf <= 0.95 mu.
 *
 * B is the quasi-Newton matrix for the scaled objective; an empty B starts
 * from the identity. It is updated in place and ignored in Newton mode.
 * Pass eq to minimize the equality-augmented objective instead.
 */
InnerResult minimize_subproblem(const ProblemDef& problem, const Vec& s,
                                const SmoothingParams& params, const Vec& x_start,
                                const InnerConfig& config, Mat& B,
                                const EqualityState* eq = nullptr);

}  // namespace smalm
