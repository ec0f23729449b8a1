#pragma once

#include "smalm/nlp_model.hpp"
#include "smalm/smoothing.hpp"

namespace smalm {

// F(x, s; mu, rho) = f(x) + sum_i h_i and its x-gradient, plus the
// 1/rho-scaled copies the inner solver works with.
struct AuglagEval {
  double value = 0.0;
  double scaled_value = 0.0;
  Vec grad_x;
  Vec scaled_grad_x;
  SmoothedSlacks slacks;
  // Set when value (not scaled_value) is not representable.
  bool value_overflow = false;
};

struct EqualityState {
  Vec lambda;
};

AuglagEval eval_F(const ProblemDef& problem, const Vec& x, const Vec& s,
                  const SmoothingParams& params);

// Unscaled x-Hessian. Needs the problem's Hessian callbacks.
Mat hess_x_F(const ProblemDef& problem, const Vec& x, const Vec& s,
             const SmoothingParams& params);

// z - c(x)
Vec grad_s_F(const ProblemDef& problem, const Vec& x, const Vec& s,
             const SmoothingParams& params);

// Diagonal entries -(1/rho) z_i / (z_i + y_i), all negative.
Eigen::DiagonalMatrix<double, Eigen::Dynamic> hess_s_F(const ProblemDef& problem, const Vec& x,
                                                       const Vec& s, const SmoothingParams& params);

// F + lambda' h + (rho/2) |h|^2
AuglagEval eval_F_eq(const ProblemDef& problem, const Vec& x, const Vec& s,
                     const EqualityState& eq, const SmoothingParams& params);

Mat hess_x_F_eq(const ProblemDef& problem, const Vec& x, const Vec& s,
                const EqualityState& eq, const SmoothingParams& params);

// lambda + rho h
EqualityState update_lambda(const EqualityState& eq, const Vec& h_val, double rho);

}  // namespace smalm
