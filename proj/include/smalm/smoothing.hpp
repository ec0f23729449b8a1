#pragma once

#include <stdexcept>
#include <utility>

#include "smalm/nlp_model.hpp"

namespace smalm {

class ParameterOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct SmoothingParams {
  double mu = 0.1;
  double rho = 1.0;

  void validate() const;
};

/**
 * Closed-form smoothed slack z and smoothed multiplier y for each constraint.
 *
 * They are the positive roots of rho z y = mu, z - y = c - s/rho, so rho y is
 * the multiplier estimate and z -> max(c, 0) as mu -> 0.
 */
struct SmoothedSlacks {
  Vec z;
  Vec y;
  Vec sum_zy;
  Vec frac_z;  // z / (z + y)
  Vec frac_y;  // y / (z + y)
};

SmoothedSlacks eval_zy(const Vec& c_val, const Vec& s, const SmoothingParams& params);

// h_i = -mu ln z_i + (rho/2) y_i^2 - s_i^2 / (2 rho). Throws on overflow.
Vec eval_h(const Vec& c_val, const Vec& s, const SmoothingParams& params);

// h_i / rho, evaluated without forming rho-sized intermediates.
Vec eval_h_scaled(const Vec& c_val, const Vec& s, const SmoothingParams& params);

// Partial derivative of h_i in rho: (c_i - z_i)^2 / 2.
Vec eval_dh_drho(const Vec& c_val, const Vec& s, const SmoothingParams& params);

std::pair<Vec, Vec> zy_derivative_factors(const SmoothedSlacks& slacks);

}  // namespace smalm
