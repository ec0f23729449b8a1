#include "smalm/smoothing.hpp"

#include <cmath>
#include <string>

namespace smalm {

namespace {

// Past this |t| the square in r = sqrt(t^2 + 4 mu/rho) overflows.
constexpr double kMaxShift = 1e150;

void require_same_length(const Vec& c_val, const Vec& s) {
  if (c_val.size() != s.size()) {
    throw ConfigError("c and s lengths differ: " + std::to_string(c_val.size()) + " vs " +
                      std::to_string(s.size()));
  }
}

// y - s/rho, which equals z - c. Each branch subtracts the two smaller
// quantities, so the quadratic terms of h never cancel against each other.
double quad_gap(double c, double sr, double z, double y) { return sr - c >= 0.0 ? z - c : y - sr; }

}  // namespace

void SmoothingParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be positive and finite");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be positive and finite");
}

SmoothedSlacks eval_zy(const Vec& c_val, const Vec& s, const SmoothingParams& params) {
  params.validate();
  require_same_length(c_val, s);
  const Eigen::Index m = c_val.size();
  const double q = params.mu / params.rho;

  SmoothedSlacks out;
  out.z.resize(m);
  out.y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = s(i) / params.rho - c_val(i);
    if (!(std::abs(t) <= kMaxShift)) {
      throw ParameterOverflow("s/rho - c overflows at constraint " + std::to_string(i));
    }
    const double r = std::sqrt(t * t + 4.0 * q);
    // Only ever add r and |t|; the small root comes from z y = mu/rho.
    if (t >= 0.0) {
      out.y(i) = 0.5 * (r + t);
      out.z(i) = 2.0 * q / (r + t);
    } else {
      out.z(i) = 0.5 * (r - t);
      out.y(i) = 2.0 * q / (r - t);
    }
  }
  out.sum_zy = out.z + out.y;
  out.frac_z = out.z.cwiseQuotient(out.sum_zy);
  out.frac_y = out.y.cwiseQuotient(out.sum_zy);
  return out;
}

Vec eval_h(const Vec& c_val, const Vec& s, const SmoothingParams& params) {
  SmoothedSlacks zy = eval_zy(c_val, s, params);
  const double mu = params.mu;
  const double rho = params.rho;
  Vec h(c_val.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    // (rho/2) y^2 - s^2/(2 rho) = (rho/2) (y - s/rho) (y + s/rho)
    const double sr = s(i) / rho;
    const double quad = 0.5 * rho * quad_gap(c_val(i), sr, zy.z(i), zy.y(i)) * (zy.y(i) + sr);
    if (!std::isfinite(quad)) {
      throw ParameterOverflow("penalty term overflows at constraint " + std::to_string(i));
    }
    h(i) = -mu * std::log(zy.z(i)) + quad;
  }
  return h;
}

Vec eval_h_scaled(const Vec& c_val, const Vec& s, const SmoothingParams& params) {
  SmoothedSlacks zy = eval_zy(c_val, s, params);
  const double q = params.mu / params.rho;
  Vec h(c_val.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double sr = s(i) / params.rho;
    h(i) = -q * std::log(zy.z(i)) + 0.5 * quad_gap(c_val(i), sr, zy.z(i), zy.y(i)) * (zy.y(i) + sr);
  }
  return h;
}

Vec eval_dh_drho(const Vec& c_val, const Vec& s, const SmoothingParams& params) {
  SmoothedSlacks zy = eval_zy(c_val, s, params);
  return 0.5 * (c_val - zy.z).array().square().matrix();
}

std::pair<Vec, Vec> zy_derivative_factors(const SmoothedSlacks& slacks) {
  return {slacks.frac_z, slacks.frac_y};
}

}  // namespace smalm
