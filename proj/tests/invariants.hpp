#pragma once

// Trajectory checks on a finished solve, shared by unit and acceptance tests.
// Each returns an empty string on success, otherwise the first violation.

#include <algorithm>
#include <cmath>
#include <string>

#include "smalm/outer_alm.hpp"

namespace invariants {

using smalm::IterationRecord;
using smalm::SolveResult;
using smalm::SolveStatus;

inline std::string at(int k, const std::string& what) { return "k=" + std::to_string(k) + ": " + what; }

// Monotone mu and rho, reject/accept bookkeeping and e1 after an accept.
inline std::string parameters(const SolveResult& res) {
  const auto& h = res.history;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].k != static_cast<int>(i)) return at(h[i].k, "records out of order");
    if (i == 0) continue;
    const IterationRecord& prev = h[i - 1];
    const IterationRecord& cur = h[i];
    if (cur.rho < prev.rho) return at(cur.k, "rho decreased");
    if (cur.mu > prev.mu) return at(cur.k, "mu increased");
    if (cur.s.size() > 0 && cur.s.minCoeff() < 0.0) return at(cur.k, "negative multiplier");
    if (cur.accepted) {
      if (!(cur.residuals.e1 <= 0.95 * prev.mu)) return at(cur.k, "e1 above 0.95 mu after accept");
      if (cur.s.size() > 0 && cur.s.lpNorm<Eigen::Infinity>() > cur.rho) return at(cur.k, "|s| > rho after accept");
    } else {
      if (cur.s != prev.s) return at(cur.k, "s changed on reject");
      if (cur.mu != prev.mu) return at(cur.k, "mu changed on reject");
      if (cur.rho < 2.0 * prev.rho) return at(cur.k, "rho grew less than 2x on reject");
    }
  }
  return "";
}

// The candidate multipliers never enlarge |z - c|_inf, and shrink it when nonzero.
inline std::string contraction(const SolveResult& res) {
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    const IterationRecord& r = res.history[i];
    if (!(r.e_tilde <= r.e_hat)) return at(r.k, "E~ > E^");
    if (r.e_hat > 0.0 && !(r.e_tilde < r.e_hat)) return at(r.k, "E~ did not shrink");
  }
  return "";
}

// |z_after - c| < |z_before - c|. When |c| dwarfs the move in z both
// distances can round to the same double, so ties are settled by checking
// that z itself moved toward c without crossing it.
inline bool strictly_closer(double c, double z_before, double z_after) {
  const double before = std::abs(z_before - c), after = std::abs(z_after - c);
  if (after != before) return after < before;
  if ((z_before > c) != (z_after > c)) return false;
  return z_before > c ? z_after < z_before : z_after > z_before;
}

inline std::string certificate(const SolveResult& res, double eps) {
  const auto& r = res.last().residuals;
  switch (res.status) {
    case SolveStatus::kkt:
      if (!(std::max({r.e1, r.e2, r.e3}) < eps)) return "kkt without small residuals";
      break;
    case SolveStatus::infeasible_stationary:
    case SolveStatus::singular_stationary:
      if (!(r.e3 > eps && r.e4 < eps)) return "stationary status without e3 > eps > e4";
      break;
    default:
      break;
  }
  if (res.s_final.size() > 0 && res.s_final.minCoeff() < 0.0) return "negative final multiplier";
  return "";
}

}  // namespace invariants
