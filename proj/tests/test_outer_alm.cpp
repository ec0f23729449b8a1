#include <doctest.h>

#include <cmath>

#include "invariants.hpp"
#include "smalm/bench.hpp"
#include "smalm/outer_alm.hpp"

using namespace smalm;

namespace {

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

void check_all_invariants(const SolveResult& res, const OuterConfig& cfg) {
  CHECK(invariants::parameters(res) == "");
  CHECK(invariants::contraction(res) == "");
  CHECK(invariants::certificate(res, cfg.eps) == "");
}

// min x1^2 + x2^2  s.t.  x1 >= 0.8,  x1 + x2 = 1; solution (0.8, 0.2),
// s = 1.2, lambda = -0.4
ProblemDef eq_problem() {
  ProblemDef p;
  p.name = "eq";
  p.n = 2;
  p.m = 1;
  p.p = 1;
  p.objective = [](const Vec& x) { return x.squaredNorm(); };
  p.objective_grad = [](const Vec& x) { return (2.0 * x).eval(); };
  p.objective_hess = [](const Vec&) { return (2.0 * Mat::Identity(2, 2)).eval(); };
  p.constraints = [](const Vec& x) { return Vec::Constant(1, x(0) - 0.8); };
  p.constraints_jac = [](const Vec&) { return Mat(v2(1, 0)); };
  p.constraints_hess = [](const Vec&, int) { return Mat::Zero(2, 2).eval(); };
  p.equalities = [](const Vec& x) { return Vec::Constant(1, x(0) + x(1) - 1.0); };
  p.equalities_jac = [](const Vec&) { return Mat(v2(1, 1)); };
  p.equalities_hess = [](const Vec&, int) { return Mat::Zero(2, 2).eval(); };
  p.x0 = v2(3.0, -1.0);
  return p;
}

}  // namespace

TEST_SUITE("outer_alm") {

TEST_CASE("classification") {
  OuterConfig cfg;
  CHECK(classify_termination({1e-9, 1e-9, 1e-9, 5.0}, cfg) == SolveStatus::kkt);
  cfg.singular_tol = 1e-6;
  CHECK(classify_termination({5e-14, 9e-22, 1.08e-8, 3.8e-11}, cfg) == SolveStatus::singular_stationary);
  CHECK(classify_termination({1.2e-20, 4e-21, 0.3497, 1.07e-10}, cfg) == SolveStatus::infeasible_stationary);
  CHECK_FALSE(classify_termination({1e-3, 1e-9, 1e-9, 1e-9}, cfg).has_value());
  CHECK_FALSE(classify_termination({1e-9, 1e-9, 0.5, 1e-3}, cfg).has_value());
  cfg.singular_tol.reset();
  CHECK(cfg.singular_threshold() == doctest::Approx(1e-6));
  cfg.eps = 1e-6;
  CHECK(cfg.singular_threshold() == doctest::Approx(1e-4));
}

TEST_CASE("status names round-trip") {
  for (SolveStatus st : {SolveStatus::kkt, SolveStatus::infeasible_stationary, SolveStatus::singular_stationary,
                         SolveStatus::iteration_limit, SolveStatus::inner_failure, SolveStatus::rho_overflow}) {
    CHECK(status_from_string(to_string(st)) == st);
  }
  CHECK_FALSE(status_from_string("bogus").has_value());
}

TEST_CASE("configuration validation") {
  ProblemDef p = get_problem("tp4");
  OuterConfig cfg;
  cfg.eps = 0.0;
  CHECK_THROWS_AS(solve(p, cfg), ConfigError);
  cfg = OuterConfig{};
  cfg.eps = 0.2;
  CHECK_THROWS_AS(solve(p, cfg), ConfigError);
  cfg = OuterConfig{};
  cfg.rho0 = 0.5;
  CHECK_THROWS_AS(solve(p, cfg), ConfigError);
  cfg = OuterConfig{};
  cfg.mu0 = 1.0;
  CHECK_THROWS_AS(solve(p, cfg), ConfigError);
  cfg = OuterConfig{};
  cfg.inner.method = InnerMethod::newton;
  p.constraints_hess = nullptr;
  CHECK_THROWS_AS(solve(p, cfg), ConfigError);
}

TEST_CASE("start at a KKT point") {
  ProblemDef p = get_problem("tp4");
  SolveResult res = solve(p, OuterConfig{}, Vec::Constant(1, 2.0), v2(0.0, 1.0));
  CHECK(res.status == SolveStatus::kkt);
  CHECK(res.outer_iterations() == 0);
  CHECK(res.history.size() == 1);
}

TEST_CASE("reference problems end where expected") {
  OuterConfig cfg;
  SUBCASE("tp1") {
    SolveResult res = solve(get_problem("tp1"), cfg);
    CHECK(res.status == SolveStatus::infeasible_stationary);
    CHECK(std::abs(res.x_final(0)) <= 1e-3);
    CHECK(std::abs(res.x_final(1) - 0.7728) <= 1e-3);
    CHECK(res.last().f_val == doctest::Approx(0.7728).epsilon(1e-3));
    CHECK(res.last().residuals.e4 <= 1e-8);
    check_all_invariants(res, cfg);
  }
  SUBCASE("tp4") {
    SolveResult res = solve(get_problem("tp4"), cfg);
    CHECK(res.status == SolveStatus::kkt);
    CHECK(std::abs(res.x_final(0) - 2.0) <= 1e-4);
    CHECK(std::abs(res.s_final(0)) <= 1e-4);
    CHECK(std::abs(res.s_final(1) - 1.0) <= 1e-4);
    check_all_invariants(res, cfg);
  }
  SUBCASE("tp5") {
    SolveResult res = solve(get_problem("tp5"), cfg);
    CHECK(res.status == SolveStatus::singular_stationary);
    CHECK((res.x_final - v2(1.0, 0.0)).lpNorm<Eigen::Infinity>() <= 1e-2);
    CHECK(res.last().residuals.e3 > cfg.eps);
    CHECK(res.last().residuals.e3 <= 100.0 * cfg.eps);
    check_all_invariants(res, cfg);
  }
}

TEST_CASE("basic update rule") {
  OuterConfig cfg;
  cfg.update_rule = UpdateRule::basic;
  for (const auto& name : problem_names()) {
    SolveResult res = solve(get_problem(name), cfg);
    CAPTURE(name);
    CHECK(is_terminus(res.status));
    check_all_invariants(res, cfg);
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      const auto& prev = res.history[i - 1];
      const auto& cur = res.history[i];
      if (cur.accepted) {
        CHECK(cur.mu == doctest::Approx(0.1 * prev.mu));
      } else {
        CHECK(cur.rho == 2.0 * prev.rho);
      }
    }
  }
}

TEST_CASE("Newton inner mode") {
  OuterConfig cfg;
  cfg.inner.method = InnerMethod::newton;
  const SolveStatus expected[] = {SolveStatus::infeasible_stationary, SolveStatus::infeasible_stationary,
                                  SolveStatus::infeasible_stationary, SolveStatus::kkt,
                                  SolveStatus::singular_stationary};
  int i = 0;
  for (const auto& name : problem_names()) {
    SolveResult res = solve(get_problem(name), cfg);
    CAPTURE(name);
    CHECK(res.status == expected[i++]);
    check_all_invariants(res, cfg);
  }
}

TEST_CASE("adaptive penalty growth uses the unscaled gradient") {
  // On a reject, rho_{k+1} = max(2 rho, min(rho^2, rho^2 / g^2)).
  OuterConfig cfg;
  SolveResult res = solve(get_problem("tp2"), cfg);
  bool saw_fast_growth = false;
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    const auto& prev = res.history[i - 1];
    const auto& cur = res.history[i];
    if (!cur.accepted) {
      CHECK(cur.rho <= std::max(2.0 * prev.rho, prev.rho * prev.rho) * (1.0 + 1e-12));
      saw_fast_growth = saw_fast_growth || cur.rho > 2.0 * prev.rho;
    }
  }
  CHECK(saw_fast_growth);
}

TEST_CASE("limits and failures") {
  ProblemDef p = get_problem("tp1");
  SUBCASE("outer iteration limit") {
    OuterConfig cfg;
    cfg.max_outer = 2;
    SolveResult res = solve(p, cfg);
    CHECK(res.status == SolveStatus::iteration_limit);
    CHECK(res.outer_iterations() == 2);
  }
  SUBCASE("rho cap") {
    OuterConfig cfg;
    cfg.rho_cap = 100.0;
    SolveResult res = solve(p, cfg);
    CHECK(res.status == SolveStatus::rho_overflow);
    CHECK(res.last().rho > 100.0);
  }
  SUBCASE("inner failure") {
    OuterConfig cfg;
    cfg.inner.max_iters = 2;
    SolveResult res = solve(p, cfg);
    CHECK(res.status == SolveStatus::inner_failure);
    CHECK(res.x_final == p.x0);
  }
}

TEST_CASE("cold start still solves tp4") {
  OuterConfig cfg;
  cfg.inner.warm_start_B = false;
  SolveResult res = solve(get_problem("tp4"), cfg);
  CHECK(res.status == SolveStatus::kkt);
  CHECK(std::abs(res.x_final(0) - 2.0) <= 1e-4);
}

TEST_CASE("equality constraints") {
  ProblemDef p = eq_problem();
  for (InnerMethod method : {InnerMethod::quasi_newton, InnerMethod::newton}) {
    OuterConfig cfg;
    cfg.inner.method = method;
    SolveResult res = solve(p, cfg);
    CHECK(res.status == SolveStatus::kkt);
    // Residuals are measured relative to rho, so multiplier accuracy scales with it.
    const double tol = 10.0 * cfg.eps * res.last().rho;
    CHECK((res.x_final - v2(0.8, 0.2)).lpNorm<Eigen::Infinity>() <= 1e-5);
    CHECK(std::abs(res.s_final(0) - 1.2) <= tol);
    CHECK(std::abs(res.lambda_final(0) + 0.4) <= tol);
    check_all_invariants(res, cfg);
  }
}

}
