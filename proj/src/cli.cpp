#include "smalm/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "smalm/bench.hpp"

namespace smalm::cli {

using nlohmann::json;

std::string format_table_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[32];
  if (std::abs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.3e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", v);
  }
  return buf;
}

std::string format_csv_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_table(std::ostream& os, const SolveResult& result) {
  const char* head[] = {"k", "f_k", "E_k1", "E_k2", "E_k3", "E_k4", "mu_k", "rho_k", "iter_sb"};
  const int width[] = {4, 11, 11, 11, 11, 11, 10, 10, 8};
  for (int i = 0; i < 9; ++i) os << std::setw(width[i]) << head[i];
  os << '\n';
  for (const auto& rec : result.history) {
    const double vals[] = {rec.f_val, rec.residuals.e1, rec.residuals.e2, rec.residuals.e3,
                           rec.residuals.e4, rec.mu, rec.rho};
    os << std::setw(width[0]) << rec.k;
    for (int i = 0; i < 7; ++i) os << std::setw(width[i + 1]) << format_table_number(vals[i]);
    os << std::setw(width[8]) << (rec.k == 0 ? std::string("-") : std::to_string(rec.inner_iters))
       << '\n';
  }
  os << "status: " << to_string(result.status) << '\n';
  auto vec_line = [&](const char* label, const Vec& v) {
    os << label << ':';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_table_number(v(i));
    os << '\n';
  };
  vec_line("x_final", result.x_final);
  vec_line("s_final", result.s_final);
  os << "inner iterations: " << result.total_inner_iterations() << '\n';
}

void write_csv(std::ostream& os, const SolveResult& result) {
  os << "k,f,E1,E2,E3,E4,mu,rho,inner_iters\n";
  for (const auto& rec : result.history) {
    os << rec.k;
    for (double v : {rec.f_val, rec.residuals.e1, rec.residuals.e2, rec.residuals.e3,
                     rec.residuals.e4, rec.mu, rec.rho}) {
      os << ',' << format_csv_number(v);
    }
    os << ',' << (rec.k == 0 ? std::string("-") : std::to_string(rec.inner_iters)) << '\n';
  }
}

namespace {

// JSON has no NaN; null stands in for it.
json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double num_back(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json to_array(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec from_array(const json& arr) {
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

json record_to_json(const IterationRecord& rec) {
  return json{{"type", "iteration"},
              {"k", rec.k},
              {"f", num(rec.f_val)},
              {"E1", num(rec.residuals.e1)},
              {"E2", num(rec.residuals.e2)},
              {"E3", num(rec.residuals.e3)},
              {"E4", num(rec.residuals.e4)},
              {"mu", num(rec.mu)},
              {"rho", num(rec.rho)},
              {"inner_iters", rec.inner_iters},
              {"accepted", rec.accepted},
              {"e_hat", num(rec.e_hat)},
              {"e_tilde", num(rec.e_tilde)},
              {"x", to_array(rec.x)},
              {"s", to_array(rec.s)}};
}

IterationRecord record_from_json(const json& j) {
  IterationRecord rec;
  rec.k = j.at("k").get<int>();
  rec.f_val = num_back(j.at("f"));
  rec.residuals.e1 = num_back(j.at("E1"));
  rec.residuals.e2 = num_back(j.at("E2"));
  rec.residuals.e3 = num_back(j.at("E3"));
  rec.residuals.e4 = num_back(j.at("E4"));
  rec.mu = num_back(j.at("mu"));
  rec.rho = num_back(j.at("rho"));
  rec.inner_iters = j.at("inner_iters").get<int>();
  rec.accepted = j.at("accepted").get<bool>();
  rec.e_hat = num_back(j.at("e_hat"));
  rec.e_tilde = num_back(j.at("e_tilde"));
  rec.x = from_array(j.at("x"));
  rec.s = from_array(j.at("s"));
  return rec;
}

void write_json_lines(std::ostream& os, const std::string& problem, const SolveResult& result) {
  for (const auto& rec : result.history) os << record_to_json(rec).dump() << '\n';
  json summary{{"type", "summary"},
               {"problem", problem},
               {"status", to_string(result.status)},
               {"x_final", to_array(result.x_final)},
               {"s_final", to_array(result.s_final)},
               {"outer_iterations", result.outer_iterations()},
               {"inner_iterations", result.total_inner_iterations()}};
  if (result.lambda_final.size() > 0) summary["lambda_final"] = to_array(result.lambda_final);
  os << summary.dump() << '\n';
}

ParsedLog parse_json_lines(std::istream& is) {
  ParsedLog log;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.at("type") == "iteration") {
      log.history.push_back(record_from_json(j));
    } else {
      log.summary = std::move(j);
    }
  }
  return log;
}

namespace {

struct Overrides {
  double mu0 = OuterConfig{}.mu0;
  double rho0 = OuterConfig{}.rho0;
  double eps = OuterConfig{}.eps;
  int max_outer = OuterConfig{}.max_outer;
  std::string inner = "bfgs";
  std::string update = "adaptive";
  double singular_tol = std::numeric_limits<double>::quiet_NaN();
  double sigma = InnerConfig{}.sigma;
  double backtrack = InnerConfig{}.backtrack;
  int inner_max_iters = InnerConfig{}.max_iters;
  int min_inner_iters = InnerConfig{}.min_iters;
  bool cold_start = false;

  void attach(CLI::App* app) {
    app->add_option("--mu0", mu0, "initial smoothing parameter");
    app->add_option("--rho0", rho0, "initial penalty parameter");
    app->add_option("--eps", eps, "termination tolerance");
    app->add_option("--max-outer", max_outer, "outer iteration limit");
    app->add_option("--inner", inner, "inner solver")->check(CLI::IsMember({"bfgs", "newton"}));
    app->add_option("--update", update, "parameter update rule")
        ->check(CLI::IsMember({"basic", "adaptive"}));
    app->add_option("--singular-tol", singular_tol, "e3 threshold for singular stationary (default 100*eps)");
    app->add_option("--sigma", sigma, "Armijo constant");
    app->add_option("--backtrack", backtrack, "line-search reduction factor");
    app->add_option("--inner-max-iters", inner_max_iters, "iteration cap per subproblem");
    app->add_option("--min-inner-iters", min_inner_iters, "steps before the inner stopping test applies");
    app->add_flag("--cold-start", cold_start, "reset the quasi-Newton matrix every outer iteration");
  }

  OuterConfig build() const {
    OuterConfig c;
    c.mu0 = mu0;
    c.rho0 = rho0;
    c.eps = eps;
    c.max_outer = max_outer;
    c.update_rule = update == "basic" ? UpdateRule::basic : UpdateRule::adaptive;
    if (!std::isnan(singular_tol)) c.singular_tol = singular_tol;
    c.inner.method = inner == "newton" ? InnerMethod::newton : InnerMethod::quasi_newton;
    c.inner.sigma = sigma;
    c.inner.backtrack = backtrack;
    c.inner.max_iters = inner_max_iters;
    c.inner.min_iters = min_inner_iters;
    c.inner.warm_start_B = !cold_start;
    c.validate();
    return c;
  }
};

int do_solve(const std::string& name, const Overrides& ov, const std::string& format,
             const std::string& output, std::ostream& out, std::ostream& err) {
  const ProblemDef problem = get_problem(name);
  const OuterConfig config = ov.build();
  const SolveResult result = solve(problem, config);

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) {
      err << "cannot open " << output << " for writing\n";
      return 2;
    }
  }
  std::ostream& os = output.empty() ? out : file;
  if (format == "csv") {
    write_csv(os, result);
    err << "status: " << to_string(result.status) << '\n';
  } else if (format == "json-lines") {
    write_json_lines(os, name, result);
  } else {
    write_table(os, result);
  }
  return is_terminus(result.status) ? 0 : 1;
}

int do_bench(const Overrides& ov, std::ostream& out) {
  const SuiteReport report = run_reference_suite(ov.build());
  int failures = 0;
  for (const auto& row : report.rows) {
    const char* verdict = !row.applicable ? "N/A " : row.pass ? "PASS" : "FAIL";
    if (row.applicable && !row.pass) ++failures;
    out << std::left << std::setw(5) << row.problem << std::setw(19) << row.criterion << verdict
        << "  " << row.detail << '\n'
        << std::right;
  }
  out << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}

int do_check(const std::string& name, double tol, int points, unsigned seed, std::ostream& out) {
  const ProblemDef problem = get_problem(name);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  bool ok = true;
  for (int k = 0; k <= points; ++k) {
    Vec x = problem.x0;
    if (k > 0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
    }
    const FdReport rep = finite_diff_check(problem, x, tol);
    ok = ok && rep.pass;
    if (k == 0 || !rep.pass) {
      out << (k == 0 ? "x0" : "random point " + std::to_string(k)) << ": max relative error "
          << format_table_number(rep.max_err) << " (grad " << format_table_number(rep.grad_err)
          << ", jac " << format_table_number(rep.jac_err) << ", hess f "
          << format_table_number(rep.obj_hess_err) << ", hess c "
          << format_table_number(rep.con_hess_err) << ")" << (rep.pass ? "" : " FAIL") << '\n';
    }
  }
  out << name << ": derivative check " << (ok ? "passed" : "FAILED") << " at " << points + 1
      << " points, tol " << format_table_number(tol) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smoothed augmented Lagrangian solver"};
  app.name("smalm");
  app.require_subcommand(1);

  std::string problem;
  std::string format = "table";
  std::string output;
  Overrides solve_ov;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a registered problem");
  solve_cmd->add_option("problem", problem, "problem name")->required();
  solve_cmd->add_option("--format", format, "table, csv or json-lines")
      ->check(CLI::IsMember({"table", "csv", "json-lines"}));
  solve_cmd->add_option("-o,--output", output, "write the log here instead of stdout");
  solve_ov.attach(solve_cmd);

  Overrides bench_ov;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run the reference suite on tp1..tp5");
  bench_ov.attach(bench_cmd);

  std::string check_problem;
  double tol = 1e-5;
  int points = 20;
  unsigned seed = 1;
  CLI::App* check_cmd = app.add_subcommand("check", "finite-difference check of a problem's derivatives");
  check_cmd->add_option("problem", check_problem, "problem name")->required();
  check_cmd->add_option("--tol", tol, "relative error tolerance");
  check_cmd->add_option("--points", points, "random points in [-5,5]^n besides x0")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*solve_cmd) return do_solve(problem, solve_ov, format, output, out, err);
    if (*bench_cmd) return do_bench(bench_ov, out);
    return do_check(check_problem, tol, points, seed, out);
  } catch (const LookupError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace smalm::cli
