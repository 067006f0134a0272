// starpoly: degree sweeps, bounds and invariant suites.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or config error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "CLI11.hpp"
#include "json.hpp"
#include "starpoly/error.hpp"
#include "starpoly/sweep.hpp"
#include "starpoly/verify.hpp"
#include "starpoly/zoo.hpp"

using namespace starpoly;

namespace {

constexpr int kPass = 0, kCheckFailure = 1, kUsage = 2, kNumerical = 3;

struct Overrides {
  std::optional<double> tol;
  std::string chi;
  std::string degrees;
  std::string out;
};

ProblemConfig load(const std::string& problem, const Overrides& o) {
  // Overrides go back through the config parser so they get the same validation.
  auto j = nlohmann::json::parse(config_to_json(resolve_problem(problem)));
  if (o.tol) j["tol"] = *o.tol;
  if (!o.chi.empty()) j["chi"] = o.chi;
  if (!o.degrees.empty()) j["degrees"] = o.degrees;
  if (!o.out.empty()) j["out"] = o.out;
  return parse_config(j.dump());
}

void print_rows(const SweepResult& r, bool bounds) {
  std::printf("problem %s on [%g, %g], J = [%.6g, %.6g]\n", r.config.name.c_str(), r.config.a, r.config.b, r.j.lo,
              r.j.hi);
  if (r.config.v_scale != 1.0) std::printf("v normalized (input norm %.17g)\n", r.config.v_scale);
  if (bounds) std::printf("%4s %14s %14s %14s\n", "n", "En_bound", "bern_fixed", "bern_opt");
  else
    std::printf("%4s %12s %12s %12s %12s %12s %12s  %s\n", "n", "measured", "peano_baker", "channel", "En_bound",
                "bern_opt", "commut", "chain");
  for (const auto& row : r.rows) {
    const auto& d = row.report;
    if (bounds) {
      std::printf("%4zu %14.6e %14.6e %14.6e\n", row.n, d.bounds.theorem_bound, d.bernstein_fixed, row.bernstein_opt);
      continue;
    }
    const std::string chain = d.status != ChainStatus::Asserted ? "not asserted: " + to_string(d.status)
                              : d.chain_holds                   ? "pass"
                                                                : "FAIL";
    std::printf("%4zu %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e  %s\n", row.n, d.measured_l2, d.peano_baker_l2,
                d.channel_bound, d.bounds.theorem_bound, row.bernstein_opt, d.commutation_residual, chain.c_str());
  }
}

int run_problem(const std::string& problem, const Overrides& o, const SweepOptions& so, bool bounds) {
  const ProblemConfig cfg = load(problem, o);
  const SweepResult r = bounds ? run_bounds(cfg, so) : run_sweep(cfg, so);
  print_rows(r, bounds);
  const std::string out = cfg.out.empty() ? cfg.name + (bounds ? "_bounds" : "_sweep") : cfg.out;
  write_reports(r, so, out, bounds ? "bounds" : "sweep", bounds);
  std::printf("wrote %s.csv and %s.json\n", out.c_str(), out.c_str());
  if (!r.minimax_converged) {
    std::fprintf(stderr, "Remez did not converge at some degree; E_n is an upper bound there\n");
    return kNumerical;
  }
  if (bounds) return kPass;
  if (!r.asserted) std::printf("theorem bound: not asserted (hypothesis violated or J excludes 0)\n");
  else std::printf("theorem bound: %s\n", r.all_pass ? "pass" : "FAIL");
  return r.asserted && !r.all_pass ? kCheckFailure : kPass;
}

int run_verify_cmd(const std::string& suite) {
  const auto results = run_verify(suite);
  bool ok = true;
  for (const auto& c : results) {
    ok = ok && c.pass;
    std::printf("[%s] %-9s %-58s measured %-11.3e limit %-9.1e %8.1f ms%s%s\n", c.pass ? "PASS" : "FAIL",
                c.suite.c_str(), c.name.c_str(), c.measured, c.limit, c.ms, c.detail.empty() ? "" : "  ",
                c.detail.c_str());
  }
  std::printf("%zu checks, %s\n", results.size(), ok ? "all passed" : "FAILURES");
  return ok ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Star-polynomial approximation of time-ordered exponentials"};
  app.require_subcommand(1);

  Overrides o;
  SweepOptions so;
  unsigned threads = 1;
  if (const char* env = std::getenv("STAR_APPROX_THREADS")) {
    try {
      threads = static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      std::fprintf(stderr, "ignoring STAR_APPROX_THREADS=%s\n", env);
    }
  }
  double tol = std::numeric_limits<double>::quiet_NaN();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "reference solver tolerance (>= 1e-14)");
    sub->add_option("--chi", o.chi, "Bernstein parameter: a value > 1 or \"optimize\"");
    sub->add_option("--degrees", o.degrees, "degree range a..b");
    sub->add_option("--out", o.out, "output path without extension");
    sub->add_option("--threads", threads, "worker threads (default $STAR_APPROX_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", so.timing, "record wall_ms (makes the CSV run dependent)");
  };

  std::string problem = "commuting_demo";
  auto* demo = app.add_subcommand("demo", "sweep the bundled commuting_demo problem");
  add_common(demo);
  auto* sweep = app.add_subcommand("sweep", "degree sweep with reference solve");
  sweep->add_option("config", problem, "config path or zoo name (" + [] {
    std::string s;
    for (const auto& n : zoo_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")")->required();
  add_common(sweep);
  auto* bounds = app.add_subcommand("bounds", "E_n and Bernstein bounds only, no ODE solve");
  bounds->add_option("config", problem, "config path or zoo name")->required();
  add_common(bounds);
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suite", suite, "kernel, starcalc, spectral, norms, approx or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  if (!std::isnan(tol)) o.tol = tol;
  so.threads = threads;

  const std::string ctx = verify->parsed() ? "verify" : problem;
  try {
    if (verify->parsed()) return run_verify_cmd(suite);
    return run_problem(problem, o, so, bounds->parsed());
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s: %s\n", ctx.c_str(), e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "%s: %s\n", ctx.c_str(), e.what());
    return kUsage;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "%s: %s\n", ctx.c_str(), e.what());
    return kUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: numerical failure: %s\n", ctx.c_str(), e.what());
    return kNumerical;
  }
}
