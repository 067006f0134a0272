#include "starpoly/sweep.hpp"

#include <Eigen/Core>
#include <atomic>
#include <boost/version.hpp>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "starpoly/error.hpp"

#ifndef STARPOLY_VERSION
#define STARPOLY_VERSION "unknown"
#endif

namespace starpoly {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Runs body(i) for i in [0, count) on up to `threads` workers; rethrows the
// first failure.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::string chain_label(const DegreeReport& r) {
  if (r.status != ChainStatus::Asserted) return "not asserted (" + to_string(r.status) + ")";
  return r.chain_holds ? "pass" : "fail";
}

void finish(SweepResult& res) {
  for (const auto& row : res.rows) {
    if (row.report.status != ChainStatus::Asserted) res.asserted = false;
    else if (!row.report.chain_holds) res.all_pass = false;
    if (!row.report.minimax_converged) res.minimax_converged = false;
  }
}

}  // namespace

SweepResult run_sweep(const ProblemConfig& cfg, const SweepOptions& opt) {
  const HermitianCurve curve = build_curve(cfg);
  const PreparedProblem p = prepare_problem(curve, initial_vector(cfg), cfg.n_max, cfg.tol);
  SweepResult res{cfg, p.j, std::vector<SweepRow>(cfg.n_max - cfg.n_min + 1)};
  const double len = cfg.b - cfg.a;
  parallel_for(res.rows.size(), opt.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow& row = res.rows[i];
    row.n = cfg.n_min + i;
    row.report = theorem_bound_check(p, row.n);
    row.bernstein_opt =
        cfg.chi ? bernstein_bound(p.j, len, row.n, cfg.chi).bernstein_bound : row.report.bounds.bernstein_bound;
    if (opt.timing)
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  finish(res);
  return res;
}

SweepResult run_bounds(const ProblemConfig& cfg, const SweepOptions& opt) {
  const HermitianCurve curve = build_curve(cfg);
  const RealRange j = spectral_interval_J(analytic_eigendecompose(curve));
  SweepResult res{cfg, j, std::vector<SweepRow>(cfg.n_max - cfg.n_min + 1)};
  const double len = cfg.b - cfg.a;
  parallel_for(res.rows.size(), opt.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow& row = res.rows[i];
    row.n = cfg.n_min + i;
    row.report = bounds_only(j, len, row.n);
    row.bernstein_opt = cfg.chi ? bernstein_bound(j, len, row.n, cfg.chi).bernstein_bound
                                : row.report.bounds.bernstein_bound;
    if (opt.timing)
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  for (const auto& row : res.rows)
    if (!row.report.minimax_converged) res.minimax_converged = false;
  return res;
}

void write_csv(std::ostream& os, const SweepResult& r, bool bounds_only) {
  os << kSweepHeader << '\n';
  for (const auto& row : r.rows) {
    const auto& d = row.report;
    os << row.n << ',';
    if (bounds_only) os << ",,,";
    else os << num(d.measured_l2) << ',' << num(d.peano_baker_l2) << ',' << num(d.channel_bound) << ',';
    os << num(d.bounds.theorem_bound) << ',' << num(d.bernstein_fixed) << ',' << num(row.bernstein_opt) << ',';
    if (bounds_only) os << ',';
    else os << num(d.commutation_residual) << ',';
    os << num(row.wall_ms) << '\n';
  }
}

std::string manifest_json(const SweepResult& r, const SweepOptions& opt, const std::string& command) {
  json m;
  m["schema"] = 1;
  m["tool"] = "starpoly";
  m["command"] = command;
  m["versions"] = {{"starpoly", STARPOLY_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
                                 "." + std::to_string(BOOST_VERSION % 100)}};
  m["config"] = json::parse(config_to_json(r.config));
  m["tolerances"] = {{"reference", num(r.config.tol)},
                     {"commutation", num(kCommutationTol)},
                     {"chain_slack", num(kChainSlack)}};
  m["seed"] = r.config.seed;
  m["threads"] = opt.threads;
  m["timing"] = opt.timing;
  m["J"] = {num(r.j.lo), num(r.j.hi)};
  m["theorem_bound"] = command == "bounds" ? "not computed" : r.asserted ? (r.all_pass ? "pass" : "fail") : "not asserted";
  m["degrees"] = json::array();
  for (const auto& row : r.rows) {
    const auto& d = row.report;
    json e = {{"n", row.n},
              {"chain", command == "bounds" ? std::string("not computed") : chain_label(d)},
              {"chi", num(d.bounds.chi)},
              {"minimax_converged", d.minimax_converged},
              {"ill_conditioned", d.ill_conditioned}};
    m["degrees"].push_back(e);
  }
  return m.dump(2);
}

void write_reports(const SweepResult& r, const SweepOptions& opt, const std::string& out, const std::string& command,
                   bool bounds_only) {
  std::ofstream csv(out + ".csv", std::ios::binary);
  if (!csv) throw ConfigError("cannot write " + out + ".csv");
  write_csv(csv, r, bounds_only);
  std::ofstream js(out + ".json", std::ios::binary);
  if (!js) throw ConfigError("cannot write " + out + ".json");
  js << manifest_json(r, opt, command) << '\n';
}

}  // namespace starpoly
