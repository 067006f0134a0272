#pragma once

// Degree sweeps over a problem configuration, written as CSV plus a JSON
// run manifest.

#include <iosfwd>
#include <string>
#include <vector>

#include "starpoly/approx.hpp"
#include "starpoly/config.hpp"

namespace starpoly {

inline constexpr const char* kSweepHeader =
    "n,measured_l2,peano_baker_l2,channel_bound,En_bound,bernstein_fixed,bernstein_opt,commutation_residual,wall_ms";

struct SweepOptions {
  unsigned threads = 1;
  bool timing = false;  // wall_ms is written as 0 unless set, keeping the CSV reproducible
};

struct SweepRow {
  std::size_t n = 0;
  DegreeReport report;
  double bernstein_opt = 0.0;  // optimized chi, or the configured chi
  double wall_ms = 0.0;
};

struct SweepResult {
  ProblemConfig config;
  RealRange j;
  std::vector<SweepRow> rows;  // in degree order
  bool asserted = true;        // hypothesis holds and J contains 0
  bool all_pass = true;        // every asserted chain holds
  bool minimax_converged = true;
};

SweepResult run_sweep(const ProblemConfig& cfg, const SweepOptions& opt = {});
// Bounds only: no reference solve and no best-L2 columns.
SweepResult run_bounds(const ProblemConfig& cfg, const SweepOptions& opt = {});

void write_csv(std::ostream& os, const SweepResult& r, bool bounds_only = false);
std::string manifest_json(const SweepResult& r, const SweepOptions& opt, const std::string& command);

// Writes <out>.csv and <out>.json (out without extension).
void write_reports(const SweepResult& r, const SweepOptions& opt, const std::string& out, const std::string& command,
                   bool bounds_only = false);

}  // namespace starpoly
