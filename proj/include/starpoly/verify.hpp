#pragma once

// Invariant suites run by `starpoly verify <suite>`.

#include <functional>
#include <string>
#include <vector>

#include "starpoly/starcalc.hpp"

namespace starpoly {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double limit = 0.0;
  bool pass = false;
  double ms = 0.0;
  std::string detail;  // set when the check threw
};

// Replaceable entry points, so a deliberately broken implementation can be
// shown to fail its suite.
struct VerifyHooks {
  std::function<SmoothKernel(const ChebSeries&, int)> star_power = star_power_closed_form;
};

// kernel, starcalc, spectral, norms, approx.
std::vector<std::string> verify_suites();

// suite is one of verify_suites() or "all"; throws ConfigError otherwise.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyHooks& hooks = {});

}  // namespace starpoly
