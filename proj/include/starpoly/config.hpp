#pragma once

// Problem configuration: interval, Hermitian matrix entries as expressions in
// t, initial vector and run parameters. Stored as JSON.

#include <optional>
#include <string>
#include <vector>

#include "starpoly/spectral.hpp"

namespace starpoly {

// Real and imaginary parts of one upper-triangle entry.
struct EntryExpr {
  std::string re = "0";
  std::string im = "0";
  friend bool operator==(const EntryExpr&, const EntryExpr&) = default;
};

struct ProblemConfig {
  std::string name;
  double a = 0.0;
  double b = 1.0;
  std::size_t dim = 1;
  std::vector<EntryExpr> entries;  // upper triangle row by row, N(N+1)/2
  std::vector<cplx> v;             // unit norm after loading
  double v_scale = 1.0;            // norm of the vector as given
  std::size_t n_min = 0;
  std::size_t n_max = 12;
  double tol = 1e-13;              // reference solver tolerance
  std::optional<double> chi;       // empty: optimize
  std::string out;
  unsigned long long seed = 0;

  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

ProblemConfig parse_config(const std::string& json_text);
ProblemConfig load_config(const std::string& path);
std::string config_to_json(const ProblemConfig& cfg, int indent = 2);

// Throws ConfigError on validation failure (bad expression, non-finite values,
// diagonal with an imaginary part, ...).
HermitianCurve build_curve(const ProblemConfig& cfg);
Eigen::VectorXcd initial_vector(const ProblemConfig& cfg);

}  // namespace starpoly
