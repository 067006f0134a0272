#pragma once

// Bundled problems, addressable by name wherever a config path is accepted.
//
//   zero            A = 0 (2x2)
//   scalar          A = 1 (1x1), u = e^t
//   commuting_demo  A = (1 + t/2) B, B 4x4 Hermitian with spectrum in [-1, 1]
//   noncommuting    A = [[t, 1/2], [1/2, -t]], eigenvectors turn with t
//   rotating        A = R(t) diag(1 + t, -1) R(t)^T, R a planar rotation by t

#include <optional>
#include <string>
#include <vector>

#include "starpoly/config.hpp"

namespace starpoly {

std::vector<std::string> zoo_names();
std::optional<ProblemConfig> zoo_problem(const std::string& name);

// A zoo name or a path to a JSON config.
ProblemConfig resolve_problem(const std::string& name_or_path);

}  // namespace starpoly
