#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace starpoly {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (point outside an interval,
// negative degree, s >= b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A function or kernel could not be resolved to tolerance at the maximal size.
class UnresolvedError : public Error {
 public:
  UnresolvedError(const std::string& what, double tail) : Error(what), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

// Iterative method failed to converge (step underflow, Remez, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Eigenpair matching along the tracking grid is ambiguous.
class CrossingError : public Error {
 public:
  CrossingError(const std::string& what, std::size_t node, double t)
      : Error(what), node_(node), t_(t) {}
  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t node_;
  double t_;
};

// Malformed user input: configuration files, expressions, CLI arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace starpoly
