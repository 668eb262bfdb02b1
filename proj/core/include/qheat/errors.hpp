// errors.hpp — Exception hierarchy shared across the library

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qheat {

// Argument outside the documented domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature or linear-algebra failure; carries the achieved error estimate.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what), achieved_(0.0) {}
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error " + format(achieved) + ")"),
        achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
  }
  double achieved_;
};

// Time-stepping instability or a singular point hit by a solver.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fock-space truncation found inadequate for the requested statistics.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration or command-line usage.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qheat
