#pragma once

#include <stdexcept>
#include <string>

namespace slabewald {

// Bad or inconsistent input (CLI exit code 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named parameter constraint is violated (CLI exit code 3).
struct ConstraintError : std::runtime_error {
  ConstraintError(std::string name, const std::string& what)
      : std::runtime_error(what), constraint(std::move(name)) {}
  std::string constraint;
};

// Numerical failure during a solve or a run (CLI exit code 4).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slabewald
