#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slabewald::cli {

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::string config;
  std::optional<std::string> charges, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

// Each command returns the process exit code; errors propagate as exceptions.
int cmd_tune(const Overrides& o);
int cmd_solve(const Overrides& o);
int cmd_bd(const Overrides& o);
// Returns 0 when every check passes and 1 otherwise.
int cmd_validate(const std::vector<std::string>& suites, const Overrides& o);

}  // namespace slabewald::cli
