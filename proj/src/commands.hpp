#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "builtins.hpp"
#include "report.hpp"

namespace vjm::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int schema = 2;
inline constexpr int redundancy = 3;
inline constexpr int unresisted = 4;
inline constexpr int breach = 5;
}  // namespace exit_code

// Two routes disagree by more than the documented tolerance.
class ValidationBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  Format format = Format::pretty;
  std::optional<double> tol;  // relative eigenvalue threshold for rank decisions
  BuiltinParams params;
};

// Acceptance bounds for the pairwise route comparison.
inline constexpr double kExactRouteTolerance = 1e-9;
inline constexpr double kEnergyRouteTolerance = 1e-6;
inline constexpr double kPlanarTolerance = 1e-9;

// Each command writes its report to out and throws on failure.
void cmd_stiff(const Options& opts, std::ostream& out);
void cmd_deflect(const Options& opts, const std::string& wrench, std::ostream& out);
void cmd_analyze(const Options& opts, const std::string& matrix_path, std::ostream& out);
void cmd_validate(const Options& opts, std::ostream& out);

// Runs a command and maps its exceptions onto the exit-code contract,
// printing the message to err.
int run_command(const std::function<void()>& command, std::ostream& err);

// "rotation about z" style name for the dominant component of a direction.
std::string describe_direction(const Eigen::Matrix<double, 6, 1>& direction);

}  // namespace vjm::cli
