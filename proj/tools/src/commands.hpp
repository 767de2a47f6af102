#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ptfloquet::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kBadInput = 2, kIoError = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved settings for every command. Unset optionals take command-specific
/// defaults when resolved.
struct RunConfig {
  std::string command;
  std::string config_path;
  std::string out;

  std::optional<double> kappa;
  std::optional<double> gamma_max;
  std::optional<double> omega;
  double min_ratio = 1e-3;
  int nmax = 3;
  double tol = 1e-10;
  double eps_split = 1e-4;
  unsigned jobs = 0;

  // phase-diagram
  double omega_min = 0.2;
  double omega_max = 3.0;
  int n_omega = 141;
  double gamma_min = 0.01;
  double gamma_lim = 2.5;
  int n_gamma = 125;
  bool static_profile = false;

  // evolve
  std::string state = "superposition:3";
  std::optional<double> zmax;
  std::optional<int> samples;

  // reservoir
  int n_bath = 200;
  double kappa_b = 1.0;
  double dz = 0.1;

  void resolve_defaults();
  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Path of the JSON sidecar for a CSV output: extension replaced by .json.
[[nodiscard]] std::string sidecar_path(const std::string& csv_path);

/// 17 significant digits, '.' decimal separator, independent of the locale.
[[nodiscard]] std::string format_double(double v);

/// Flat key=value file: '#' starts a comment, blank lines ignored, keys are the
/// long flag names without dashes. Throws std::invalid_argument on malformed lines.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

int cmd_phase_diagram(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_reservoir(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);
int cmd_coeffs(const RunConfig& cfg, std::ostream& log);

/// Parses argv (subcommand first), merges the config file, runs the command and
/// maps exceptions onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptfloquet::cli
