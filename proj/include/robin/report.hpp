#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robin/continuation.hpp"
#include "robin/discretization.hpp"

namespace robin::report {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class Mode { Solve, SweepLambda, SweepGamma, Thresholds, LimitsZero, LimitsInfty, Area, Pohozaev };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct RunConfig {
  std::string f_expr;
  double alpha = 0.0;
  double beta = 0.0;
  double domain_floor = 0.0;
  int dim = 1;
  double radius = 1.0;
  BoundaryCondition bc = BoundaryCondition::neumann();
  Mode mode = Mode::Solve;
  std::optional<double> lambda;
  std::vector<double> lambda_grid;
  std::vector<double> gamma_grid;
  int n = Grid::kDefaultNodes;
  bool assume_no_patterns = false;
  std::optional<double> hyp_mon_delta;
  double epsilon = 0.5;
  double tol_lambda_min = 1e-4;
  double tol_lambda_mult = 1e-3;
  std::string csv_path;
  std::string json_path;
};

struct Overrides {
  std::optional<Mode> mode;
  std::optional<double> lambda;
  std::optional<double> gamma;  // 0 -> Neumann, inf -> Dirichlet
  std::optional<int> n;
  std::optional<std::string> out_prefix;  // PREFIX.csv and PREFIX.json
};

// Parses a config document and checks the mode-independent fields. Throws
// ConfigError naming the key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Applies overrides and re-validates mode-dependent requirements.
void apply_overrides(RunConfig& config, const Overrides& overrides);
void validate_static(const RunConfig& config);
// Full check including the inputs the selected mode needs.
void validate(const RunConfig& config);

// Header plus one row per solution, sorted by (param, sup_norm).
std::string diagram_csv(const BranchDiagram& diagram);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitProperty = 3;
inline constexpr int kExitNumerical = 4;

struct RunResult {
  int exit_code = 0;
  std::string csv;        // empty when the mode has no diagram
  std::string json;       // summary document
};

// Runs the configured experiment and returns outputs without touching disk.
RunResult execute(const RunConfig& config, std::ostream& diagnostics);

// load_config + overrides + execute + file output. Returns the exit code.
int run(const std::string& config_path, const Overrides& overrides, std::ostream& out, std::ostream& diagnostics);

}  // namespace robin::report
