#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "robin_bifurcate.h"

namespace {

// Accepts a finite number or "inf" for the Dirichlet limit.
bool parse_gamma(const std::string& text, double& out) {
  if (text == "inf" || text == "infinity") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size() && std::isfinite(out) && out >= 0.0;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial solutions and bifurcation diagrams for -Lap u = lambda f(u) on a ball"};
  app.set_version_flag("--version", std::string(rb_version()));

  std::string mode;
  std::string config_path;
  double lambda = 0.0;
  std::string gamma_text;
  int n = 0;
  std::string out_prefix;

  app.add_option("mode", mode,
                 "solve | sweep-lambda | sweep-gamma | thresholds | limits-zero | limits-infty | area | pohozaev")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* lambda_opt = app.add_option("--lambda", lambda, "override lambda");
  auto* gamma_opt = app.add_option("--gamma", gamma_text, "override Robin gamma (0 = Neumann, inf = Dirichlet)");
  auto* n_opt = app.add_option("--n", n, "override grid intervals");
  auto* out_opt = app.add_option("--out", out_prefix, "write PREFIX.csv and PREFIX.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  rb_overrides ov{};
  if (lambda_opt->count() > 0) {
    ov.has_lambda = 1;
    ov.lambda = lambda;
  }
  if (gamma_opt->count() > 0) {
    if (!parse_gamma(gamma_text, ov.gamma)) {
      std::cerr << "robin-bifurcate: config error: --gamma: expected a number >= 0 or 'inf'\n";
      return 2;
    }
    ov.has_gamma = 1;
  }
  if (n_opt->count() > 0) {
    ov.has_n = 1;
    ov.n = n;
  }
  if (out_opt->count() > 0) ov.out_prefix = out_prefix.c_str();

  int exit_code = 0;
  const rb_status st = rb_run(mode.c_str(), config_path.c_str(), &ov, &exit_code);
  if (st != RB_OK) {
    std::cerr << "robin-bifurcate: " << rb_status_name(st) << ": " << rb_last_error_message() << '\n';
    return 4;
  }
  return exit_code;
}
