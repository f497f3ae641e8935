#include "robin/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "robin/diagnostics.hpp"
#include "robin/error.hpp"
#include "robin/nonlinearity.hpp"
#include "robin/spectral.hpp"

namespace robin::report {

using nlohmann::json;

namespace {

constexpr std::pair<Mode, const char*> kModes[] = {
    {Mode::Solve, "solve"},
    {Mode::SweepLambda, "sweep-lambda"},
    {Mode::SweepGamma, "sweep-gamma"},
    {Mode::Thresholds, "thresholds"},
    {Mode::LimitsZero, "limits-zero"},
    {Mode::LimitsInfty, "limits-infty"},
    {Mode::Area, "area"},
    {Mode::Pohozaev, "pohozaev"},
};

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModes)
    if (m == mode) return name;
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModes)
    if (text == name) return m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Config intake

namespace {

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!keys.count(key)) throw ConfigError(prefix + key, "unknown key");
}

double get_real(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

int get_int(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
  return v.get<int>();
}

std::vector<double> get_grid(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(key, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(key + "[" + std::to_string(i) + "]", "must be a number");
    const double x = v[i].get<double>();
    if (!std::isfinite(x)) throw ConfigError(key + "[" + std::to_string(i) + "]", "must be finite");
    out.push_back(x);
  }
  return out;
}

BoundaryCondition bc_from_gamma(double gamma) {
  if (gamma == 0.0) return BoundaryCondition::neumann();
  if (std::isinf(gamma)) return BoundaryCondition::dirichlet();
  return BoundaryCondition::robin(gamma);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(doc, "",
                 {"schema_version", "f", "alpha", "beta", "domain_floor", "dim", "radius", "bc", "mode", "lambda",
                  "lambda_grid", "gamma_grid", "n", "assume_no_patterns", "hyp_mon_delta", "epsilon", "tolerances",
                  "output"});

  RunConfig c;
  if (doc.contains("schema_version") && (!doc["schema_version"].is_number_integer() ||
                                         doc["schema_version"].get<int>() != kSchemaVersion))
    throw ConfigError("schema_version", "unsupported schema version (expected 1)");
  if (!doc.contains("f") || !doc["f"].is_string()) throw ConfigError("f", "required string expression");
  c.f_expr = doc["f"].get<std::string>();
  for (const char* key : {"alpha", "beta"})
    if (!doc.contains(key)) throw ConfigError(key, "required");
  c.alpha = get_real(doc, "alpha", "alpha");
  c.beta = get_real(doc, "beta", "beta");
  if (doc.contains("domain_floor")) c.domain_floor = get_real(doc, "domain_floor", "domain_floor");
  if (doc.contains("dim")) c.dim = get_int(doc, "dim", "dim");
  if (doc.contains("radius")) c.radius = get_real(doc, "radius", "radius");

  if (doc.contains("bc")) {
    const auto& bc = doc["bc"];
    if (!bc.is_object()) throw ConfigError("bc", "must be an object");
    reject_unknown(bc, "bc.", {"type", "gamma"});
    if (!bc.contains("type") || !bc["type"].is_string()) throw ConfigError("bc.type", "required: robin, neumann or dirichlet");
    const auto type = bc["type"].get<std::string>();
    if (type == "robin") {
      if (!bc.contains("gamma")) throw ConfigError("bc.gamma", "required for robin");
      const double g = get_real(bc, "gamma", "bc.gamma");
      if (!(g > 0.0)) throw ConfigError("bc.gamma", "must be > 0 for robin (use neumann for 0)");
      c.bc = BoundaryCondition::robin(g);
    } else if (type == "neumann" || type == "dirichlet") {
      if (bc.contains("gamma")) throw ConfigError("bc.gamma", "only allowed for robin");
      c.bc = type == "neumann" ? BoundaryCondition::neumann() : BoundaryCondition::dirichlet();
    } else {
      throw ConfigError("bc.type", "must be robin, neumann or dirichlet");
    }
  }

  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode", "must be a string");
    const auto m = parse_mode(doc["mode"].get<std::string>());
    if (!m) throw ConfigError("mode", "unknown mode '" + doc["mode"].get<std::string>() + "'");
    c.mode = *m;
  }
  if (doc.contains("lambda")) c.lambda = get_real(doc, "lambda", "lambda");
  if (doc.contains("lambda_grid")) c.lambda_grid = get_grid(doc, "lambda_grid");
  if (doc.contains("gamma_grid")) c.gamma_grid = get_grid(doc, "gamma_grid");
  if (doc.contains("n")) c.n = get_int(doc, "n", "n");
  if (doc.contains("assume_no_patterns")) {
    if (!doc["assume_no_patterns"].is_boolean()) throw ConfigError("assume_no_patterns", "must be a boolean");
    c.assume_no_patterns = doc["assume_no_patterns"].get<bool>();
  }
  if (doc.contains("hyp_mon_delta")) c.hyp_mon_delta = get_real(doc, "hyp_mon_delta", "hyp_mon_delta");
  if (doc.contains("epsilon")) c.epsilon = get_real(doc, "epsilon", "epsilon");
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "must be an object");
    reject_unknown(t, "tolerances.", {"lambda_min", "lambda_mult"});
    if (t.contains("lambda_min")) c.tol_lambda_min = get_real(t, "lambda_min", "tolerances.lambda_min");
    if (t.contains("lambda_mult")) c.tol_lambda_mult = get_real(t, "lambda_mult", "tolerances.lambda_mult");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) throw ConfigError("output", "must be an object");
    reject_unknown(o, "output.", {"csv", "json"});
    for (const char* key : {"csv", "json"}) {
      if (!o.contains(key)) continue;
      if (!o[key].is_string()) throw ConfigError(std::string("output.") + key, "must be a string path");
      (std::string(key) == "csv" ? c.csv_path : c.json_path) = o[key].get<std::string>();
    }
  }
  validate_static(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_static(const RunConfig& c) {
  if (!(c.alpha > 0.0)) throw ConfigError("alpha", "alpha must be > 0");
  if (!(c.alpha < c.beta)) throw ConfigError("alpha", "alpha must be < beta");
  if (!(c.domain_floor <= c.alpha)) throw ConfigError("domain_floor", "domain_floor must be <= alpha");
  if (c.dim < 1) throw ConfigError("dim", "must be >= 1");
  if (!(c.radius > 0.0)) throw ConfigError("radius", "must be > 0");
  if (c.n < Grid::kMinNodes) throw ConfigError("n", "must be >= 64");
  if (!(c.tol_lambda_min > 0.0)) throw ConfigError("tolerances.lambda_min", "must be > 0");
  if (!(c.tol_lambda_mult > 0.0)) throw ConfigError("tolerances.lambda_mult", "must be > 0");
  if (c.lambda && !(*c.lambda > 0.0)) throw ConfigError("lambda", "must be > 0");
  if (c.hyp_mon_delta && !(*c.hyp_mon_delta > 0.0 && *c.hyp_mon_delta < c.beta - c.alpha))
    throw ConfigError("hyp_mon_delta", "must lie in (0, beta - alpha)");
}

void validate(const RunConfig& c) {
  validate_static(c);

  const bool needs_lambda = c.mode == Mode::Solve || c.mode == Mode::SweepGamma || c.mode == Mode::LimitsZero ||
                            c.mode == Mode::LimitsInfty || c.mode == Mode::Pohozaev;
  if (needs_lambda && !c.lambda) throw ConfigError("lambda", "required for mode " + std::string(to_string(c.mode)));
  if (c.mode == Mode::SweepLambda) {
    if (c.lambda_grid.empty()) throw ConfigError("lambda_grid", "must be nonempty for sweep-lambda");
    for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
      if (!(c.lambda_grid[i] > 0.0)) throw ConfigError("lambda_grid", "values must be > 0");
      if (i && !(c.lambda_grid[i] > c.lambda_grid[i - 1])) throw ConfigError("lambda_grid", "must be increasing");
    }
  }
  if (c.mode == Mode::SweepGamma || c.mode == Mode::LimitsZero || c.mode == Mode::LimitsInfty) {
    if (c.gamma_grid.empty())
      throw ConfigError("gamma_grid", "must be nonempty for mode " + std::string(to_string(c.mode)));
    for (double g : c.gamma_grid)
      if (!(g >= 0.0)) throw ConfigError("gamma_grid", "values must be >= 0");
  }
  if (c.mode == Mode::LimitsZero) {
    for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
      if (!(c.gamma_grid[i] > 0.0)) throw ConfigError("gamma_grid", "values must be > 0 for limits-zero");
      if (i && !(c.gamma_grid[i] < c.gamma_grid[i - 1])) throw ConfigError("gamma_grid", "must be decreasing for limits-zero");
    }
  }
  if (c.mode == Mode::LimitsInfty) {
    for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
      if (!(c.gamma_grid[i] > 0.0)) throw ConfigError("gamma_grid", "values must be > 0 for limits-infty");
      if (i && !(c.gamma_grid[i] > c.gamma_grid[i - 1])) throw ConfigError("gamma_grid", "must be increasing for limits-infty");
    }
  }
  if (c.mode == Mode::Pohozaev && !(c.epsilon > 0.0 && c.epsilon < c.beta))
    throw ConfigError("epsilon", "must lie in (0, beta)");
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.mode) c.mode = *o.mode;
  if (o.lambda) c.lambda = *o.lambda;
  if (o.gamma) {
    if (!(*o.gamma >= 0.0)) throw ConfigError("gamma", "override must be >= 0 (0 = neumann, inf = dirichlet)");
    c.bc = bc_from_gamma(*o.gamma);
  }
  if (o.n) c.n = *o.n;
  if (o.out_prefix) {
    c.csv_path = *o.out_prefix + ".csv";
    c.json_path = *o.out_prefix + ".json";
  }
  validate(c);
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json bc_json(const BoundaryCondition& bc) {
  json j{{"type", bc.kind == BoundaryCondition::Kind::Robin       ? "robin"
                  : bc.kind == BoundaryCondition::Kind::Neumann ? "neumann"
                                                                : "dirichlet"}};
  if (bc.kind == BoundaryCondition::Kind::Robin) j["gamma"] = bc.gamma;
  return j;
}

json config_echo(const RunConfig& c) {
  json j{{"schema_version", kSchemaVersion},
         {"f", c.f_expr},
         {"alpha", c.alpha},
         {"beta", c.beta},
         {"domain_floor", c.domain_floor},
         {"dim", c.dim},
         {"radius", c.radius},
         {"bc", bc_json(c.bc)},
         {"mode", std::string(to_string(c.mode))},
         {"n", c.n},
         {"assume_no_patterns", c.assume_no_patterns},
         {"epsilon", c.epsilon},
         {"tolerances", {{"lambda_min", c.tol_lambda_min}, {"lambda_mult", c.tol_lambda_mult}}}};
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["lambda_grid"] = c.lambda_grid;
  j["gamma_grid"] = c.gamma_grid;
  j["hyp_mon_delta"] = c.hyp_mon_delta ? json(*c.hyp_mon_delta) : json(nullptr);
  return j;
}

json point_json(const BranchPoint& p) {
  json sols = json::array();
  for (const auto& s : p.solutions)
    sols.push_back({{"sup_norm", s.sup_norm},
                    {"center_value", s.center_value},
                    {"min_value", s.min_value},
                    {"boundary_value", s.boundary_value},
                    {"mu1", number(s.mu1)},
                    {"mu1_sign", s.mu1_sign},
                    {"source", std::string(to_string(s.source))},
                    {"in_Oab", s.in_order_interval}});
  json j{{"param", p.param}, {"count_in_Oab", p.count_in_Oab}, {"solutions", sols}};
  j["maximal_sup"] = p.maximal_sup ? json(*p.maximal_sup) : json(nullptr);
  if (!p.error.empty()) j["error"] = p.error;
  return j;
}

// Property failures (exit 3) versus numerical failures (exit 4).
bool is_property_violation(ErrorCode code, const BoundaryCondition& bc) {
  switch (code) {
    case ErrorCode::MultiplicityNotObserved:
    case ErrorCode::BranchLost: return true;
    case ErrorCode::NoUpperBracket: return bc.kind == BoundaryCondition::Kind::Robin;
    default: return false;
  }
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::ZeroCertificationFailed:
    case ErrorCode::PositivityFailed:
    case ErrorCode::ShiftCertificationFailed:
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument: return true;
    default: return false;
  }
}

struct Experiment {
  std::string name;
  std::string status = "ok";  // ok | violation | failed | not_applicable
  std::string code;
  std::string message;
  json result = json::object();
};

class Runner {
public:
  Runner(const RunConfig& c, std::ostream& diag) : c_(c), diag_(diag) {}

  // Runs `body` as one experiment; errors become a status, never an escape.
  template <class Body>
  void experiment(const std::string& name, Body&& body) {
    Experiment e;
    e.name = name;
    try {
      body(e);
      if (e.status != "ok") diag_ << "robin-bifurcate: " << name << ": " << e.message << "\n";
    } catch (const Error& err) {
      e.code = std::string(robin::to_string(err.code()));
      e.message = err.what();
      if (err.code() == ErrorCode::AreaConditionFails) {
        e.status = "not_applicable";
      } else if (is_property_violation(err.code(), c_.bc)) {
        e.status = "violation";
      } else if (is_input_error(err.code())) {
        e.status = "failed";
        input_error_ = true;
      } else {
        e.status = "failed";
      }
      diag_ << "robin-bifurcate: " << name << ": " << e.code << ": " << e.message << "\n";
    }
    if (e.status == "violation" && e.code.empty()) e.code = "PropertyViolation";
    experiments_.push_back(std::move(e));
  }

  int exit_code() const {
    if (input_error_) return kExitConfig;
    int code = kExitOk;
    for (const auto& e : experiments_) {
      if (e.status == "failed") code = std::max(code, kExitNumerical);
      if (e.status == "violation") code = std::max(code, kExitProperty);
    }
    return code;
  }

  json experiments_json() const {
    json arr = json::array();
    for (const auto& e : experiments_) {
      json j{{"name", e.name}, {"status", e.status}, {"result", e.result}};
      if (!e.code.empty()) j["code"] = e.code;
      if (!e.message.empty()) j["message"] = e.message;
      arr.push_back(std::move(j));
    }
    return arr;
  }

private:
  const RunConfig& c_;
  std::ostream& diag_;
  std::vector<Experiment> experiments_;
  bool input_error_ = false;
};

void check_hyp_mon(const Nonlinearity& nl, double delta) {
  constexpr int kSamples = 1001;
  const double lo = nl.beta() - delta;
  for (int k = 1; k < kSamples; ++k) {
    const double s = lo + delta * k / kSamples;
    if (nl.derivative(s) > 0.0)
      throw ConfigError("hyp_mon_delta", "f' > 0 at s=" + fmt(s) + " inside (beta - delta, beta)");
  }
}

}  // namespace

std::string diagram_csv(const BranchDiagram& d) {
  std::vector<const BranchPoint*> pts;
  for (const auto& p : d.points) pts.push_back(&p);
  std::stable_sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->param < b->param; });
  std::string out = "param,sup_norm,center_value,mu1_sign,source,in_Oab\n";
  for (const auto* p : pts) {
    auto sols = p->solutions;
    std::stable_sort(sols.begin(), sols.end(), [](const auto& a, const auto& b) { return a.sup_norm < b.sup_norm; });
    for (const auto& s : sols) {
      out += fmt(p->param) + ',' + fmt(s.sup_norm) + ',' + fmt(s.center_value) + ',' + std::to_string(s.mu1_sign) +
             ',' + std::string(to_string(s.source)) + ',' + (s.in_order_interval ? "1" : "0") + '\n';
    }
  }
  return out;
}

RunResult execute(const RunConfig& c, std::ostream& diag) {
  const auto t0 = std::chrono::steady_clock::now();
  Runner runner(c, diag);
  RunResult out;
  std::optional<Nonlinearity> nl;
  const RadialDomain domain{c.dim, c.radius};
  ContinuationSettings settings;
  settings.grid_n = c.n;

  runner.experiment("nonlinearity", [&](Experiment& e) {
    nl = make_nonlinearity(parse_expr(c.f_expr), c.alpha, c.beta, c.domain_floor);
    if (c.hyp_mon_delta) check_hyp_mon(*nl, *c.hyp_mon_delta);
    e.result = {{"alpha", nl->alpha()}, {"beta", nl->beta()}, {"M", nl->shift()}, {"domain_floor", nl->domain_floor()}};
  });

  if (nl) {
    const std::string mode(to_string(c.mode));
    switch (c.mode) {
      case Mode::Solve:
      case Mode::SweepLambda:
      case Mode::SweepGamma:
        runner.experiment(mode, [&](Experiment& e) {
          BranchDiagram d;
          if (c.mode == Mode::Solve) {
            d.points.push_back(solve_point(*nl, domain, c.bc, *c.lambda, settings));
          } else if (c.mode == Mode::SweepLambda) {
            d = sweep_lambda(*nl, domain, c.bc, c.lambda_grid, settings);
          } else {
            d = sweep_gamma(*nl, domain, *c.lambda, c.gamma_grid, settings);
          }
          json pts = json::array();
          for (const auto& p : d.points) pts.push_back(point_json(p));
          e.result["points"] = pts;
          if (c.mode == Mode::SweepLambda) {
            bool nondecreasing = true;
            std::optional<double> prev;
            for (const auto& p : d.points) {
              if (!p.maximal_sup) continue;
              if (prev && *p.maximal_sup < *prev - 1e-8) nondecreasing = false;
              prev = p.maximal_sup;
            }
            e.result["maximal_nondecreasing"] = nondecreasing;
            if (!nondecreasing) {
              e.status = "violation";
              e.message = "maximal branch sup-norm decreases along the lambda sweep";
            }
          }
          out.csv = diagram_csv(d);
        });
        break;

      case Mode::Thresholds:
        runner.experiment("lambda_min", [&](Experiment& e) {
          e.result["value"] = lambda_min(*nl, domain, c.bc, c.tol_lambda_min, settings);
        });
        if (c.bc.kind != BoundaryCondition::Kind::Dirichlet)
          runner.experiment("lambda_mult", [&](Experiment& e) {
            e.result["value"] = lambda_mult(*nl, domain, c.bc, c.tol_lambda_mult, settings);
          });
        runner.experiment("lambda_infty", [&](Experiment& e) {
          e.result["value"] = lambda_infty(*nl, domain, c.tol_lambda_min, settings);
        });
        break;

      case Mode::LimitsZero:
        runner.experiment(mode, [&](Experiment& e) {
          const auto rep = gamma_limit_zero(*nl, domain, *c.lambda, c.gamma_grid, c.assume_no_patterns, settings);
          json rows = json::array();
          for (const auto& r : rep.rows)
            rows.push_back({{"gamma", r.gamma},
                            {"maximal_distance_to_beta", r.maximal_distance_to_beta},
                            {"second_sup", r.second_sup},
                            {"second_distance_to_alpha", r.second_distance_to_alpha}});
          e.result = {{"rows", rows},
                      {"maximal_monotone", rep.maximal_monotone},
                      {"compatibility", rep.compatibility},
                      {"limit_label", rep.limit_label}};
          if (!rep.maximal_monotone) {
            e.status = "violation";
            e.message = "maximal solution is not monotone in gamma";
          }
        });
        break;

      case Mode::LimitsInfty:
        runner.experiment(mode, [&](Experiment& e) {
          const auto rep = gamma_limit_infty(*nl, domain, *c.lambda, c.gamma_grid, settings);
          json rows = json::array();
          for (const auto& r : rep.rows)
            rows.push_back({{"gamma", r.gamma},
                            {"distance", r.distance},
                            {"boundary_value", r.boundary_value},
                            {"sup_norm", r.sup_norm}});
          e.result = {{"rows", rows}, {"dirichlet_sup", rep.dirichlet_sup}, {"distance_monotone", rep.distance_monotone}};
          if (!rep.distance_monotone) {
            e.status = "violation";
            e.message = "distance to the Dirichlet solution does not decrease along the gamma grid";
          }
        });
        break;

      case Mode::Area:
        runner.experiment(mode, [&](Experiment& e) {
          const auto rep = area_condition(*nl);
          e.result = {{"holds", rep.holds},
                      {"worst_s", rep.worst_s},
                      {"worst_value", rep.worst_value},
                      {"degenerate", rep.degenerate}};
          e.result["r_alpha"] = rep.r_alpha ? json(*rep.r_alpha) : json(nullptr);
        });
        break;

      case Mode::Pohozaev:
        runner.experiment(mode, [&](Experiment& e) {
          const auto sols = shifted_dirichlet_solutions(*nl, *c.lambda, domain, c.epsilon);
          json arr = json::array();
          bool closed = true;
          for (const auto& v : sols) {
            const auto rep = pohozaev_check(*nl, *c.lambda, domain, v, c.epsilon);
            arr.push_back({{"sup_norm", v.sup_norm},
                           {"boundary_slope", v.boundary_slope},
                           {"lhs", rep.lhs},
                           {"rhs", rep.rhs},
                           {"rel_error", rep.rel_error}});
            if (!(rep.rel_error < 1e-3)) closed = false;
          }
          e.result = {{"solutions", arr}, {"epsilon", c.epsilon}};
          if (!closed) {
            e.status = "failed";
            e.code = "PohozaevMismatch";
            e.message = "Pohozaev identity does not close to 1e-3; refine the step";
          }
        });
        break;
    }
  }

  out.exit_code = runner.exit_code();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json summary{{"schema_version", kSchemaVersion},
               {"version", kVersion},
               {"mode", std::string(to_string(c.mode))},
               {"config", config_echo(c)},
               {"wall_time_s", wall},
               {"exit_code", out.exit_code},
               {"experiments", runner.experiments_json()}};
  out.json = summary.dump(2) + "\n";
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace

int run(const std::string& config_path, const Overrides& overrides, std::ostream& out, std::ostream& diag) {
  RunConfig config;
  try {
    config = load_config(config_path);
    apply_overrides(config, overrides);
  } catch (const Error& e) {
    diag << "robin-bifurcate: config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const RunResult result = execute(config, diag);
  try {
    if (!result.csv.empty() && !config.csv_path.empty()) write_file(config.csv_path, result.csv);
    if (!config.json_path.empty()) write_file(config.json_path, result.json);
    else out << result.json;
  } catch (const Error& e) {
    diag << "robin-bifurcate: " << e.what() << "\n";
    return kExitNumerical;
  }
  return result.exit_code;
}

}  // namespace robin::report
