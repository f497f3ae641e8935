#include "robin_bifurcate.h"

#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "robin/continuation.hpp"
#include "robin/error.hpp"
#include "robin/report.hpp"

struct rb_nonlinearity {
  robin::Nonlinearity nl;
};

struct rb_solution_set {
  std::vector<robin::SolutionProfile> profiles;
  double alpha;
  double beta;
};

struct rb_diagram {
  robin::BranchDiagram diagram;
};

namespace {

thread_local std::string g_last_error;

rb_status map_code(robin::ErrorCode code) {
  using robin::ErrorCode;
  switch (code) {
    case ErrorCode::Syntax: return RB_ERR_SYNTAX;
    case ErrorCode::UnknownIdentifier: return RB_ERR_UNKNOWN_IDENTIFIER;
    case ErrorCode::Evaluation: return RB_ERR_EVALUATION;
    case ErrorCode::ZeroCertificationFailed: return RB_ERR_ZERO_CERTIFICATION;
    case ErrorCode::PositivityFailed: return RB_ERR_POSITIVITY;
    case ErrorCode::ShiftCertificationFailed: return RB_ERR_SHIFT_CERTIFICATION;
    case ErrorCode::QuadratureNonconvergence: return RB_ERR_QUADRATURE;
    case ErrorCode::SingularOperator: return RB_ERR_SINGULAR_OPERATOR;
    case ErrorCode::LengthMismatch: return RB_ERR_LENGTH_MISMATCH;
    case ErrorCode::IterationLimit: return RB_ERR_ITERATION_LIMIT;
    case ErrorCode::NewtonStalled: return RB_ERR_NEWTON_STALLED;
    case ErrorCode::EscapeBelow: return RB_ERR_ESCAPE_BELOW;
    case ErrorCode::EscapeAbove: return RB_ERR_ESCAPE_ABOVE;
    case ErrorCode::PowerIterationStalled: return RB_ERR_POWER_ITERATION;
    case ErrorCode::NoUpperBracket: return RB_ERR_NO_UPPER_BRACKET;
    case ErrorCode::MultiplicityNotObserved: return RB_ERR_MULTIPLICITY_NOT_OBSERVED;
    case ErrorCode::AreaConditionFails: return RB_ERR_AREA_CONDITION_FAILS;
    case ErrorCode::BranchLost: return RB_ERR_BRANCH_LOST;
    case ErrorCode::NotDirichlet: return RB_ERR_NOT_DIRICHLET;
    case ErrorCode::NoInnerSolution: return RB_ERR_NO_INNER_SOLUTION;
    case ErrorCode::Config: return RB_ERR_CONFIG;
    case ErrorCode::Io: return RB_ERR_IO;
    case ErrorCode::InvalidArgument: return RB_ERR_INVALID_ARGUMENT;
  }
  return RB_ERR_INTERNAL;
}

rb_status fail(rb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
rb_status guard(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return RB_OK;
  } catch (const robin::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RB_ERR_INTERNAL, e.what());
  }
}

robin::BoundaryCondition to_bc(const rb_problem& p) {
  switch (p.bc_kind) {
    case RB_BC_ROBIN: return robin::BoundaryCondition::robin(p.gamma);
    case RB_BC_NEUMANN: return robin::BoundaryCondition::neumann();
    case RB_BC_DIRICHLET: return robin::BoundaryCondition::dirichlet();
  }
  throw robin::Error(robin::ErrorCode::InvalidArgument, "unknown boundary kind");
}

robin::ContinuationSettings to_settings(const rb_problem& p) {
  robin::ContinuationSettings s;
  if (p.grid_n != 0) s.grid_n = p.grid_n;
  return s;
}

#define RB_REQUIRE(ptr) \
  if (!(ptr)) return fail(RB_ERR_NULL_POINTER, #ptr " is NULL")

}  // namespace

extern "C" {

const char* rb_version(void) { return robin::report::kVersion; }

const char* rb_status_name(rb_status status) {
  switch (status) {
    case RB_OK: return "OK";
    case RB_ERR_NULL_POINTER: return "NullPointer";
    case RB_ERR_INTERNAL: return "InternalError";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(robin::ErrorCode::InvalidArgument); ++c) {
    const auto code = static_cast<robin::ErrorCode>(c);
    if (map_code(code) == status) return robin::to_string(code).data();
  }
  return "Unknown";
}

const char* rb_last_error_message(void) { return g_last_error.c_str(); }

rb_status rb_nonlinearity_create(const char* expr, double alpha, double beta, double domain_floor,
                                 rb_nonlinearity** out) {
  RB_REQUIRE(expr);
  RB_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto nl = robin::make_nonlinearity(robin::parse_expr(expr), alpha, beta, domain_floor);
    *out = new rb_nonlinearity{std::move(nl)};
  });
}

rb_status rb_nonlinearity_truncate(const rb_nonlinearity* nl, rb_nonlinearity** out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new rb_nonlinearity{robin::truncate(nl->nl)}; });
}

void rb_nonlinearity_destroy(rb_nonlinearity* nl) { delete nl; }

rb_status rb_nonlinearity_eval(const rb_nonlinearity* nl, double s, double* value, double* derivative) {
  RB_REQUIRE(nl);
  return guard([&] {
    if (value) *value = nl->nl(s);
    if (derivative) *derivative = nl->nl.derivative(s);
  });
}

rb_status rb_nonlinearity_shift(const rb_nonlinearity* nl, double* shift) {
  RB_REQUIRE(nl);
  RB_REQUIRE(shift);
  *shift = nl->nl.shift();
  return RB_OK;
}

rb_status rb_antiderivative(const rb_nonlinearity* nl, double a, double b, double* value) {
  RB_REQUIRE(nl);
  RB_REQUIRE(value);
  return guard([&] { *value = robin::antiderivative(nl->nl, a, b); });
}

rb_status rb_area_condition(const rb_nonlinearity* nl, rb_area_report* out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(out);
  return guard([&] {
    const auto rep = robin::area_condition(nl->nl);
    out->holds = rep.holds;
    out->has_r_alpha = rep.r_alpha.has_value();
    out->r_alpha = rep.r_alpha.value_or(0.0);
    out->degenerate = rep.degenerate;
    out->worst_s = rep.worst_s;
    out->worst_value = rep.worst_value;
  });
}

rb_status rb_find_radial_solutions(const rb_nonlinearity* nl, const rb_problem* problem, double lambda,
                                   rb_solution_set** out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto sols = robin::find_radial_solutions(nl->nl, lambda, {problem->dim, problem->radius}, to_bc(*problem));
    *out = new rb_solution_set{std::move(sols), nl->nl.alpha(), nl->nl.beta()};
  });
}

rb_status rb_monotone_iterate(const rb_nonlinearity* nl, const rb_problem* problem, double lambda,
                              rb_solution_set** out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const robin::Grid grid({problem->dim, problem->radius}, to_settings(*problem).grid_n);
    auto p = robin::monotone_iterate(nl->nl, lambda, grid, to_bc(*problem));
    *out = new rb_solution_set{{std::move(p)}, nl->nl.alpha(), nl->nl.beta()};
  });
}

rb_status rb_solution_set_size(const rb_solution_set* set, size_t* size) {
  RB_REQUIRE(set);
  RB_REQUIRE(size);
  *size = set->profiles.size();
  return RB_OK;
}

rb_status rb_solution_summary_at(const rb_solution_set* set, size_t index, rb_solution_summary* out) {
  RB_REQUIRE(set);
  RB_REQUIRE(out);
  if (index >= set->profiles.size()) return fail(RB_ERR_INVALID_ARGUMENT, "solution index out of range");
  const auto& p = set->profiles[index];
  out->sup_norm = p.sup_norm;
  out->min_value = p.min_value;
  out->center_value = p.center_value;
  out->boundary_value = p.boundary_value;
  out->boundary_slope = p.boundary_slope;
  out->residual = p.residual;
  out->source = static_cast<rb_source>(static_cast<int>(p.source));
  out->in_order_interval = p.in_order_interval(set->alpha, set->beta);
  return RB_OK;
}

rb_status rb_solution_values(const rb_solution_set* set, size_t index, double* values, size_t capacity,
                             size_t* count) {
  RB_REQUIRE(set);
  RB_REQUIRE(count);
  if (index >= set->profiles.size()) return fail(RB_ERR_INVALID_ARGUMENT, "solution index out of range");
  const auto& v = set->profiles[index].values;
  *count = v.size();
  if (values)
    for (size_t i = 0; i < v.size() && i < capacity; ++i) values[i] = v[i];
  return RB_OK;
}

void rb_solution_set_destroy(rb_solution_set* set) { delete set; }

rb_status rb_lambda_min(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(out);
  return guard([&] {
    *out = robin::lambda_min(nl->nl, {problem->dim, problem->radius}, to_bc(*problem), tol, to_settings(*problem));
  });
}

rb_status rb_lambda_mult(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(out);
  return guard([&] {
    *out = robin::lambda_mult(nl->nl, {problem->dim, problem->radius}, to_bc(*problem), tol, to_settings(*problem));
  });
}

rb_status rb_lambda_infty(const rb_nonlinearity* nl, const rb_problem* problem, double tol, double* out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(out);
  return guard([&] {
    *out = robin::lambda_infty(nl->nl, {problem->dim, problem->radius}, tol, to_settings(*problem));
  });
}

rb_status rb_sweep_lambda(const rb_nonlinearity* nl, const rb_problem* problem, const double* lambdas, size_t count,
                          rb_diagram** out) {
  RB_REQUIRE(nl);
  RB_REQUIRE(problem);
  RB_REQUIRE(lambdas);
  RB_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    std::vector<double> grid(lambdas, lambdas + count);
    auto d = robin::sweep_lambda(nl->nl, {problem->dim, problem->radius}, to_bc(*problem), grid, to_settings(*problem));
    *out = new rb_diagram{std::move(d)};
  });
}

rb_status rb_diagram_size(const rb_diagram* diagram, size_t* points) {
  RB_REQUIRE(diagram);
  RB_REQUIRE(points);
  *points = diagram->diagram.points.size();
  return RB_OK;
}

rb_status rb_diagram_point(const rb_diagram* diagram, size_t index, double* param, int* count_in_order_interval) {
  RB_REQUIRE(diagram);
  if (index >= diagram->diagram.points.size()) return fail(RB_ERR_INVALID_ARGUMENT, "point index out of range");
  const auto& p = diagram->diagram.points[index];
  if (param) *param = p.param;
  if (count_in_order_interval) *count_in_order_interval = p.count_in_Oab;
  return RB_OK;
}

rb_status rb_diagram_write_csv(const rb_diagram* diagram, const char* path) {
  RB_REQUIRE(diagram);
  RB_REQUIRE(path);
  return guard([&] {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw robin::Error(robin::ErrorCode::Io, std::string("cannot write '") + path + "'");
    f << robin::report::diagram_csv(diagram->diagram);
    if (!f) throw robin::Error(robin::ErrorCode::Io, std::string("write failed for '") + path + "'");
  });
}

void rb_diagram_destroy(rb_diagram* diagram) { delete diagram; }

rb_status rb_run(const char* mode, const char* config_path, const rb_overrides* overrides, int* exit_code) {
  RB_REQUIRE(config_path);
  RB_REQUIRE(exit_code);
  return guard([&] {
    robin::report::Overrides o;
    if (mode) {
      o.mode = robin::report::parse_mode(mode);
      if (!o.mode) {
        std::cerr << "robin-bifurcate: config error: unknown mode '" << mode << "'\n";
        *exit_code = robin::report::kExitConfig;
        return;
      }
    }
    if (overrides) {
      if (overrides->has_lambda) o.lambda = overrides->lambda;
      if (overrides->has_gamma) o.gamma = overrides->gamma;
      if (overrides->has_n) o.n = overrides->n;
      if (overrides->out_prefix) o.out_prefix = std::string(overrides->out_prefix);
    }
    *exit_code = robin::report::run(config_path, o, std::cout, std::cerr);
    std::cout.flush();
  });
}

}  // extern "C"
