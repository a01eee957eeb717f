#include "../include/cwgd.h"

#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"
#include "diagnostics.hpp"
#include "expr.hpp"
#include "linesearch.hpp"
#include "objectives.hpp"
#include "optimizers.hpp"

struct cwgd_objective {
  cwgd::Objective obj;
};
struct cwgd_config {
  cwgd::RunConfig cfg;
};
struct cwgd_trajectory {
  cwgd::Trajectory traj;
};

namespace {

struct LastError {
  int code = CWGD_OK;
  std::string message;
  long position = -1;
};

thread_local LastError g_last_error;

void clear_error() {
  g_last_error.code = CWGD_OK;
  g_last_error.message.clear();
  g_last_error.position = -1;
}

int translate(cwgd::ErrorCode c) {
  using EC = cwgd::ErrorCode;
  switch (c) {
    case EC::InvalidArgument: return CWGD_ERR_INVALID_ARGUMENT;
    case EC::InvalidParameter: return CWGD_ERR_INVALID_PARAMETER;
    case EC::UnknownFunction: return CWGD_ERR_UNKNOWN_FUNCTION;
    case EC::LexError: return CWGD_ERR_LEX;
    case EC::ParseError: return CWGD_ERR_PARSE;
    case EC::ArityError: return CWGD_ERR_ARITY;
    case EC::UnboundVariable: return CWGD_ERR_UNBOUND_VARIABLE;
    case EC::NonFinite: return CWGD_ERR_NONFINITE;
    case EC::DimensionMismatch: return CWGD_ERR_DIMENSION_MISMATCH;
    case EC::RegionViolation: return CWGD_ERR_REGION_VIOLATION;
    case EC::ZeroGradient: return CWGD_ERR_ZERO_GRADIENT;
    case EC::ZeroGradientWithCap: return CWGD_ERR_ZERO_GRADIENT_WITH_CAP;
    case EC::ExhaustedGrid: return CWGD_ERR_EXHAUSTED_GRID;
    case EC::NonFiniteValue: return CWGD_ERR_NONFINITE_VALUE;
    case EC::MissingRates: return CWGD_ERR_MISSING_RATES;
    case EC::TooShort: return CWGD_ERR_TOO_SHORT;
  }
  return CWGD_ERR_UNKNOWN;
}

int record_error(std::exception_ptr eptr) {
  try {
    std::rethrow_exception(eptr);
  } catch (const cwgd::Error& e) {
    g_last_error.code = translate(e.code);
    g_last_error.message = e.what();
    g_last_error.position = static_cast<long>(e.position);
  } catch (const std::exception& e) {
    g_last_error.code = CWGD_ERR_UNKNOWN;
    g_last_error.message = e.what();
    g_last_error.position = -1;
  } catch (...) {
    g_last_error.code = CWGD_ERR_UNKNOWN;
    g_last_error.message = "unknown failure";
    g_last_error.position = -1;
  }
  return g_last_error.code;
}

int fail_invalid(const char* msg) {
  g_last_error.code = CWGD_ERR_INVALID_ARGUMENT;
  g_last_error.message = msg;
  g_last_error.position = -1;
  return CWGD_ERR_INVALID_ARGUMENT;
}

// Runs fn, routing any exception into the thread-local error slot.
template <typename Fn>
int guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return CWGD_OK;
  } catch (...) {
    return record_error(std::current_exception());
  }
}

template <typename Fn>
auto guarded_ptr(Fn&& fn) -> decltype(fn()) {
  clear_error();
  try {
    return fn();
  } catch (...) {
    record_error(std::current_exception());
    return nullptr;
  }
}

cwgd::BlockVector make_point(const cwgd::BlockPartition& p, const double* z,
                             size_t n) {
  if (n != p.total())
    throw cwgd::Error(cwgd::ErrorCode::DimensionMismatch,
                      "point length does not match the objective");
  return cwgd::BlockVector(p, std::vector<double>(z, z + n));
}

const std::vector<cwgd::BuiltinInfo>& catalog() {
  static const std::vector<cwgd::BuiltinInfo> entries = cwgd::builtin_catalog();
  return entries;
}

}  // namespace

extern "C" {

const char* cwgd_version(void) { return "0.1.0"; }

int cwgd_last_error_code(void) { return g_last_error.code; }

const char* cwgd_last_error_message(void) { return g_last_error.message.c_str(); }

long cwgd_last_error_position(void) { return g_last_error.position; }

/* ---- objectives ------------------------------------------------------- */

cwgd_objective* cwgd_objective_builtin(const char* name,
                                       const char* const* param_names,
                                       const double* param_values,
                                       size_t nparams) {
  return guarded_ptr([&]() -> cwgd_objective* {
    if (!name) throw cwgd::Error(cwgd::ErrorCode::InvalidArgument, "name is null");
    if (nparams > 0 && (!param_names || !param_values))
      throw cwgd::Error(cwgd::ErrorCode::InvalidArgument,
                        "parameter arrays are null");
    std::map<std::string, double> params;
    for (size_t i = 0; i < nparams; ++i) {
      if (!param_names[i])
        throw cwgd::Error(cwgd::ErrorCode::InvalidArgument,
                          "parameter name is null");
      params[param_names[i]] = param_values[i];
    }
    return new cwgd_objective{cwgd::builtin(name, params)};
  });
}

cwgd_objective* cwgd_objective_quadratic(const size_t* dims, size_t nblocks,
                                         const double* coeffs) {
  return guarded_ptr([&]() -> cwgd_objective* {
    if (!dims || !coeffs)
      throw cwgd::Error(cwgd::ErrorCode::InvalidArgument, "arrays are null");
    std::vector<std::size_t> d(dims, dims + nblocks);
    std::vector<double> c(coeffs, coeffs + nblocks);
    return new cwgd_objective{cwgd::quadratic(d, c)};
  });
}

cwgd_objective* cwgd_objective_expr(const char* text, size_t nvars,
                                    double fd_step) {
  return guarded_ptr([&]() -> cwgd_objective* {
    if (!text) throw cwgd::Error(cwgd::ErrorCode::InvalidArgument, "text is null");
    if (nvars == 0)
      throw cwgd::Error(cwgd::ErrorCode::InvalidArgument,
                        "need at least one variable");
    cwgd::ExprPtr e = cwgd::parse(text);
    cwgd::BlockPartition p(std::vector<std::size_t>(nvars, 1));
    double h = fd_step > 0.0 ? fd_step : 1e-6;
    return new cwgd_objective{cwgd::to_objective(e, p, h)};
  });
}

void cwgd_objective_free(cwgd_objective* obj) { delete obj; }

const char* cwgd_objective_name(const cwgd_objective* obj) {
  return obj ? obj->obj.name.c_str() : "";
}

size_t cwgd_objective_dim(const cwgd_objective* obj) {
  return obj ? obj->obj.partition.total() : 0;
}

size_t cwgd_objective_blocks(const cwgd_objective* obj) {
  return obj ? obj->obj.partition.blocks() : 0;
}

int cwgd_objective_block_dims(const cwgd_objective* obj, size_t* dims) {
  if (!obj || !dims) return fail_invalid("null argument");
  clear_error();
  for (size_t i = 0; i < obj->obj.partition.blocks(); ++i)
    dims[i] = obj->obj.partition.dims[i];
  return CWGD_OK;
}

int cwgd_objective_has_region(const cwgd_objective* obj) {
  return obj && obj->obj.region.kind != cwgd::ExclusionRegion::Kind::None ? 1 : 0;
}

int cwgd_objective_value(const cwgd_objective* obj, const double* z, size_t n,
                         double* out) {
  if (!obj || !z || !out) return fail_invalid("null argument");
  return guarded([&] { *out = obj->obj.value(make_point(obj->obj.partition, z, n)); });
}

int cwgd_objective_gradient(const cwgd_objective* obj, const double* z, size_t n,
                            double* out) {
  if (!obj || !z || !out) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockGradient g = obj->obj.gradient(make_point(obj->obj.partition, z, n));
    std::memcpy(out, g.data.data(), g.data.size() * sizeof(double));
  });
}

int cwgd_objective_known_minimizer(const cwgd_objective* obj, double* out,
                                   int* has) {
  if (!obj || !out || !has) return fail_invalid("null argument");
  clear_error();
  if (obj->obj.known_minimizer) {
    const std::vector<double>& m = *obj->obj.known_minimizer;
    std::memcpy(out, m.data(), m.size() * sizeof(double));
    *has = 1;
  } else {
    *has = 0;
  }
  return CWGD_OK;
}

size_t cwgd_builtin_count(void) { return catalog().size(); }

int cwgd_builtin_info(size_t index, const char** name, const char** signature,
                      const char** partition, const char** minima) {
  if (index >= catalog().size()) return fail_invalid("catalog index out of range");
  clear_error();
  const cwgd::BuiltinInfo& e = catalog()[index];
  if (name) *name = e.name.c_str();
  if (signature) *signature = e.signature.c_str();
  if (partition) *partition = e.partition.c_str();
  if (minima) *minima = e.minima.c_str();
  return CWGD_OK;
}

/* ---- configuration ----------------------------------------------------- */

cwgd_config* cwgd_config_new(void) {
  clear_error();
  return new cwgd_config{};
}

void cwgd_config_free(cwgd_config* cfg) { delete cfg; }

int cwgd_config_set_method(cwgd_config* cfg, int method) {
  if (!cfg) return fail_invalid("config is null");
  switch (method) {
    case CWGD_METHOD_STANDARD: cfg->cfg.method = cwgd::Method::Standard; break;
    case CWGD_METHOD_BACKTRACKING:
      cfg->cfg.method = cwgd::Method::Backtracking;
      break;
    case CWGD_METHOD_COORDINATEWISE:
      cfg->cfg.method = cwgd::Method::Coordinatewise;
      break;
    default: return fail_invalid("unknown method");
  }
  clear_error();
  return CWGD_OK;
}

int cwgd_config_set_hyperparams(cwgd_config* cfg, double alpha, double beta,
                                double delta0) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    cwgd::HyperParams hp = cfg->cfg.hp;
    hp.alpha = alpha;
    hp.beta = beta;
    hp.delta0 = delta0;
    hp.validate();
    cfg->cfg.hp = hp;
  });
}

int cwgd_config_set_max_grid_depth(cwgd_config* cfg, int depth) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    cwgd::HyperParams hp = cfg->cfg.hp;
    hp.max_grid_depth = depth;
    hp.validate();
    cfg->cfg.hp = hp;
  });
}

int cwgd_config_set_standard_rate(cwgd_config* cfg, double rate) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    if (!(rate > 0.0))
      throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                        "standard rate must be positive");
    cfg->cfg.standard_rate = rate;
  });
}

int cwgd_config_clear_standard_rate(cwgd_config* cfg) {
  if (!cfg) return fail_invalid("config is null");
  clear_error();
  cfg->cfg.standard_rate.reset();
  return CWGD_OK;
}

int cwgd_config_set_order_policy(cwgd_config* cfg, int policy) {
  if (!cfg) return fail_invalid("config is null");
  switch (policy) {
    case CWGD_ORDER_STATIC: cfg->cfg.order_policy = cwgd::OrderPolicy::Static; break;
    case CWGD_ORDER_LIPSCHITZ_ADAPTIVE:
      cfg->cfg.order_policy = cwgd::OrderPolicy::LipschitzAdaptive;
      break;
    default: return fail_invalid("unknown order policy");
  }
  clear_error();
  return CWGD_OK;
}

int cwgd_config_set_static_order(cwgd_config* cfg, const size_t* order, size_t n) {
  if (!cfg) return fail_invalid("config is null");
  if (n > 0 && !order) return fail_invalid("order is null");
  clear_error();
  cfg->cfg.static_order.assign(order, order + n);
  return CWGD_OK;
}

int cwgd_config_set_max_iterations(cwgd_config* cfg, int iterations) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    if (iterations < 1)
      throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                        "max_iterations must be positive");
    cfg->cfg.max_iterations = iterations;
  });
}

int cwgd_config_set_grad_tolerance(cwgd_config* cfg, double tol) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    if (!(tol > 0.0))
      throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                        "grad_tolerance must be positive");
    cfg->cfg.grad_tolerance = tol;
  });
}

int cwgd_config_set_divergence_thresholds(cwgd_config* cfg, double value_threshold,
                                          double norm_threshold) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    if (!(norm_threshold > 0.0))
      throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                        "divergence norm threshold must be positive");
    cfg->cfg.divergence_value_threshold = value_threshold;
    cfg->cfg.divergence_norm_threshold = norm_threshold;
  });
}

int cwgd_config_set_cycle_detection(cwgd_config* cfg, int enabled, int max_period,
                                    double tol) {
  if (!cfg) return fail_invalid("config is null");
  return guarded([&] {
    cwgd::CycleDetection cd;
    cd.enabled = enabled != 0;
    cd.max_period = max_period;
    cd.tol = tol;
    if (cd.enabled) {
      if (cd.max_period < 2)
        throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                          "cycle max_period must be at least 2");
      if (!(cd.tol > 0.0))
        throw cwgd::Error(cwgd::ErrorCode::InvalidParameter,
                          "cycle tolerance must be positive");
    }
    cfg->cfg.cycle = cd;
  });
}

int cwgd_config_set_region_mode(cwgd_config* cfg, int mode) {
  if (!cfg) return fail_invalid("config is null");
  switch (mode) {
    case CWGD_REGION_NONE: cfg->cfg.region_mode = cwgd::RegionMode::None; break;
    case CWGD_REGION_FROM_OBJECTIVE:
      cfg->cfg.region_mode = cwgd::RegionMode::FromObjective;
      break;
    default: return fail_invalid("unknown region mode");
  }
  clear_error();
  return CWGD_OK;
}

int cwgd_config_set_base_alpha(cwgd_config* cfg, int enabled) {
  if (!cfg) return fail_invalid("config is null");
  clear_error();
  cfg->cfg.base_alpha = enabled != 0;
  return CWGD_OK;
}

int cwgd_config_get_method(const cwgd_config* cfg) {
  if (!cfg) return -1;
  switch (cfg->cfg.method) {
    case cwgd::Method::Standard: return CWGD_METHOD_STANDARD;
    case cwgd::Method::Backtracking: return CWGD_METHOD_BACKTRACKING;
    case cwgd::Method::Coordinatewise: return CWGD_METHOD_COORDINATEWISE;
  }
  return -1;
}

double cwgd_config_get_alpha(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.hp.alpha : 0.0;
}

double cwgd_config_get_beta(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.hp.beta : 0.0;
}

double cwgd_config_get_delta0(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.hp.delta0 : 0.0;
}

double cwgd_config_get_grad_tolerance(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.grad_tolerance : 0.0;
}

int cwgd_config_get_max_iterations(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.max_iterations : 0;
}

double cwgd_config_get_standard_rate(const cwgd_config* cfg) {
  return cfg ? cfg->cfg.effective_standard_rate() : 0.0;
}

/* ---- line search ------------------------------------------------------- */

int cwgd_armijo_holds(const cwgd_objective* obj, const double* z, size_t n,
                      double rate, double alpha, int* holds) {
  if (!obj || !z || !holds) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockVector point = make_point(obj->obj.partition, z, n);
    cwgd::BlockGradient g = obj->obj.gradient(point);
    *holds = cwgd::armijo_holds(obj->obj, point, g, rate, alpha) ? 1 : 0;
  });
}

int cwgd_cw_armijo_holds(const cwgd_objective* obj, const double* z, size_t n,
                         const double* rates, double alpha, int* holds) {
  if (!obj || !z || !rates || !holds) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockVector point = make_point(obj->obj.partition, z, n);
    cwgd::BlockGradient g = obj->obj.gradient(point);
    std::vector<double> r(rates, rates + obj->obj.partition.blocks());
    *holds = cwgd::cw_armijo_holds(obj->obj, point, g, r, alpha) ? 1 : 0;
  });
}

int cwgd_backtracking_rate(const cwgd_objective* obj, const double* z, size_t n,
                           const cwgd_config* cfg, double* rate, int* grid_index) {
  if (!obj || !z || !cfg || !rate) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockVector point = make_point(obj->obj.partition, z, n);
    cwgd::BlockGradient g = obj->obj.gradient(point);
    double cap = cfg->cfg.region_mode == cwgd::RegionMode::FromObjective
                     ? cwgd::cap_value(obj->obj.region, point, g)
                     : cwgd::kNoCap;
    cwgd::BaseRate base = cwgd::base_backtracking(obj->obj, point, g, cfg->cfg.hp,
                                                  cap, cfg->cfg.base_alpha);
    *rate = base.delta;
    if (grid_index) *grid_index = base.grid_index;
  });
}

int cwgd_coordinatewise_rates(const cwgd_objective* obj, const double* z, size_t n,
                              const cwgd_config* cfg, const size_t* order,
                              double* per_block, double* base) {
  if (!obj || !z || !cfg || !per_block) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockVector point = make_point(obj->obj.partition, z, n);
    cwgd::BlockGradient g = obj->obj.gradient(point);
    std::size_t k = obj->obj.partition.blocks();
    std::vector<std::size_t> ord;
    if (order) {
      ord.assign(order, order + k);
    } else {
      ord.resize(k);
      for (std::size_t i = 0; i < k; ++i) ord[i] = i;
    }
    double cap = cfg->cfg.region_mode == cwgd::RegionMode::FromObjective
                     ? cwgd::cap_value(obj->obj.region, point, g)
                     : cwgd::kNoCap;
    cwgd::LearningRates lr = cwgd::cw_backtracking(obj->obj, point, g, cfg->cfg.hp,
                                                   ord, cap, cfg->cfg.base_alpha);
    std::memcpy(per_block, lr.per_block.data(), k * sizeof(double));
    if (base) *base = lr.base;
  });
}

/* ---- running ----------------------------------------------------------- */

cwgd_trajectory* cwgd_run(const cwgd_objective* obj, const double* z0, size_t n,
                          const cwgd_config* cfg) {
  return guarded_ptr([&]() -> cwgd_trajectory* {
    if (!obj || !z0 || !cfg)
      throw cwgd::Error(cwgd::ErrorCode::InvalidArgument, "null argument");
    cwgd::BlockVector start = make_point(obj->obj.partition, z0, n);
    return new cwgd_trajectory{cwgd::run(obj->obj, start, cfg->cfg)};
  });
}

void cwgd_trajectory_free(cwgd_trajectory* traj) { delete traj; }

int cwgd_trajectory_status(const cwgd_trajectory* traj) {
  if (!traj) return -1;
  switch (traj->traj.status) {
    case cwgd::Status::ConvergedGradTol: return CWGD_STATUS_CONVERGED_GRAD_TOL;
    case cwgd::Status::MaxIterations: return CWGD_STATUS_MAX_ITERATIONS;
    case cwgd::Status::DivergedValue: return CWGD_STATUS_DIVERGED_VALUE;
    case cwgd::Status::DivergedNorm: return CWGD_STATUS_DIVERGED_NORM;
    case cwgd::Status::NumericalOverflow: return CWGD_STATUS_NUMERICAL_OVERFLOW;
    case cwgd::Status::CycleDetected: return CWGD_STATUS_CYCLE_DETECTED;
    case cwgd::Status::ExhaustedGrid: return CWGD_STATUS_EXHAUSTED_GRID;
  }
  return -1;
}

const char* cwgd_status_name(int status) {
  switch (status) {
    case CWGD_STATUS_CONVERGED_GRAD_TOL: return "ConvergedGradTol";
    case CWGD_STATUS_MAX_ITERATIONS: return "MaxIterations";
    case CWGD_STATUS_DIVERGED_VALUE: return "DivergedValue";
    case CWGD_STATUS_DIVERGED_NORM: return "DivergedNorm";
    case CWGD_STATUS_NUMERICAL_OVERFLOW: return "NumericalOverflow";
    case CWGD_STATUS_CYCLE_DETECTED: return "CycleDetected";
    case CWGD_STATUS_EXHAUSTED_GRID: return "ExhaustedGrid";
  }
  return "Unknown";
}

size_t cwgd_trajectory_iterations(const cwgd_trajectory* traj) {
  return traj && !traj->traj.records.empty() ? traj->traj.records.size() - 1 : 0;
}

size_t cwgd_trajectory_records(const cwgd_trajectory* traj) {
  return traj ? traj->traj.records.size() : 0;
}

size_t cwgd_trajectory_dim(const cwgd_trajectory* traj) {
  return traj ? traj->traj.partition.total() : 0;
}

size_t cwgd_trajectory_blocks(const cwgd_trajectory* traj) {
  return traj ? traj->traj.partition.blocks() : 0;
}

int cwgd_trajectory_cycle_period(const cwgd_trajectory* traj) {
  return traj ? traj->traj.cycle_period : 0;
}

double cwgd_trajectory_wall_seconds(const cwgd_trajectory* traj) {
  return traj ? traj->traj.wall_seconds : 0.0;
}

int cwgd_trajectory_point(const cwgd_trajectory* traj, size_t record, double* z) {
  if (!traj || !z) return fail_invalid("null argument");
  if (record >= traj->traj.records.size())
    return fail_invalid("record index out of range");
  clear_error();
  const std::vector<double>& data = traj->traj.records[record].z.data;
  std::memcpy(z, data.data(), data.size() * sizeof(double));
  return CWGD_OK;
}

int cwgd_trajectory_value(const cwgd_trajectory* traj, size_t record, double* f,
                          double* grad_norm) {
  if (!traj) return fail_invalid("null argument");
  if (record >= traj->traj.records.size())
    return fail_invalid("record index out of range");
  clear_error();
  if (f) *f = traj->traj.records[record].f;
  if (grad_norm) *grad_norm = traj->traj.records[record].grad_norm;
  return CWGD_OK;
}

int cwgd_trajectory_rates(const cwgd_trajectory* traj, size_t record,
                          double* per_block, double* base, int* has) {
  if (!traj || !has) return fail_invalid("null argument");
  if (record >= traj->traj.records.size())
    return fail_invalid("record index out of range");
  clear_error();
  const auto& rates = traj->traj.records[record].rates;
  if (!rates) {
    *has = 0;
    return CWGD_OK;
  }
  *has = 1;
  if (per_block)
    std::memcpy(per_block, rates->per_block.data(),
                rates->per_block.size() * sizeof(double));
  if (base) *base = rates->base;
  return CWGD_OK;
}

int cwgd_trajectory_order(const cwgd_trajectory* traj, size_t record,
                          size_t* order, size_t* len) {
  if (!traj || !len) return fail_invalid("null argument");
  if (record >= traj->traj.records.size())
    return fail_invalid("record index out of range");
  clear_error();
  const std::vector<std::size_t>& ord = traj->traj.records[record].order;
  *len = ord.size();
  if (order)
    for (size_t i = 0; i < ord.size(); ++i) order[i] = ord[i];
  return CWGD_OK;
}

/* ---- diagnostics ------------------------------------------------------- */

int cwgd_descent_audit(const cwgd_trajectory* traj, double* max_violation,
                       size_t* steps) {
  if (!traj || !max_violation) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::DescentAudit report = cwgd::descent_audit(traj->traj);
    *max_violation = report.max_violation;
    if (steps) *steps = report.violations.size();
  });
}

int cwgd_critical_point_check(const cwgd_objective* obj, const double* z, size_t n,
                              double tol, int* is_critical) {
  if (!obj || !z || !is_critical) return fail_invalid("null argument");
  return guarded([&] {
    cwgd::BlockVector point = make_point(obj->obj.partition, z, n);
    *is_critical = cwgd::critical_point_check(obj->obj, point, tol) ? 1 : 0;
  });
}

int cwgd_step_norm_trend(const cwgd_trajectory* traj, double* tail_max_step,
                         int* classification) {
  if (!traj || !tail_max_step || !classification)
    return fail_invalid("null argument");
  return guarded([&] {
    cwgd::StepNormTrend trend = cwgd::step_norm_trend(traj->traj);
    *tail_max_step = trend.tail_max_step;
    switch (trend.classification) {
      case cwgd::TrendClass::Vanishing: *classification = CWGD_TREND_VANISHING; break;
      case cwgd::TrendClass::DivergingValue:
        *classification = CWGD_TREND_DIVERGING_VALUE;
        break;
      case cwgd::TrendClass::Neither: *classification = CWGD_TREND_NEITHER; break;
    }
  });
}

const char* cwgd_trend_name(int classification) {
  switch (classification) {
    case CWGD_TREND_VANISHING: return "vanishing";
    case CWGD_TREND_DIVERGING_VALUE: return "diverging-value";
    case CWGD_TREND_NEITHER: return "neither";
  }
  return "unknown";
}

int cwgd_cluster_tail_diameter(const cwgd_trajectory* traj, size_t window,
                               double* diameter) {
  if (!traj || !diameter) return fail_invalid("null argument");
  return guarded(
      [&] { *diameter = cwgd::cluster_tail_diameter(traj->traj, window); });
}

int cwgd_grad_check(const cwgd_objective* obj, const double* points,
                    size_t npoints, double h, double tol, double* max_rel_error,
                    int* all_ok) {
  if (!obj || (npoints > 0 && !points) || !max_rel_error || !all_ok)
    return fail_invalid("null argument");
  return guarded([&] {
    std::size_t dim = obj->obj.partition.total();
    std::vector<cwgd::BlockVector> pts;
    pts.reserve(npoints);
    for (size_t i = 0; i < npoints; ++i)
      pts.push_back(cwgd::BlockVector(
          obj->obj.partition,
          std::vector<double>(points + i * dim, points + (i + 1) * dim)));
    cwgd::GradCheck report = cwgd::grad_check(obj->obj, pts, h, tol);
    *max_rel_error = report.max_rel_error;
    *all_ok = report.all_ok ? 1 : 0;
  });
}

}  // extern "C"
