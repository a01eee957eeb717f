#include "cwgd.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct Obj {
  cwgd_objective* p;
  explicit Obj(cwgd_objective* raw) : p(raw) {}
  ~Obj() { cwgd_objective_free(p); }
  Obj(const Obj&) = delete;
  Obj& operator=(const Obj&) = delete;
};

struct Cfg {
  cwgd_config* p;
  Cfg() : p(cwgd_config_new()) {}
  ~Cfg() { cwgd_config_free(p); }
  Cfg(const Cfg&) = delete;
  Cfg& operator=(const Cfg&) = delete;
};

struct Traj {
  cwgd_trajectory* p;
  explicit Traj(cwgd_trajectory* raw) : p(raw) {}
  ~Traj() { cwgd_trajectory_free(p); }
  Traj(const Traj&) = delete;
  Traj& operator=(const Traj&) = delete;
};

cwgd_objective* make_rosen() { return cwgd_objective_builtin("rosenbrock", nullptr, nullptr, 0); }

}  // namespace

TEST_CASE("version and catalog") {
  REQUIRE(cwgd_version() != nullptr);
  CHECK(std::string(cwgd_version()).find('.') != std::string::npos);

  size_t count = cwgd_builtin_count();
  CHECK(count == 7);
  bool saw_rosen = false;
  for (size_t i = 0; i < count; ++i) {
    const char *name, *sig, *part, *minima;
    REQUIRE(cwgd_builtin_info(i, &name, &sig, &part, &minima) == CWGD_OK);
    if (std::string(name) == "rosenbrock") saw_rosen = true;
  }
  CHECK(saw_rosen);
  CHECK(cwgd_builtin_info(count, nullptr, nullptr, nullptr, nullptr) != CWGD_OK);
}

TEST_CASE("objective construction and queries") {
  Obj rosen(make_rosen());
  REQUIRE(rosen.p != nullptr);
  CHECK(std::string(cwgd_objective_name(rosen.p)) == "rosenbrock");
  CHECK(cwgd_objective_dim(rosen.p) == 2);
  CHECK(cwgd_objective_blocks(rosen.p) == 2);
  size_t dims[2] = {0, 0};
  REQUIRE(cwgd_objective_block_dims(rosen.p, dims) == CWGD_OK);
  CHECK(dims[0] == 1);
  CHECK(dims[1] == 1);
  CHECK(cwgd_objective_has_region(rosen.p) == 0);

  double z[2] = {1.0, 1.0};
  double f = -1.0;
  REQUIRE(cwgd_objective_value(rosen.p, z, 2, &f) == CWGD_OK);
  CHECK(f == 0.0);
  double g[2] = {-1.0, -1.0};
  REQUIRE(cwgd_objective_gradient(rosen.p, z, 2, g) == CWGD_OK);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);

  double minimizer[2];
  int has = 0;
  REQUIRE(cwgd_objective_known_minimizer(rosen.p, minimizer, &has) == CWGD_OK);
  CHECK(has == 1);
  CHECK(minimizer[0] == 1.0);
  CHECK(minimizer[1] == 1.0);

  double wrong[1] = {1.0};
  CHECK(cwgd_objective_value(rosen.p, wrong, 1, &f) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_DIMENSION_MISMATCH);
}

TEST_CASE("builtin parameters and failure reporting") {
  const char* names[] = {"a"};
  double values[] = {3.0};
  Obj steep(cwgd_objective_builtin("abs_plus_linear", names, values, 1));
  REQUIRE(steep.p != nullptr);
  CHECK(cwgd_objective_has_region(steep.p) == 1);
  double z[2] = {2.0, 1.0};
  double f = 0.0;
  REQUIRE(cwgd_objective_value(steep.p, z, 2, &f) == CWGD_OK);
  CHECK(f == 7.0);

  CHECK(cwgd_objective_builtin("no_such", nullptr, nullptr, 0) == nullptr);
  CHECK(cwgd_last_error_code() == CWGD_ERR_UNKNOWN_FUNCTION);
  CHECK(std::strlen(cwgd_last_error_message()) > 0);

  double bad_value[] = {-1.0};
  CHECK(cwgd_objective_builtin("abs_plus_linear", names, bad_value, 1) == nullptr);
  CHECK(cwgd_last_error_code() == CWGD_ERR_INVALID_PARAMETER);
}

TEST_CASE("quadratic and expression objectives") {
  size_t dims[2] = {1, 1};
  double coeffs[2] = {1.0, 4.0};
  Obj quad(cwgd_objective_quadratic(dims, 2, coeffs));
  REQUIRE(quad.p != nullptr);
  double z[2] = {1.0, 1.0};
  double f = 0.0;
  REQUIRE(cwgd_objective_value(quad.p, z, 2, &f) == CWGD_OK);
  CHECK(f == 2.5);

  Obj bowl(cwgd_objective_expr("x^2 + y^2", 2, 0.0));
  REQUIRE(bowl.p != nullptr);
  CHECK(cwgd_objective_dim(bowl.p) == 2);
  double p[2] = {1.0, 2.0};
  REQUIRE(cwgd_objective_value(bowl.p, p, 2, &f) == CWGD_OK);
  CHECK(f == 5.0);

  CHECK(cwgd_objective_expr("x $ y", 2, 0.0) == nullptr);
  CHECK(cwgd_last_error_code() == CWGD_ERR_LEX);
  CHECK(cwgd_last_error_position() == 2);

  CHECK(cwgd_objective_expr("sin(x,", 1, 0.0) == nullptr);
  CHECK(cwgd_last_error_code() == CWGD_ERR_PARSE);
  CHECK(cwgd_last_error_position() == 6);

  CHECK(cwgd_objective_expr("x + y + x3", 2, 0.0) == nullptr);
  CHECK(cwgd_last_error_code() == CWGD_ERR_DIMENSION_MISMATCH);
}

TEST_CASE("config defaults, setters, getters") {
  Cfg cfg;
  REQUIRE(cfg.p != nullptr);
  CHECK(cwgd_config_get_method(cfg.p) == CWGD_METHOD_BACKTRACKING);
  CHECK(cwgd_config_get_alpha(cfg.p) == 0.5);
  CHECK(cwgd_config_get_beta(cfg.p) == 0.5);
  CHECK(cwgd_config_get_delta0(cfg.p) == 2.0);
  CHECK(cwgd_config_get_grad_tolerance(cfg.p) == 1e-8);
  CHECK(cwgd_config_get_max_iterations(cfg.p) == 100000);
  // unset standard rate falls back to delta0
  CHECK(cwgd_config_get_standard_rate(cfg.p) == 2.0);

  CHECK(cwgd_config_set_hyperparams(cfg.p, 0.25, 0.7, 1.0) == CWGD_OK);
  CHECK(cwgd_config_get_alpha(cfg.p) == 0.25);
  CHECK(cwgd_config_get_beta(cfg.p) == 0.7);
  CHECK(cwgd_config_get_delta0(cfg.p) == 1.0);

  CHECK(cwgd_config_set_hyperparams(cfg.p, 1.5, 0.5, 1.0) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_INVALID_PARAMETER);
  // rejected values leave the config untouched
  CHECK(cwgd_config_get_alpha(cfg.p) == 0.25);

  CHECK(cwgd_config_set_standard_rate(cfg.p, 0.5) == CWGD_OK);
  CHECK(cwgd_config_get_standard_rate(cfg.p) == 0.5);
  CHECK(cwgd_config_clear_standard_rate(cfg.p) == CWGD_OK);
  CHECK(cwgd_config_get_standard_rate(cfg.p) == 1.0);

  CHECK(cwgd_config_set_method(cfg.p, 99) != CWGD_OK);
  CHECK(cwgd_config_set_max_iterations(cfg.p, 0) != CWGD_OK);
  CHECK(cwgd_config_set_grad_tolerance(cfg.p, -1.0) != CWGD_OK);
}

TEST_CASE("line search entry points") {
  size_t dims[1] = {1};
  double coeffs[1] = {2.0};
  Obj sq(cwgd_objective_quadratic(dims, 1, coeffs));  // f = x^2
  double z[1] = {1.0};

  int holds = -1;
  REQUIRE(cwgd_armijo_holds(sq.p, z, 1, 0.1, 0.5, &holds) == CWGD_OK);
  CHECK(holds == 1);
  REQUIRE(cwgd_armijo_holds(sq.p, z, 1, 1.0, 0.5, &holds) == CWGD_OK);
  CHECK(holds == 0);

  double half_coeff[1] = {1.0};
  Obj half(cwgd_objective_quadratic(dims, 1, half_coeff));  // f = x^2/2
  Cfg cfg;
  double rate = 0.0;
  int index = -1;
  REQUIRE(cwgd_backtracking_rate(half.p, z, 1, cfg.p, &rate, &index) == CWGD_OK);
  CHECK(rate == 1.0);
  CHECK(index == 1);

  double zero[1] = {0.0};
  CHECK(cwgd_backtracking_rate(half.p, zero, 1, cfg.p, &rate, &index) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_ZERO_GRADIENT);

  Obj kink(cwgd_objective_builtin("abs_plus_linear", nullptr, nullptr, 0));
  double start[2] = {0.1, 0.0};
  double rates_out[2] = {0, 0};
  double base = 0.0;
  REQUIRE(cwgd_coordinatewise_rates(kink.p, start, 2, cfg.p, nullptr, rates_out,
                                    &base) == CWGD_OK);
  CHECK(base == 0.0625);
  CHECK(rates_out[0] == 0.0625);
  CHECK(rates_out[1] == 2.0);

  double per[2] = {1.0, 1.0};
  REQUIRE(cwgd_cw_armijo_holds(kink.p, start, 2, per, 0.5, &holds) == CWGD_OK);
  CHECK(holds == 0);
}

TEST_CASE("full run round trip") {
  Obj rosen(make_rosen());
  Cfg cfg;
  double z0[2] = {0.55134554, 0.75134554};
  Traj traj(cwgd_run(rosen.p, z0, 2, cfg.p));
  REQUIRE(traj.p != nullptr);

  CHECK(cwgd_trajectory_status(traj.p) == CWGD_STATUS_CONVERGED_GRAD_TOL);
  CHECK(std::string(cwgd_status_name(cwgd_trajectory_status(traj.p))) ==
        "ConvergedGradTol");
  size_t records = cwgd_trajectory_records(traj.p);
  CHECK(records == cwgd_trajectory_iterations(traj.p) + 1);
  CHECK(cwgd_trajectory_dim(traj.p) == 2);
  CHECK(cwgd_trajectory_blocks(traj.p) == 2);
  CHECK(cwgd_trajectory_cycle_period(traj.p) == 0);
  CHECK(cwgd_trajectory_wall_seconds(traj.p) >= 0.0);

  double last[2];
  REQUIRE(cwgd_trajectory_point(traj.p, records - 1, last) == CWGD_OK);
  CHECK(std::hypot(last[0] - 1.0, last[1] - 1.0) < 1e-6);

  double f = 0.0, gn = 0.0;
  REQUIRE(cwgd_trajectory_value(traj.p, records - 1, &f, &gn) == CWGD_OK);
  CHECK(gn < 1e-8);

  double per[2];
  double base = 0.0;
  int has = -1;
  REQUIRE(cwgd_trajectory_rates(traj.p, 0, per, &base, &has) == CWGD_OK);
  CHECK(has == 1);
  CHECK(base > 0.0);
  CHECK(per[0] == base);  // backtracking shares one rate across blocks
  REQUIRE(cwgd_trajectory_rates(traj.p, records - 1, per, &base, &has) == CWGD_OK);
  CHECK(has == 0);

  CHECK(cwgd_trajectory_point(traj.p, records, last) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_INVALID_ARGUMENT);

  double violation = 1.0;
  size_t steps = 0;
  REQUIRE(cwgd_descent_audit(traj.p, &violation, &steps) == CWGD_OK);
  CHECK(steps == records - 1);
  CHECK(violation <= 1e-10);

  double tail = -1.0;
  int trend = -1;
  REQUIRE(cwgd_step_norm_trend(traj.p, &tail, &trend) == CWGD_OK);
  CHECK(trend == CWGD_TREND_VANISHING);
  CHECK(std::string(cwgd_trend_name(trend)) == "vanishing");

  double diameter = -1.0;
  REQUIRE(cwgd_cluster_tail_diameter(traj.p, 50, &diameter) == CWGD_OK);
  CHECK(diameter < 1e-5);
  CHECK(cwgd_cluster_tail_diameter(traj.p, 0, &diameter) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_TOO_SHORT);

  int critical = -1;
  double origin[2] = {0.0, 0.0};
  REQUIRE(cwgd_critical_point_check(rosen.p, last, 2, 1e-6, &critical) == CWGD_OK);
  CHECK(critical == 1);
  REQUIRE(cwgd_critical_point_check(rosen.p, origin, 2, 1e-6, &critical) == CWGD_OK);
  CHECK(critical == 0);
}

TEST_CASE("coordinate-wise runs carry per-block rates and order") {
  Obj kink(cwgd_objective_builtin("abs_plus_linear", nullptr, nullptr, 0));
  Cfg cfg;
  REQUIRE(cwgd_config_set_method(cfg.p, CWGD_METHOD_COORDINATEWISE) == CWGD_OK);
  REQUIRE(cwgd_config_set_divergence_thresholds(cfg.p, -1e3, 1e8) == CWGD_OK);
  REQUIRE(cwgd_config_set_max_iterations(cfg.p, 5000) == CWGD_OK);

  double z0[2] = {0.1, 0.0};
  Traj traj(cwgd_run(kink.p, z0, 2, cfg.p));
  REQUIRE(traj.p != nullptr);
  CHECK(cwgd_trajectory_status(traj.p) == CWGD_STATUS_DIVERGED_VALUE);
  CHECK(cwgd_trajectory_iterations(traj.p) == 501);

  double per[2];
  double base = 0.0;
  int has = 0;
  REQUIRE(cwgd_trajectory_rates(traj.p, 0, per, &base, &has) == CWGD_OK);
  CHECK(has == 1);
  CHECK(per[1] == 2.0);

  size_t order[2] = {9, 9};
  size_t len = 0;
  REQUIRE(cwgd_trajectory_order(traj.p, 0, order, &len) == CWGD_OK);
  CHECK(len == 2);
  CHECK(order[0] == 0);
  CHECK(order[1] == 1);
}

TEST_CASE("standard-method trajectories refuse the descent audit") {
  Obj vee(cwgd_objective_expr("abs(x)", 1, 0.0));
  Cfg cfg;
  REQUIRE(cwgd_config_set_method(cfg.p, CWGD_METHOD_STANDARD) == CWGD_OK);
  REQUIRE(cwgd_config_set_standard_rate(cfg.p, 1.0) == CWGD_OK);
  REQUIRE(cwgd_config_set_cycle_detection(cfg.p, 1, 2, 1e-9) == CWGD_OK);

  double z0[1] = {0.3};
  Traj traj(cwgd_run(vee.p, z0, 1, cfg.p));
  REQUIRE(traj.p != nullptr);
  CHECK(cwgd_trajectory_status(traj.p) == CWGD_STATUS_CYCLE_DETECTED);
  CHECK(cwgd_trajectory_cycle_period(traj.p) == 2);

  double violation = 0.0;
  size_t steps = 0;
  CHECK(cwgd_descent_audit(traj.p, &violation, &steps) != CWGD_OK);
  CHECK(cwgd_last_error_code() == CWGD_ERR_MISSING_RATES);

  size_t order[1];
  size_t len = 7;
  REQUIRE(cwgd_trajectory_order(traj.p, 0, order, &len) == CWGD_OK);
  CHECK(len == 0);
}

TEST_CASE("null handles are rejected, not dereferenced") {
  CHECK(cwgd_objective_value(nullptr, nullptr, 0, nullptr) != CWGD_OK);
  CHECK(cwgd_run(nullptr, nullptr, 0, nullptr) == nullptr);
  CHECK(cwgd_trajectory_status(nullptr) < 0);
  CHECK(cwgd_config_set_method(nullptr, CWGD_METHOD_STANDARD) != CWGD_OK);
  CHECK(cwgd_last_error_code() != CWGD_OK);
}

TEST_CASE("grad check through the C surface") {
  Obj rosen(make_rosen());
  double pts[6] = {0.5, 0.75, -1.0, 2.0, 1.5, -0.5};
  double worst = -1.0;
  int ok = 0;
  REQUIRE(cwgd_grad_check(rosen.p, pts, 3, 1e-6, 1e-6, &worst, &ok) == CWGD_OK);
  CHECK(ok == 1);
  CHECK(worst < 1e-6);
}
