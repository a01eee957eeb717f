#include "diagnostics.hpp"

#include <cmath>

#include "doctest.h"
#include "expr.hpp"
#include "objectives.hpp"
#include "optimizers.hpp"

using namespace cwgd;

namespace {

const BlockPartition kTwo({1, 1});

BlockVector v2(double x, double y) { return BlockVector(kTwo, {x, y}); }

Trajectory rosen_bt_run() {
  RunConfig cfg;
  return run(builtin("rosenbrock"), v2(0.55134554, 0.75134554), cfg);
}

Trajectory abs_cw_dive() {
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.divergence_value_threshold = -1e3;
  cfg.max_iterations = 5000;
  return run(builtin("abs_plus_linear"), v2(0.1, 0.0), cfg);
}

Trajectory abs_std_loop(int budget) {
  RunConfig cfg;
  cfg.method = Method::Standard;
  cfg.standard_rate = 1.0;
  cfg.max_iterations = budget;
  Objective vee = to_objective(parse("abs(x)"), BlockPartition::single(1));
  return run(vee, BlockVector(BlockPartition::single(1), {0.3}), cfg);
}

}  // namespace

TEST_CASE("descent audit accepts honestly produced trajectories") {
  Trajectory bt = rosen_bt_run();
  DescentAudit audit = descent_audit(bt);
  CHECK(audit.violations.size() == bt.records.size() - 1);
  CHECK(audit.max_violation <= 1e-10);

  DescentAudit same = descent_audit(bt, bt.config.hp);
  CHECK(same.max_violation == audit.max_violation);

  Trajectory cw = abs_cw_dive();
  CHECK(descent_audit(cw).max_violation <= 1e-10);
}

TEST_CASE("descent audit flags a trajectory whose rates overstate the step") {
  Trajectory fake;
  fake.partition = BlockPartition::single(1);
  LearningRates claimed;
  claimed.base = 0.05;
  claimed.base_index = 0;
  claimed.per_block = {0.05};
  claimed.grid_indices = {0};
  fake.records.push_back({BlockVector(fake.partition, {1.0}), 0.5, 1.0,
                          claimed, {0}});
  fake.records.push_back(
      {BlockVector(fake.partition, {0.5}), 0.125, 0.5, std::nullopt, {}});

  // recovered gradient (1.0-0.5)/0.05 = 10, so the bound demands a decrease
  // of 2.5 that the values do not show
  DescentAudit audit = descent_audit(fake, HyperParams{});
  REQUIRE(audit.violations.size() == 1);
  CHECK(audit.violations[0] == doctest::Approx(2.125));
  CHECK(audit.max_violation > 0.0);
  CHECK(audit.worst_step == 0);
}

TEST_CASE("descent audit edge cases") {
  Trajectory single;
  single.partition = BlockPartition::single(1);
  single.records.push_back(
      {BlockVector(single.partition, {1.0}), 0.5, 1.0, std::nullopt, {}});
  DescentAudit empty = descent_audit(single, HyperParams{});
  CHECK(empty.violations.empty());
  CHECK(empty.max_violation == 0.0);
  CHECK(empty.worst_step == -1);

  Trajectory standard = abs_std_loop(5);
  try {
    descent_audit(standard);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::MissingRates);
  }
}

TEST_CASE("critical point check") {
  Objective rosen = builtin("rosenbrock");
  CHECK(critical_point_check(rosen, v2(1, 1), 1e-8));
  CHECK_FALSE(critical_point_check(rosen, v2(0, 0), 1e-8));  // gradient (-2, 0)
  CHECK(std::sqrt(squared_norm(rosen.gradient(v2(0, 0)))) == 2.0);

  Objective cube = builtin("cube_sin_1d");
  CHECK(critical_point_check(cube, BlockVector(BlockPartition::single(1), {0.0}),
                             1e-8));
}

TEST_CASE("step norm trend classifications") {
  Trajectory converged = rosen_bt_run();
  StepNormTrend trend = step_norm_trend(converged);
  CHECK(trend.classification == TrendClass::Vanishing);
  CHECK(trend.tail_max_step <
        10.0 * converged.config.grad_tolerance * converged.config.hp.delta0);

  Trajectory dive = abs_cw_dive();
  CHECK(step_norm_trend(dive).classification == TrendClass::DivergingValue);

  Trajectory loop = abs_std_loop(50);
  StepNormTrend flat = step_norm_trend(loop);
  CHECK(flat.classification == TrendClass::Neither);
  CHECK(flat.tail_max_step == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(std::string(trend_class_name(TrendClass::Vanishing)) == "vanishing");
  CHECK(std::string(trend_class_name(TrendClass::DivergingValue)) ==
        "diverging-value");
  CHECK(std::string(trend_class_name(TrendClass::Neither)) == "neither");
}

TEST_CASE("step norm trend needs at least 20 iterations") {
  RunConfig cfg;
  cfg.max_iterations = 19;
  Trajectory stub = run(builtin("rosenbrock"), v2(0.55134554, 0.75134554), cfg);
  try {
    step_norm_trend(stub);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::TooShort);
  }

  cfg.max_iterations = 20;
  Trajectory enough = run(builtin("rosenbrock"), v2(0.55134554, 0.75134554), cfg);
  CHECK_NOTHROW(step_norm_trend(enough));
}

TEST_CASE("cluster tail diameter") {
  Trajectory converged = rosen_bt_run();
  CHECK(cluster_tail_diameter(converged, 50) < 1e-5);
  CHECK(cluster_tail_diameter(converged, 1) == 0.0);
  // the full window reaches back to the start point, far from (1,1)
  CHECK(cluster_tail_diameter(converged, converged.records.size()) > 0.4);

  CHECK_THROWS_AS(cluster_tail_diameter(converged, 0), Error);
  CHECK_THROWS_AS(
      cluster_tail_diameter(converged, converged.records.size() + 1), Error);

  Trajectory loop = abs_std_loop(50);
  CHECK(cluster_tail_diameter(loop, 10) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gradient checker against central differences") {
  Objective rosen = builtin("rosenbrock");
  std::vector<BlockVector> points{v2(0.5, 0.75), v2(-1, 2), v2(1.5, -0.5),
                                  v2(2, 2), v2(0.1, 0.9)};
  GradCheck check = grad_check(rosen, points, 1e-6, 1e-6);
  CHECK(check.all_ok);
  CHECK(check.entries.size() == points.size());
  CHECK(check.max_rel_error < 1e-6);

  GradCheck strict = grad_check(rosen, points, 1e-6, 1e-16);
  CHECK_FALSE(strict.all_ok);
  CHECK(strict.entries.size() == points.size());

  // probes that would land on the excluded set propagate the region error
  Objective kink = builtin("abs_plus_linear");
  CHECK_THROWS_AS(
      grad_check(kink, {v2(1e-6, 0.0)}, 1e-6, 1e-6), Error);
}
