#include "optimizers.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "expr.hpp"
#include "objectives.hpp"

using namespace cwgd;

namespace {

const BlockPartition kTwo({1, 1});

BlockVector v2(double x, double y) { return BlockVector(kTwo, {x, y}); }

Objective abs_expr() {
  return to_objective(parse("abs(x)"), BlockPartition::single(1));
}

}  // namespace

TEST_CASE("standard steps") {
  Objective bowl = quadratic({2}, {1.0});  // f = ||z||^2/2, g = z
  BlockVector z(BlockPartition::single(2), {2.0, 2.0});
  BlockVector next = step_standard(bowl, z, 1.0);
  CHECK(next.data == std::vector<double>{0.0, 0.0});

  Objective vee = abs_expr();
  BlockVector x0(BlockPartition::single(1), {0.3});
  BlockVector flipped = step_standard(vee, x0, 1.0);
  CHECK(flipped.data[0] == doctest::Approx(-0.7).epsilon(1e-9));

  CHECK_THROWS_AS(step_standard(bowl, z, 0.0), Error);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate(2));

  auto expect_bad = [](RunConfig c, std::size_t blocks) {
    try {
      c.validate(blocks);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::InvalidParameter);
    }
  };

  RunConfig c = cfg;
  c.max_iterations = 0;
  expect_bad(c, 2);
  c = cfg;
  c.grad_tolerance = 0.0;
  expect_bad(c, 2);
  c = cfg;
  c.standard_rate = -1.0;
  expect_bad(c, 2);
  c = cfg;
  c.static_order = {0, 0};
  expect_bad(c, 2);
  c = cfg;
  c.static_order = {0, 1, 2};
  expect_bad(c, 2);
  c = cfg;
  c.cycle.enabled = true;
  c.cycle.max_period = 1;
  expect_bad(c, 2);
  c = cfg;
  c.hp.alpha = 2.0;
  expect_bad(c, 2);
}

TEST_CASE("backtracking run settles into the rosenbrock minimum") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;  // backtracking, defaults
  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);

  CHECK(traj.status == Status::ConvergedGradTol);
  REQUIRE(traj.records.size() >= 2);
  CHECK(traj.iterations() == static_cast<int>(traj.records.size()) - 1);

  const BlockVector& last = traj.records.back().z;
  CHECK(std::hypot(last.data[0] - 1.0, last.data[1] - 1.0) < 1e-6);
  CHECK(traj.records.back().grad_norm < cfg.grad_tolerance);

  // every recorded rate sits on the candidate grid
  for (std::size_t n = 0; n + 1 < traj.records.size(); ++n) {
    const auto& rec = traj.records[n];
    REQUIRE(rec.rates.has_value());
    CHECK(rec.rates->base == candidate(cfg.hp, rec.rates->base_index));
    for (std::size_t b = 0; b < rec.rates->per_block.size(); ++b) {
      CHECK(rec.rates->per_block[b] ==
            candidate(cfg.hp, rec.rates->grid_indices[b]));
      CHECK(rec.rates->per_block[b] <= cfg.hp.delta0);
    }
  }
  CHECK_FALSE(traj.records.back().rates.has_value());

  SUBCASE("descent is monotone up to rounding") {
    for (std::size_t n = 0; n + 1 < traj.records.size(); ++n) {
      const auto& cur = traj.records[n];
      const auto& nxt = traj.records[n + 1];
      double promised = 0.0;
      BlockGradient g = rosen.gradient(cur.z);
      for (std::size_t b = 0; b < 2; ++b)
        promised += cur.rates->per_block[b] * block_squared_norm(g, b);
      CHECK(nxt.f <= cur.f - cfg.hp.alpha * promised +
                         1e-12 * std::fabs(cur.f) + 1e-300);
    }
  }

  SUBCASE("reruns are bit-identical") {
    Trajectory again = run(rosen, v2(0.55134554, 0.75134554), cfg);
    REQUIRE(again.records.size() == traj.records.size());
    CHECK(again.status == traj.status);
    for (std::size_t n = 0; n < traj.records.size(); ++n) {
      CHECK(again.records[n].z == traj.records[n].z);
      CHECK(again.records[n].f == traj.records[n].f);
    }
  }
}

TEST_CASE("coordinate-wise run dives along the linear coordinate") {
  Objective kink = builtin("abs_plus_linear");
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.divergence_value_threshold = -1e3;
  cfg.max_iterations = 5000;

  Trajectory traj = run(kink, v2(0.1, 0.0), cfg);
  CHECK(traj.status == Status::DivergedValue);
  CHECK(traj.iterations() == 501);

  for (std::size_t n = 0; n + 1 < traj.records.size(); ++n) {
    const auto& rec = traj.records[n];
    REQUIRE(rec.rates.has_value());
    CHECK(rec.rates->per_block[1] == 2.0);
    CHECK(rec.rates->grid_indices[1] == 0);
    CHECK(std::fabs(rec.z.data[0]) <= 0.1 + 1e-12);
  }
  // y walks down in exact multiples of delta0
  for (std::size_t n = 0; n < traj.records.size(); ++n)
    CHECK(traj.records[n].z.data[1] == -2.0 * static_cast<double>(n));
}

TEST_CASE("standard run on |x| falls into the detected 2-cycle") {
  Objective vee = abs_expr();
  RunConfig cfg;
  cfg.method = Method::Standard;
  cfg.standard_rate = 1.0;
  cfg.cycle.enabled = true;
  cfg.max_iterations = 50;

  Trajectory traj = run(vee, BlockVector(BlockPartition::single(1), {0.3}), cfg);
  CHECK(traj.status == Status::CycleDetected);
  CHECK(traj.cycle_period == 2);
  CHECK(traj.iterations() == 3);
  CHECK(traj.records[0].z.data[0] == 0.3);
  CHECK(traj.records[1].z.data[0] == doctest::Approx(-0.7).epsilon(1e-9));
  CHECK(traj.records[2].z.data[0] == doctest::Approx(0.3).epsilon(1e-9));

  SUBCASE("without detection the same run exhausts its budget") {
    RunConfig plain = cfg;
    plain.cycle.enabled = false;
    Trajectory loop = run(vee, BlockVector(BlockPartition::single(1), {0.3}), plain);
    CHECK(loop.status == Status::MaxIterations);
    CHECK(loop.iterations() == 50);
  }
}

TEST_CASE("zero gradient at the start yields a single-record run") {
  Objective bowl = quadratic({1, 1}, {1.0, 1.0});
  RunConfig cfg;
  Trajectory traj = run(bowl, v2(0, 0), cfg);
  CHECK(traj.status == Status::ConvergedGradTol);
  CHECK(traj.records.size() == 1);
  CHECK(traj.iterations() == 0);
  CHECK_FALSE(traj.records[0].rates.has_value());
}

TEST_CASE("norm divergence fires before the overflow") {
  Objective bowl = quadratic({1}, {1.0});
  RunConfig cfg;
  cfg.method = Method::Standard;
  cfg.standard_rate = 3.0;  // z -> -2z, norm doubles every step
  Trajectory traj = run(bowl, BlockVector(BlockPartition::single(1), {1.0}), cfg);
  CHECK(traj.status == Status::DivergedNorm);
  CHECK(traj.iterations() == 27);  // 2^27 is the first power past 1e8
  CHECK(std::fabs(traj.records.back().z.data[0]) == 134217728.0);
}

TEST_CASE("overflow status when the norm guard is parked out of reach") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;
  cfg.method = Method::Standard;
  cfg.standard_rate = 1.0;
  cfg.divergence_norm_threshold = 1e308;
  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);
  CHECK(traj.status == Status::NumericalOverflow);
  CHECK(traj.iterations() <= 6);
  const TrajectoryRecord& last = traj.records.back();
  bool overflowed = !last.z.finite() || !std::isfinite(last.f) ||
                    !std::isfinite(last.grad_norm);
  CHECK(overflowed);  // the value blows up before the iterate does
}

TEST_CASE("a non-finite start is reported as overflow") {
  Objective bowl = quadratic({1}, {1.0});
  BlockVector z0(BlockPartition::single(1),
                 {std::numeric_limits<double>::infinity()});
  Trajectory traj = run(bowl, z0, RunConfig{});
  CHECK(traj.status == Status::NumericalOverflow);
  CHECK(traj.records.size() == 1);
}

TEST_CASE("convergence outranks value divergence") {
  Objective sunk;
  sunk.name = "sunk_bowl";
  sunk.partition = BlockPartition::single(1);
  sunk.value = [](const BlockVector& z) {
    return 0.5 * z.data[0] * z.data[0] - 2e8;
  };
  sunk.gradient = [](const BlockVector& z) {
    return BlockVector(BlockPartition::single(1), {z.data[0]});
  };
  Trajectory traj =
      run(sunk, BlockVector(BlockPartition::single(1), {1e-9}), RunConfig{});
  CHECK(traj.status == Status::ConvergedGradTol);
  CHECK(traj.records.size() == 1);
  CHECK(traj.records[0].f < -1e8);
}

TEST_CASE("iteration budget halts the run") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;
  cfg.max_iterations = 10;
  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);
  CHECK(traj.status == Status::MaxIterations);
  CHECK(traj.records.size() == 11);
}

TEST_CASE("a starved grid surfaces as its own status") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;
  cfg.hp.max_grid_depth = 1;
  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);
  CHECK(traj.status == Status::ExhaustedGrid);
  CHECK(traj.records.size() == 1);
}

TEST_CASE("a start inside the excluded set is rejected up front") {
  Objective kink = builtin("abs_plus_linear");
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.region_mode = RegionMode::FromObjective;
  try {
    run(kink, v2(0, 5), cfg);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::RegionViolation);
  }
}

TEST_CASE("region-capped rates stay below the distance bound") {
  Objective kink = builtin("abs_plus_linear");
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.region_mode = RegionMode::FromObjective;
  cfg.max_iterations = 50;

  Trajectory traj = run(kink, v2(0.1, 0.0), cfg);
  CHECK(traj.status == Status::MaxIterations);
  for (std::size_t n = 0; n + 1 < traj.records.size(); ++n) {
    const auto& rec = traj.records[n];
    REQUIRE(rec.rates.has_value());
    double cap = cap_value(kink.region, rec.z, kink.gradient(rec.z));
    for (double r : rec.rates->per_block) CHECK(r < cap);
    // the capped step can never push x across or onto the hyperplane
    CHECK(traj.records[n + 1].z.data[0] != 0.0);
  }
}

TEST_CASE("mismatched start point shape is rejected") {
  Objective rosen = builtin("rosenbrock");
  try {
    run(rosen, BlockVector(BlockPartition::single(2), {1.0, 1.0}), RunConfig{});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("adaptive ordering starts from the fallback and keeps converging") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.order_policy = OrderPolicy::LipschitzAdaptive;
  cfg.max_iterations = 50000;

  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);
  CHECK(traj.status == Status::ConvergedGradTol);
  CHECK(traj.records[0].order == std::vector<std::size_t>{0, 1});
  const BlockVector& last = traj.records.back().z;
  CHECK(std::hypot(last.data[0] - 1.0, last.data[1] - 1.0) < 1e-6);
}

TEST_CASE("static y-first ordering is honored in the records") {
  Objective rosen = builtin("rosenbrock");
  RunConfig cfg;
  cfg.method = Method::Coordinatewise;
  cfg.static_order = {1, 0};
  cfg.max_iterations = 50000;

  Trajectory traj = run(rosen, v2(0.55134554, 0.75134554), cfg);
  CHECK(traj.status == Status::ConvergedGradTol);
  for (std::size_t n = 0; n + 1 < traj.records.size(); ++n)
    CHECK(traj.records[n].order == std::vector<std::size_t>{1, 0});
}
