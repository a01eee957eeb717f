#pragma once

#include <optional>
#include <vector>

#include "core.hpp"
#include "linesearch.hpp"
#include "objectives.hpp"

namespace cwgd {

enum class Method { Standard, Backtracking, Coordinatewise };
enum class OrderPolicy { Static, LipschitzAdaptive };
enum class RegionMode { None, FromObjective };

enum class Status {
  ConvergedGradTol,
  MaxIterations,
  DivergedValue,
  DivergedNorm,
  NumericalOverflow,
  CycleDetected,
  ExhaustedGrid,
};

const char* status_name(Status s);

struct CycleDetection {
  bool enabled = false;
  int max_period = 2;
  double tol = 1e-9;
};

struct RunConfig {
  Method method = Method::Backtracking;
  HyperParams hp{};
  // Constant rate for the standard method; defaults to delta0 when unset.
  std::optional<double> standard_rate;
  OrderPolicy order_policy = OrderPolicy::Static;
  std::vector<std::size_t> static_order;  // empty means identity; also the adaptive fallback
  int max_iterations = 100000;
  double grad_tolerance = 1e-8;
  double divergence_value_threshold = -1e8;
  double divergence_norm_threshold = 1e8;
  CycleDetection cycle{};
  RegionMode region_mode = RegionMode::None;
  bool base_alpha = true;

  double effective_standard_rate() const {
    return standard_rate.value_or(hp.delta0);
  }
  void validate(std::size_t blocks) const;
};

struct TrajectoryRecord {
  BlockVector z;
  double f = 0.0;
  double grad_norm = 0.0;
  // Rates used for the step taken FROM this iterate; absent on the final
  // record and on standard-method records.
  std::optional<LearningRates> rates;
  std::vector<std::size_t> order;  // construction order used for that step
};

struct Trajectory {
  RunConfig config;
  BlockPartition partition;
  std::vector<TrajectoryRecord> records;
  Status status = Status::MaxIterations;
  int cycle_period = 0;
  double wall_seconds = 0.0;

  int iterations() const { return static_cast<int>(records.size()) - 1; }
};

BlockVector step_standard(const Objective& obj, const BlockVector& z, double rate);

struct BacktrackingStep {
  BlockVector next;
  double rate;
  int grid_index;
};
BacktrackingStep step_backtracking(const Objective& obj, const BlockVector& z,
                                   const BlockGradient& g, const HyperParams& hp,
                                   RegionMode region_mode, bool base_alpha);

struct CwStep {
  BlockVector next;
  LearningRates rates;
  std::vector<std::size_t> order;
};
CwStep step_cw(const Objective& obj, const BlockVector& z, const BlockGradient& g,
               const HyperParams& hp, const std::vector<std::size_t>& order,
               RegionMode region_mode, bool base_alpha);

Trajectory run(const Objective& obj, const BlockVector& z0, const RunConfig& config);

}  // namespace cwgd
