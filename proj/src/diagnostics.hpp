#pragma once

#include <cstddef>
#include <vector>

#include "core.hpp"
#include "objectives.hpp"
#include "optimizers.hpp"

namespace cwgd {

// Per-step check that each recorded step satisfied its acceptance bound.
// Both sides are rebuilt from stored iterates: the block gradient at z_n is
// recovered from (z_n - z_{n+1})_i / delta_i, so no objective is needed.
// violation = f(z_{n+1}) - f(z_n) + alpha * sum_i ||dz_i||^2 / delta_i,
// nonpositive up to rounding for any honestly produced trajectory.
struct DescentAudit {
  std::vector<double> violations;  // one per step
  double max_violation = 0.0;      // 0 when there are no steps
  std::ptrdiff_t worst_step = -1;
};

DescentAudit descent_audit(const Trajectory& traj, const HyperParams& hp);

// Overload using the hyperparameters the trajectory was produced with.
DescentAudit descent_audit(const Trajectory& traj);

bool critical_point_check(const Objective& obj, const BlockVector& z, double tol);

enum class TrendClass { Vanishing, DivergingValue, Neither };

const char* trend_class_name(TrendClass c);

struct StepNormTrend {
  double tail_max_step = 0.0;  // max step norm over the final 10% of steps
  TrendClass classification = TrendClass::Neither;
};

// Requires at least 20 iterations (throws TooShort). A run that ended by
// value divergence classifies as DivergingValue; otherwise Vanishing when
// the tail max is below 10 * grad_tolerance * delta0, else Neither.
StepNormTrend step_norm_trend(const Trajectory& traj);

// Max pairwise distance among the last K recorded iterates.
// Throws TooShort unless 1 <= K <= number of records.
double cluster_tail_diameter(const Trajectory& traj, std::size_t K);

struct GradCheck {
  struct Entry {
    BlockVector z;
    double rel_error;
    bool ok;
  };
  std::vector<Entry> entries;
  double max_rel_error = 0.0;
  bool all_ok = true;
};

// Compares analytic gradients against central differences with spacing h.
// rel_error = ||fd - g|| / max(1, ||g||); an entry fails when it exceeds tol.
GradCheck grad_check(const Objective& obj, const std::vector<BlockVector>& points,
                     double h, double tol);

}  // namespace cwgd
