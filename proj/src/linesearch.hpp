#pragma once

#include <vector>

#include "core.hpp"
#include "objectives.hpp"

namespace cwgd {

// f(z - delta*grad) - f(z) <= -alpha*delta*||grad||^2, evaluated in 64-bit
// arithmetic with exact <= and no slack. Throws NonFiniteValue if the trial
// value is NaN or infinite.
bool armijo_holds(const Objective& obj, const BlockVector& z,
                  const BlockGradient& g, double delta, double alpha);

// Per-block variant with the bound -alpha * sum_i rate_i*||g_i||^2; the trial
// point is assembled blockwise. With all rates equal this gives the same
// verdict as armijo_holds (single code path).
bool cw_armijo_holds(const Objective& obj, const BlockVector& z,
                     const BlockGradient& g, const std::vector<double>& rates,
                     double alpha);

struct BaseRate {
  double delta;
  int grid_index;
};

// Largest candidate beta^n*delta0 below the cap satisfying the Armijo
// inequality. base_alpha=false drops the alpha factor from the bound.
BaseRate base_backtracking(const Objective& obj, const BlockVector& z,
                           const BlockGradient& g, const HyperParams& hp,
                           double cap = kNoCap, bool base_alpha = true);

// Sequential per-block construction: the base rate floors every block, then
// each block in `order` scans the grid from the top with earlier blocks at
// their chosen rates and later blocks at base.
LearningRates cw_backtracking(const Objective& obj, const BlockVector& z,
                              const BlockGradient& g, const HyperParams& hp,
                              const std::vector<std::size_t>& order,
                              double cap = kNoCap, bool base_alpha = true);

// Secant estimate of each block's local gradient Lipschitz constant; blocks
// sorted stably by estimate descending over the fallback permutation. Blocks
// without a usable estimate (displacement <= 1e-12, or no previous iterate)
// keep their fallback relative order.
std::vector<std::size_t> ordering_heuristic(const BlockVector* prev_z,
                                            const BlockGradient* prev_g,
                                            const BlockVector& curr_z,
                                            const BlockGradient& curr_g,
                                            const std::vector<std::size_t>& fallback);

}  // namespace cwgd
