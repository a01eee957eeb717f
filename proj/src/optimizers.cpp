#include "optimizers.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace cwgd {

const char* status_name(Status s) {
  switch (s) {
    case Status::ConvergedGradTol: return "ConvergedGradTol";
    case Status::MaxIterations: return "MaxIterations";
    case Status::DivergedValue: return "DivergedValue";
    case Status::DivergedNorm: return "DivergedNorm";
    case Status::NumericalOverflow: return "NumericalOverflow";
    case Status::CycleDetected: return "CycleDetected";
    case Status::ExhaustedGrid: return "ExhaustedGrid";
  }
  return "Unknown";
}

void RunConfig::validate(std::size_t blocks) const {
  hp.validate();
  if (standard_rate && !(*standard_rate > 0.0))
    throw Error(ErrorCode::InvalidParameter, "standard rate must be positive");
  if (max_iterations < 1)
    throw Error(ErrorCode::InvalidParameter, "max_iterations must be positive");
  if (!(grad_tolerance > 0.0))
    throw Error(ErrorCode::InvalidParameter, "grad_tolerance must be positive");
  if (!(divergence_norm_threshold > 0.0))
    throw Error(ErrorCode::InvalidParameter, "divergence norm threshold must be positive");
  if (cycle.enabled) {
    if (cycle.max_period < 2)
      throw Error(ErrorCode::InvalidParameter, "cycle max_period must be at least 2");
    if (!(cycle.tol > 0.0))
      throw Error(ErrorCode::InvalidParameter, "cycle tolerance must be positive");
  }
  if (!static_order.empty()) {
    if (static_order.size() != blocks)
      throw Error(ErrorCode::InvalidParameter, "order must list every block once");
    std::vector<bool> seen(blocks, false);
    for (std::size_t i : static_order) {
      if (i >= blocks || seen[i])
        throw Error(ErrorCode::InvalidParameter, "order must be a permutation of the blocks");
      seen[i] = true;
    }
  }
}

BlockVector step_standard(const Objective& obj, const BlockVector& z, double rate) {
  if (!(rate > 0.0))
    throw Error(ErrorCode::InvalidParameter, "rate must be positive");
  BlockGradient g = obj.gradient(z);
  BlockVector next = z;
  for (std::size_t j = 0; j < z.data.size(); ++j)
    next.data[j] = z.data[j] - rate * g.data[j];
  return next;
}

namespace {

double region_cap(const Objective& obj, const BlockVector& z, const BlockGradient& g,
                  RegionMode mode) {
  if (mode != RegionMode::FromObjective) return kNoCap;
  return cap_value(obj.region, z, g);
}

BlockVector apply_rates(const BlockVector& z, const BlockGradient& g,
                        const std::vector<double>& rates) {
  BlockVector next = z;
  const BlockPartition& p = z.partition;
  for (std::size_t i = 0; i < p.blocks(); ++i) {
    std::size_t off = p.offset(i);
    for (std::size_t j = 0; j < p.dims[i]; ++j)
      next.data[off + j] = z.data[off + j] - rates[i] * g.data[off + j];
  }
  return next;
}

}  // namespace

BacktrackingStep step_backtracking(const Objective& obj, const BlockVector& z,
                                   const BlockGradient& g, const HyperParams& hp,
                                   RegionMode region_mode, bool base_alpha) {
  BaseRate base =
      base_backtracking(obj, z, g, hp, region_cap(obj, z, g, region_mode), base_alpha);
  std::vector<double> rates(z.partition.blocks(), base.delta);
  return {apply_rates(z, g, rates), base.delta, base.grid_index};
}

CwStep step_cw(const Objective& obj, const BlockVector& z, const BlockGradient& g,
               const HyperParams& hp, const std::vector<std::size_t>& order,
               RegionMode region_mode, bool base_alpha) {
  LearningRates lr = cw_backtracking(obj, z, g, hp, order,
                                     region_cap(obj, z, g, region_mode), base_alpha);
  return {apply_rates(z, g, lr.per_block), lr, order};
}

Trajectory run(const Objective& obj, const BlockVector& z0, const RunConfig& config) {
  std::size_t k = obj.partition.blocks();
  config.validate(k);
  if (z0.partition != obj.partition)
    throw Error(ErrorCode::DimensionMismatch, "start point does not match objective");
  if (config.region_mode == RegionMode::FromObjective &&
      obj.region.kind != ExclusionRegion::Kind::None &&
      obj.region.distance(z0) == 0.0)
    throw Error(ErrorCode::RegionViolation, "start point lies in the excluded set");

  auto t0 = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.config = config;
  traj.partition = obj.partition;

  std::vector<std::size_t> fallback = config.static_order;
  if (fallback.empty()) {
    fallback.resize(k);
    std::iota(fallback.begin(), fallback.end(), std::size_t{0});
  }

  BlockVector z = z0;
  std::optional<BlockVector> prev_z;
  std::optional<BlockGradient> prev_g;
  int confirmed_period = 0;  // period seen at the previous iterate, 0 if none

  for (;;) {
    BlockGradient g = obj.gradient(z);
    double f = obj.value(z);
    double gn = std::sqrt(squared_norm(g));
    traj.records.push_back({z, f, gn, std::nullopt, {}});
    std::size_t n = traj.records.size() - 1;

    if (!z.finite() || !std::isfinite(f) || !std::isfinite(gn)) {
      traj.status = Status::NumericalOverflow;
      break;
    }
    if (gn < config.grad_tolerance) {
      traj.status = Status::ConvergedGradTol;
      break;
    }
    if (f < config.divergence_value_threshold) {
      traj.status = Status::DivergedValue;
      break;
    }
    if (z.norm() > config.divergence_norm_threshold) {
      traj.status = Status::DivergedNorm;
      break;
    }
    if (config.cycle.enabled) {
      int found = 0;
      double scale = std::fmax(1.0, z.norm());
      for (int p = 1; p <= config.cycle.max_period && static_cast<std::size_t>(p) <= n;
           ++p) {
        const BlockVector& old = traj.records[n - p].z;
        double d = 0.0;
        for (std::size_t j = 0; j < z.data.size(); ++j) {
          double t = z.data[j] - old.data[j];
          d += t * t;
        }
        if (std::sqrt(d) <= config.cycle.tol * scale) {
          found = p;
          break;
        }
      }
      if (found != 0 && found == confirmed_period) {
        traj.status = Status::CycleDetected;
        traj.cycle_period = found;
        break;
      }
      confirmed_period = found;
    }
    if (static_cast<int>(n) >= config.max_iterations) {
      traj.status = Status::MaxIterations;
      break;
    }

    BlockVector next;
    try {
      switch (config.method) {
        case Method::Standard:
          next = apply_rates(z, g,
                             std::vector<double>(k, config.effective_standard_rate()));
          break;
        case Method::Backtracking: {
          BacktrackingStep s = step_backtracking(obj, z, g, config.hp,
                                                 config.region_mode, config.base_alpha);
          LearningRates lr;
          lr.base = s.rate;
          lr.base_index = s.grid_index;
          lr.per_block.assign(k, s.rate);
          lr.grid_indices.assign(k, s.grid_index);
          traj.records.back().rates = std::move(lr);
          next = std::move(s.next);
          break;
        }
        case Method::Coordinatewise: {
          std::vector<std::size_t> order = fallback;
          if (config.order_policy == OrderPolicy::LipschitzAdaptive)
            order = ordering_heuristic(prev_z ? &*prev_z : nullptr,
                                       prev_g ? &*prev_g : nullptr, z, g, fallback);
          CwStep s = step_cw(obj, z, g, config.hp, order, config.region_mode,
                             config.base_alpha);
          traj.records.back().rates = std::move(s.rates);
          traj.records.back().order = std::move(s.order);
          next = std::move(s.next);
          break;
        }
      }
    } catch (const Error& e) {
      if (e.code == ErrorCode::ExhaustedGrid) {
        traj.status = Status::ExhaustedGrid;
        break;
      }
      throw;
    }

    prev_z = std::move(z);
    prev_g = std::move(g);
    z = std::move(next);
  }

  traj.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

}  // namespace cwgd
