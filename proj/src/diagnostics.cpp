#include "diagnostics.hpp"

#include <cmath>

namespace cwgd {

DescentAudit descent_audit(const Trajectory& traj, const HyperParams& hp) {
  hp.validate();
  DescentAudit report;
  if (traj.records.size() < 2) return report;
  const BlockPartition& p = traj.partition;
  for (std::size_t n = 0; n + 1 < traj.records.size(); ++n) {
    const TrajectoryRecord& cur = traj.records[n];
    const TrajectoryRecord& nxt = traj.records[n + 1];
    if (!cur.rates)
      throw Error(ErrorCode::MissingRates, "record has no learning rates");
    double decrease = 0.0;
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      std::size_t off = p.offset(i);
      double sq = 0.0;
      for (std::size_t j = 0; j < p.dims[i]; ++j) {
        double d = cur.z.data[off + j] - nxt.z.data[off + j];
        sq += d * d;
      }
      decrease += sq / cur.rates->per_block[i];
    }
    double violation = nxt.f - cur.f + hp.alpha * decrease;
    report.violations.push_back(violation);
    if (report.worst_step < 0 || violation > report.max_violation) {
      report.max_violation = violation;
      report.worst_step = static_cast<std::ptrdiff_t>(n);
    }
  }
  return report;
}

DescentAudit descent_audit(const Trajectory& traj) {
  return descent_audit(traj, traj.config.hp);
}

bool critical_point_check(const Objective& obj, const BlockVector& z, double tol) {
  return std::sqrt(squared_norm(obj.gradient(z))) < tol;
}

const char* trend_class_name(TrendClass c) {
  switch (c) {
    case TrendClass::Vanishing: return "vanishing";
    case TrendClass::DivergingValue: return "diverging-value";
    case TrendClass::Neither: return "neither";
  }
  return "unknown";
}

StepNormTrend step_norm_trend(const Trajectory& traj) {
  if (traj.records.size() < 21)
    throw Error(ErrorCode::TooShort, "need at least 20 iterations");
  std::size_t nsteps = traj.records.size() - 1;
  std::size_t tail = std::max<std::size_t>(1, nsteps / 10);
  StepNormTrend out;
  for (std::size_t n = nsteps - tail; n < nsteps; ++n) {
    double sq = 0.0;
    const auto& a = traj.records[n].z.data;
    const auto& b = traj.records[n + 1].z.data;
    for (std::size_t j = 0; j < a.size(); ++j) {
      double d = b[j] - a[j];
      sq += d * d;
    }
    out.tail_max_step = std::fmax(out.tail_max_step, std::sqrt(sq));
  }
  if (traj.status == Status::DivergedValue) {
    out.classification = TrendClass::DivergingValue;
  } else if (out.tail_max_step <
             10.0 * traj.config.grad_tolerance * traj.config.hp.delta0) {
    out.classification = TrendClass::Vanishing;
  } else {
    out.classification = TrendClass::Neither;
  }
  return out;
}

double cluster_tail_diameter(const Trajectory& traj, std::size_t K) {
  if (K < 1 || K > traj.records.size())
    throw Error(ErrorCode::TooShort, "window exceeds recorded iterates");
  std::size_t first = traj.records.size() - K;
  double diam = 0.0;
  for (std::size_t a = first; a < traj.records.size(); ++a) {
    for (std::size_t b = a + 1; b < traj.records.size(); ++b) {
      double sq = 0.0;
      const auto& za = traj.records[a].z.data;
      const auto& zb = traj.records[b].z.data;
      for (std::size_t j = 0; j < za.size(); ++j) {
        double d = za[j] - zb[j];
        sq += d * d;
      }
      diam = std::fmax(diam, std::sqrt(sq));
    }
  }
  return diam;
}

GradCheck grad_check(const Objective& obj, const std::vector<BlockVector>& points,
                     double h, double tol) {
  GradCheck report;
  for (const BlockVector& z : points) {
    BlockGradient g = obj.gradient(z);
    BlockGradient fd = fd_gradient(obj, z, h);
    double diff_sq = 0.0;
    for (std::size_t j = 0; j < g.data.size(); ++j) {
      double d = fd.data[j] - g.data[j];
      diff_sq += d * d;
    }
    double rel = std::sqrt(diff_sq) / std::fmax(1.0, std::sqrt(squared_norm(g)));
    bool ok = rel <= tol;
    report.entries.push_back({z, rel, ok});
    report.max_rel_error = std::fmax(report.max_rel_error, rel);
    report.all_ok = report.all_ok && ok;
  }
  return report;
}

}  // namespace cwgd
