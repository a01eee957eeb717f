#include "core.hpp"

namespace cwgd {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RegionViolation: return "RegionViolation";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::ZeroGradientWithCap: return "ZeroGradientWithCap";
    case ErrorCode::ExhaustedGrid: return "ExhaustedGrid";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MissingRates: return "MissingRates";
    case ErrorCode::TooShort: return "TooShort";
  }
  return "Unknown";
}

double block_squared_norm(const BlockGradient& g, std::size_t i) {
  const double* b = g.block(i);
  double s = 0.0;
  for (std::size_t j = 0; j < g.block_dim(i); ++j) s += b[j] * b[j];
  return s;
}

double squared_norm(const BlockGradient& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.partition.blocks(); ++i)
    s += block_squared_norm(g, i);
  return s;
}

double candidate(const HyperParams& hp, int n) {
  if (n < 0 || n > hp.max_grid_depth)
    throw Error(ErrorCode::InvalidArgument, "candidate index outside grid");
  double c = hp.delta0;
  for (int i = 0; i < n; ++i) c *= hp.beta;
  return c;
}

double cap_value(const ExclusionRegion& region, const BlockVector& z,
                 const BlockGradient& g) {
  if (region.kind == ExclusionRegion::Kind::None) return kNoCap;
  double sq = squared_norm(g);
  if (sq == 0.0)
    throw Error(ErrorCode::ZeroGradientWithCap,
                "cap undefined at a critical point; treat z as critical first");
  return region.distance(z) / std::sqrt(sq);
}

}  // namespace cwgd
