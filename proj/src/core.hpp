#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cwgd {

enum class ErrorCode {
  InvalidArgument,
  InvalidParameter,
  UnknownFunction,
  LexError,
  ParseError,
  ArityError,
  UnboundVariable,
  NonFinite,
  DimensionMismatch,
  RegionViolation,
  ZeroGradient,
  ZeroGradientWithCap,
  ExhaustedGrid,
  NonFiniteValue,
  MissingRates,
  TooShort,
};

const char* error_code_name(ErrorCode code);

struct Error : std::runtime_error {
  ErrorCode code;
  std::ptrdiff_t position;  // byte offset into source text, -1 when not applicable
  std::string expectation;

  Error(ErrorCode c, std::string message, std::ptrdiff_t pos = -1,
        std::string expect = {})
      : std::runtime_error(std::move(message)),
        code(c),
        position(pos),
        expectation(std::move(expect)) {}
};

struct BlockPartition {
  std::vector<std::size_t> dims;

  BlockPartition() = default;
  explicit BlockPartition(std::vector<std::size_t> d) : dims(std::move(d)) {
    validate();
  }
  static BlockPartition single(std::size_t m) {
    return BlockPartition(std::vector<std::size_t>{m});
  }

  void validate() const {
    if (dims.empty())
      throw Error(ErrorCode::InvalidArgument, "partition needs at least one block");
    for (std::size_t d : dims)
      if (d == 0)
        throw Error(ErrorCode::InvalidArgument, "block dimensions must be positive");
  }

  std::size_t blocks() const { return dims.size(); }
  std::size_t total() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{0});
  }
  std::size_t offset(std::size_t i) const {
    std::size_t off = 0;
    for (std::size_t j = 0; j < i; ++j) off += dims[j];
    return off;
  }
  bool operator==(const BlockPartition& o) const { return dims == o.dims; }
};

struct BlockVector {
  BlockPartition partition;
  std::vector<double> data;  // flat storage, block i at [offset(i), offset(i)+dims[i])

  BlockVector() = default;
  BlockVector(BlockPartition p, std::vector<double> values)
      : partition(std::move(p)), data(std::move(values)) {
    if (data.size() != partition.total())
      throw Error(ErrorCode::DimensionMismatch, "vector length does not match partition");
  }
  static BlockVector zeros(const BlockPartition& p) {
    return BlockVector(p, std::vector<double>(p.total(), 0.0));
  }

  double* block(std::size_t i) { return data.data() + partition.offset(i); }
  const double* block(std::size_t i) const { return data.data() + partition.offset(i); }
  std::size_t block_dim(std::size_t i) const { return partition.dims[i]; }

  double norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
  }
  bool finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
  bool operator==(const BlockVector& o) const {
    return partition == o.partition && data == o.data;
  }
};

// Same shape rules as BlockVector; holds (d_1 f, ..., d_k f).
using BlockGradient = BlockVector;

double squared_norm(const BlockGradient& g);
double block_squared_norm(const BlockGradient& g, std::size_t i);

struct HyperParams {
  double alpha = 0.5;
  double beta = 0.5;
  double delta0 = 2.0;
  int max_grid_depth = 200;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0))
      throw Error(ErrorCode::InvalidParameter, "beta must lie in (0,1)");
    if (!(delta0 > 0.0))
      throw Error(ErrorCode::InvalidParameter, "delta0 must be positive");
    if (max_grid_depth < 1)
      throw Error(ErrorCode::InvalidParameter, "max_grid_depth must be positive");
  }
};

// Candidate step beta^n * delta0. Computed by repeated multiplication so that
// candidate(hp, n+1) == beta * candidate(hp, n) bit-exactly, matching the
// running product the backtracking scans maintain.
double candidate(const HyperParams& hp, int n);

inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

struct ExclusionRegion {
  enum class Kind { None, CoordinateHyperplane, Custom };

  Kind kind = Kind::None;
  std::size_t coordinate = 0;  // flat index, for CoordinateHyperplane
  std::function<double(const BlockVector&)> custom_distance;

  static ExclusionRegion none() { return ExclusionRegion{}; }
  static ExclusionRegion coordinate_hyperplane(std::size_t flat_index) {
    ExclusionRegion r;
    r.kind = Kind::CoordinateHyperplane;
    r.coordinate = flat_index;
    return r;
  }
  static ExclusionRegion custom(std::function<double(const BlockVector&)> dist) {
    ExclusionRegion r;
    r.kind = Kind::Custom;
    r.custom_distance = std::move(dist);
    return r;
  }

  double distance(const BlockVector& z) const {
    switch (kind) {
      case Kind::None:
        return kNoCap;
      case Kind::CoordinateHyperplane:
        if (coordinate >= z.data.size())
          throw Error(ErrorCode::DimensionMismatch, "region coordinate out of range");
        return std::fabs(z.data[coordinate]);
      case Kind::Custom:
        return custom_distance(z);
    }
    return kNoCap;
  }
};

struct LearningRates {
  double base = 0.0;
  int base_index = 0;
  std::vector<double> per_block;
  std::vector<int> grid_indices;
};

// r(z)/||grad f(z)|| for a nontrivial region; infinity when kind is None so the
// cap never binds.
double cap_value(const ExclusionRegion& region, const BlockVector& z,
                 const BlockGradient& g);

}  // namespace cwgd
