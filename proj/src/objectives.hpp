#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace cwgd {

struct Objective {
  std::string name;
  BlockPartition partition;
  std::function<double(const BlockVector&)> value;
  std::function<BlockGradient(const BlockVector&)> gradient;
  ExclusionRegion region;  // kind None when the function has no excluded set
  std::string notes;
  std::optional<std::vector<double>> known_minimizer;
};

// Named test functions. Recognized names: abs_plus_linear(a), relu_plus_linear(a),
// cube_sin_1d, cube_sin_2d, rosenbrock. quadratic and separable are built through
// the dedicated constructors below because they need structured parameters.
Objective builtin(const std::string& name,
                  const std::map<std::string, double>& params = {});

// f(z) = sum_i c_i * ||z_i||^2 / 2 over the given block dimensions.
Objective quadratic(const std::vector<std::size_t>& dims,
                    const std::vector<double>& c);

// f(z) = sum_i g_i(z_i); each part must be single-block.
Objective separable(const std::vector<Objective>& parts);

// Central differences (f(z + h e_j) - f(z - h e_j)) / (2h), reassembled into
// the objective's partition.
BlockGradient fd_gradient(const Objective& obj, const BlockVector& z, double h);

struct BuiltinInfo {
  std::string name;
  std::string signature;
  std::string partition;
  std::string minima;
};
std::vector<BuiltinInfo> builtin_catalog();

}  // namespace cwgd
