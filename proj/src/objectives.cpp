#include "objectives.hpp"

#include <cmath>

namespace cwgd {

namespace {

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double cube_sin_value(double x) {
  if (x == 0.0) return 0.0;
  return x * x * x * std::sin(1.0 / x);
}

// 3x^2 sin(1/x) - x cos(1/x), extended by 0 at x = 0; the extension keeps the
// function C^1.
double cube_sin_deriv(double x) {
  if (x == 0.0) return 0.0;
  return 3.0 * x * x * std::sin(1.0 / x) - x * std::cos(1.0 / x);
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : params) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw Error(ErrorCode::InvalidParameter, "unknown parameter '" + key + "'");
  }
}

BlockVector sub_vector(const BlockVector& z, std::size_t i) {
  const double* b = z.block(i);
  return BlockVector(BlockPartition::single(z.block_dim(i)),
                     std::vector<double>(b, b + z.block_dim(i)));
}

}  // namespace

Objective builtin(const std::string& name,
                  const std::map<std::string, double>& params) {
  BlockPartition two(std::vector<std::size_t>{1, 1});

  if (name == "abs_plus_linear" || name == "relu_plus_linear") {
    reject_unknown(params, {"a"});
    double a = param_or(params, "a", 2.0);
    if (!(a > 0.0))
      throw Error(ErrorCode::InvalidParameter, "parameter a must be positive");
    Objective obj;
    obj.name = name;
    obj.partition = two;
    bool relu = (name == "relu_plus_linear");
    obj.value = [a, relu](const BlockVector& z) {
      double x = z.data[0], y = z.data[1];
      return relu ? a * std::fmax(x, 0.0) + y : a * std::fabs(x) + y;
    };
    obj.gradient = [a, relu, two](const BlockVector& z) {
      double x = z.data[0];
      double gx = relu ? (x > 0.0 ? a : 0.0) : a * sign0(x);
      return BlockGradient(two, {gx, 1.0});
    };
    if (!relu) obj.region = ExclusionRegion::coordinate_hyperplane(0);
    obj.notes = relu ? "kinked at x=0; unbounded below along y"
                     : "kinked at x=0 (distance oracle available); unbounded below along y";
    return obj;
  }

  if (name == "cube_sin_1d") {
    reject_unknown(params, {});
    Objective obj;
    obj.name = name;
    obj.partition = BlockPartition::single(1);
    obj.value = [](const BlockVector& z) { return cube_sin_value(z.data[0]); };
    obj.gradient = [](const BlockVector& z) {
      return BlockGradient(BlockPartition::single(1), {cube_sin_deriv(z.data[0])});
    };
    obj.notes = "C^1 via the 0 extension; critical points accumulate at 0";
    return obj;
  }

  if (name == "cube_sin_2d") {
    reject_unknown(params, {});
    Objective obj;
    obj.name = name;
    obj.partition = two;
    obj.value = [](const BlockVector& z) {
      return cube_sin_value(z.data[0]) + cube_sin_value(z.data[1]);
    };
    obj.gradient = [two](const BlockVector& z) {
      return BlockGradient(two, {cube_sin_deriv(z.data[0]), cube_sin_deriv(z.data[1])});
    };
    obj.notes = "separable sum of cube_sin_1d in x and y";
    return obj;
  }

  if (name == "rosenbrock") {
    reject_unknown(params, {});
    Objective obj;
    obj.name = name;
    obj.partition = two;
    obj.value = [](const BlockVector& z) {
      double x = z.data[0], y = z.data[1];
      double t = x - 1.0;
      double u = y - x * x;
      return t * t + 100.0 * (u * u);
    };
    obj.gradient = [two](const BlockVector& z) {
      double x = z.data[0], y = z.data[1];
      double u = y - x * x;
      return BlockGradient(two, {2.0 * (x - 1.0) - 400.0 * x * u, 200.0 * u});
    };
    obj.known_minimizer = std::vector<double>{1.0, 1.0};
    obj.notes = "curved valley; unique critical point (1,1)";
    return obj;
  }

  if (name == "quadratic" || name == "separable")
    throw Error(ErrorCode::InvalidParameter,
                name + " takes structured parameters; use its dedicated constructor");

  throw Error(ErrorCode::UnknownFunction, "unknown objective '" + name + "'");
}

Objective quadratic(const std::vector<std::size_t>& dims,
                    const std::vector<double>& c) {
  if (dims.size() != c.size())
    throw Error(ErrorCode::InvalidParameter, "quadratic needs one scale per block");
  for (double ci : c)
    if (!(ci > 0.0))
      throw Error(ErrorCode::InvalidParameter, "quadratic scales must be positive");
  BlockPartition p(dims);
  Objective obj;
  obj.name = "quadratic";
  obj.partition = p;
  std::vector<double> scales = c;
  obj.value = [p, scales](const BlockVector& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.blocks(); ++i)
      s += scales[i] * block_squared_norm(z, i) * 0.5;
    return s;
  };
  obj.gradient = [p, scales](const BlockVector& z) {
    BlockGradient g = BlockGradient::zeros(p);
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      const double* zb = z.block(i);
      double* gb = g.block(i);
      for (std::size_t j = 0; j < p.dims[i]; ++j) gb[j] = scales[i] * zb[j];
    }
    return g;
  };
  obj.known_minimizer = std::vector<double>(p.total(), 0.0);
  obj.notes = "test plumbing; minimum 0 at the origin";
  return obj;
}

Objective separable(const std::vector<Objective>& parts) {
  if (parts.empty())
    throw Error(ErrorCode::InvalidParameter, "separable needs at least one part");
  std::vector<std::size_t> dims;
  for (const auto& part : parts) {
    if (part.partition.blocks() != 1)
      throw Error(ErrorCode::InvalidParameter, "separable parts must be single-block");
    dims.push_back(part.partition.dims[0]);
  }
  BlockPartition p(dims);
  std::vector<Objective> owned = parts;
  Objective obj;
  obj.name = "separable";
  obj.partition = p;
  obj.value = [p, owned](const BlockVector& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.blocks(); ++i) s += owned[i].value(sub_vector(z, i));
    return s;
  };
  obj.gradient = [p, owned](const BlockVector& z) {
    BlockGradient g = BlockGradient::zeros(p);
    for (std::size_t i = 0; i < p.blocks(); ++i) {
      BlockGradient gi = owned[i].gradient(sub_vector(z, i));
      double* gb = g.block(i);
      for (std::size_t j = 0; j < p.dims[i]; ++j) gb[j] = gi.data[j];
    }
    return g;
  };
  obj.notes = "sum of independent per-block objectives";
  return obj;
}

BlockGradient fd_gradient(const Objective& obj, const BlockVector& z, double h) {
  if (!(h > 0.0))
    throw Error(ErrorCode::InvalidParameter, "fd step must be positive");
  if (z.partition != obj.partition)
    throw Error(ErrorCode::DimensionMismatch, "point does not match objective partition");
  BlockGradient g = BlockGradient::zeros(obj.partition);
  BlockVector probe = z;
  for (std::size_t j = 0; j < z.data.size(); ++j) {
    double zj = z.data[j];
    double fp, fm;
    probe.data[j] = zj + h;
    if (obj.region.kind != ExclusionRegion::Kind::None &&
        obj.region.distance(probe) == 0.0)
      throw Error(ErrorCode::RegionViolation, "finite-difference probe hit the excluded set");
    fp = obj.value(probe);
    probe.data[j] = zj - h;
    if (obj.region.kind != ExclusionRegion::Kind::None &&
        obj.region.distance(probe) == 0.0)
      throw Error(ErrorCode::RegionViolation, "finite-difference probe hit the excluded set");
    fm = obj.value(probe);
    probe.data[j] = zj;
    g.data[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::vector<BuiltinInfo> builtin_catalog() {
  return {
      {"abs_plus_linear", "abs_plus_linear(a)", "[1,1]",
       "a>0, default 2; none (unbounded below); kink at x=0"},
      {"relu_plus_linear", "relu_plus_linear(a)", "[1,1]",
       "a>0, default 2; none (unbounded below); kink at x=0"},
      {"cube_sin_1d", "cube_sin_1d()", "[1]",
       "local minima accumulate near 0; f(0)=0"},
      {"cube_sin_2d", "cube_sin_2d()", "[1,1]",
       "local minima accumulate near (0,0)"},
      {"rosenbrock", "rosenbrock()", "[1,1]", "global minimum f=0 at (1,1)"},
      {"quadratic", "quadratic(c_1..c_k)", "one block per scale",
       "minimum 0 at the origin"},
      {"separable", "separable(g_1..g_k)", "concatenated parts",
       "depends on the parts"},
  };
}

}  // namespace cwgd
