#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

namespace smoothlm {

// Box constraint for one parameter. Finite bounds are enforced through a
// sigmoid reparameterization; with log_scale the sigmoid acts on log(x).
struct Bound {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool log_scale = false;

  static Bound unbounded() { return {}; }
  bool finite() const;
  double to_internal(double x) const;
  double to_external(double z) const;
};

struct PowellOptions {
  double tolerance = 1e-4;  // relative decrease over one full cycle
  int max_cycles = 100;
  double line_tolerance = 1e-7;
  std::ostream* trace = nullptr;  // CSV "cycle,param_vector,objective"
};

struct OptimizerResult {
  std::vector<double> params;
  double value = 0.0;
  int iterations = 0;  // direction-set cycles
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Brent's line minimization on a bracket; returns {x, f(x)}.
std::pair<double, double> brent_minimize(const std::function<double(double)>& f, double a,
                                         double b, double c, double tolerance,
                                         int max_iterations = 200);

// Powell's direction-set method with Brent line searches. Never returns a
// point worse than the start. Throws std::domain_error naming the parameter
// vector if the objective is not finite.
OptimizerResult powell_minimize(const Objective& objective, std::vector<double> start,
                                const std::vector<Bound>& bounds,
                                const PowellOptions& options = {});

}  // namespace smoothlm
