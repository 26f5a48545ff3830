#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smoothlm/corpus.hpp"
#include "smoothlm/lambda_training.hpp"
#include "smoothlm/model.hpp"
#include "smoothlm/powell.hpp"

namespace smoothlm {

using ParamMap = std::map<std::string, double>;

// "a=1;b=2" with keys in sorted order and values printed with %.9g.
std::string format_params(const ParamMap& params);
// Accepts ',' or ';' separated name=value pairs.
ParamMap parse_params(std::string_view text);

struct TrainingData {
  TablePtr table;
  const EncodedCorpus* dev1 = nullptr;  // lambda training for held-out methods
  const EncodedCorpus* dev2 = nullptr;  // objective for parameter search
};

struct ParameterSpec {
  std::string name;
  Bound bound;
  double initial = 0.0;
  bool integer = false;
  std::vector<double> grid;  // candidate values of integer parameters
};

// Tunable parameters of a method at the given order, with bounds and grids
// sized from the training data.
std::vector<ParameterSpec> method_parameters(Method method, const TrainingData& data);
// Throws ParameterError naming the valid parameters when `name` is not one.
void check_parameter_name(Method method, int order, const std::string& name);

// Log-spaced integers 1, 2, 3, 6, 10, 18, ... up to `max_value` (four per decade).
std::vector<double> log_integer_grid(double max_value);

struct BuildOptions {
  EmOptions em;
  double church_gale_budget = 1e8;
};

// Builds a model from explicit parameters; missing ones take their defaults.
ModelPtr build_model(Method method, const TrainingData& data, const ParamMap& params,
                     const BuildOptions& options = {});

struct FitOptions {
  bool optimize = true;
  ParamMap fixed;  // held constant during the search
  PowellOptions powell;
  BuildOptions build;
  int max_rounds = 4;  // alternations between integer grids and Powell
};

struct FittedModel {
  ModelPtr model;
  ParamMap params;
  double objective = 0.0;  // dev2 bits/word, NaN when not searched
  int evaluations = 0;
};

// Continuous parameters are searched with Powell's method on dev2 entropy;
// integer parameters by coordinate-wise scans over their grids, alternating
// with the Powell search until neither improves.
FittedModel fit_model(Method method, const TrainingData& data, const FitOptions& options = {});

// Entropy of `data.dev2` under the model built with `params`.
double dev_objective(Method method, const TrainingData& data, const ParamMap& params,
                     const BuildOptions& options = {});

}  // namespace smoothlm
