#include "smoothlm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "smoothlm/additive.hpp"
#include "smoothlm/church_gale.hpp"
#include "smoothlm/evaluation.hpp"
#include "smoothlm/katz.hpp"
#include "smoothlm/one_count.hpp"

namespace smoothlm {

namespace {

constexpr double kLambdaEdge = 1e-6;
const std::vector<double> kKatzGrid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 13, 16, 20};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double nearest_in_grid(const std::vector<double>& grid, double value) {
  double best = grid.front();
  for (double g : grid) {
    if (std::fabs(std::log(g) - std::log(value)) < std::fabs(std::log(best) - std::log(value))) best = g;
  }
  return best;
}

double param_or(const ParamMap& params, const std::string& name, double fallback) {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

Count integer_param(const ParamMap& params, const std::string& name, double fallback) {
  const double v = param_or(params, name, fallback);
  if (!std::isfinite(v) || v < 1.0 || v != std::floor(v)) {
    throw ParameterError(name + " must be a positive integer");
  }
  return static_cast<Count>(v);
}

const EncodedCorpus& require(const EncodedCorpus* corpus, const char* what) {
  if (corpus == nullptr) throw DataError(std::string("missing ") + what + " segment");
  return *corpus;
}

// Names in the order method_parameters lists them; used for validation
// without needing training data.
std::vector<std::string> parameter_names(Method method, int order) {
  std::vector<std::string> names;
  switch (method) {
    case Method::ML:
    case Method::PlusOne:
      break;
    case Method::PlusDelta:
      names = {"delta"};
      break;
    case Method::InterpBaseline:
      for (int k = 1; k <= order; ++k) names.push_back("lambda" + std::to_string(k));
      break;
    case Method::InterpHeldOut:
    case Method::InterpDelInt:
    case Method::NewAvgCount:
    case Method::ChurchGale:
      names = {"cmin"};
      break;
    case Method::Katz:
      names = {"delta"};
      for (int k = 2; k <= order; ++k) names.push_back("k" + std::to_string(k));
      break;
    case Method::NewOneCount:
      for (int k = 1; k <= order; ++k) {
        names.push_back("beta" + std::to_string(k));
        names.push_back("gamma" + std::to_string(k));
      }
      break;
  }
  return names;
}

}  // namespace

std::string format_params(const ParamMap& params) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : params) {
    std::snprintf(buf, sizeof buf, "%.9g", value);
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += buf;
  }
  return out;
}

ParamMap parse_params(std::string_view text) {
  ParamMap out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find_first_of(",;", pos);
    const std::string item = trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParameterError("expected name=value, got '" + item + "'");
      }
      const std::string name = trim(std::string_view(item).substr(0, eq));
      const std::string value = trim(std::string_view(item).substr(eq + 1));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) {
        throw ParameterError("parameter " + name + " has non-numeric value '" + value + "'");
      }
      out[name] = v;
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::vector<double> log_integer_grid(double max_value) {
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = std::round(std::pow(10.0, i / 4.0));
    if (v > max_value && !grid.empty()) break;
    if (grid.empty() || v != grid.back()) grid.push_back(v);
    if (v >= max_value) break;
  }
  return grid;
}

void check_parameter_name(Method method, int order, const std::string& name) {
  const auto names = parameter_names(method, order);
  if (std::find(names.begin(), names.end(), name) != names.end()) return;
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw ParameterError("unknown parameter '" + name + "' for " + std::string(method_name(method)) +
                       " (valid: " + (valid.empty() ? "none" : valid) + ")");
}

std::vector<ParameterSpec> method_parameters(Method method, const TrainingData& data) {
  const int order = data.table->order();
  std::vector<ParameterSpec> specs;
  const Bound positive_log{0.0, std::numeric_limits<double>::infinity(), true};
  switch (method) {
    case Method::ML:
    case Method::PlusOne:
      break;
    case Method::PlusDelta:
      specs.push_back({"delta", positive_log, 1.0, false, {}});
      break;
    case Method::InterpBaseline:
      for (int k = 1; k <= order; ++k) {
        specs.push_back({"lambda" + std::to_string(k), Bound{kLambdaEdge, 1.0 - kLambdaEdge, false},
                         0.5, false, {}});
      }
      break;
    case Method::InterpHeldOut:
    case Method::NewAvgCount: {
      const double mass = data.dev1 ? static_cast<double>(data.dev1->word_count) : 1e4;
      auto grid = log_integer_grid(std::max(1.0, mass));
      specs.push_back({"cmin", Bound{1.0, mass, true}, nearest_in_grid(grid, 100.0), true, grid});
      break;
    }
    case Method::InterpDelInt: {
      const double mass = static_cast<double>(std::max<Count>(1, data.table->total_words()));
      auto grid = log_integer_grid(mass);
      specs.push_back({"cmin", Bound{1.0, mass, true}, nearest_in_grid(grid, 1000.0), true, grid});
      break;
    }
    case Method::ChurchGale: {
      const double grams = static_cast<double>(std::max<std::size_t>(1, data.table->num_grams(2)));
      auto grid = log_integer_grid(grams);
      specs.push_back({"cmin", Bound{1.0, grams, true}, nearest_in_grid(grid, 100.0), true, grid});
      break;
    }
    case Method::Katz:
      specs.push_back({"delta", positive_log, 1.0, false, {}});
      for (int k = 2; k <= order; ++k) {
        specs.push_back({"k" + std::to_string(k), Bound{1.0, 20.0, false}, 5.0, true, kKatzGrid});
      }
      break;
    case Method::NewOneCount:
      for (int k = 1; k <= order; ++k) {
        specs.push_back({"beta" + std::to_string(k), positive_log, 1.0, false, {}});
        specs.push_back({"gamma" + std::to_string(k), positive_log, 1.0, false, {}});
      }
      break;
  }
  return specs;
}

ModelPtr build_model(Method method, const TrainingData& data, const ParamMap& params,
                     const BuildOptions& options) {
  const TablePtr& table = data.table;
  const int order = table->order();
  for (const auto& [name, value] : params) {
    check_parameter_name(method, order, name);
    if (!std::isfinite(value)) throw ParameterError(name + " is not finite");
  }
  ParamMap p;
  for (const auto& spec : method_parameters(method, data)) p[spec.name] = spec.initial;
  for (const auto& [name, value] : params) p[name] = value;

  switch (method) {
    case Method::ML:
      return std::make_shared<MaximumLikelihoodModel>(table);
    case Method::PlusOne:
      return std::make_shared<AdditiveModel>(table, 1.0);
    case Method::PlusDelta:
      return std::make_shared<AdditiveModel>(table, p.at("delta"));
    case Method::InterpBaseline: {
      std::vector<BucketMap> maps;
      for (int k = 1; k <= order; ++k) {
        const double l = p.at("lambda" + std::to_string(k));
        if (!(l >= 0.0 && l <= 1.0)) throw ParameterError("lambda" + std::to_string(k) + " outside [0, 1]");
        maps.push_back(BucketMap::single(l));
      }
      return std::make_shared<InterpolatedModel>(table, std::move(maps));
    }
    case Method::InterpHeldOut:
    case Method::NewAvgCount: {
      const auto scheme = method == Method::InterpHeldOut ? BucketScheme::ContextCount
                                                          : BucketScheme::AverageCount;
      const double cmin = static_cast<double>(integer_param(p, "cmin", 1));
      return train_heldout_interpolation(table, scheme, cmin, require(data.dev1, "dev1"), options.em).model;
    }
    case Method::InterpDelInt: {
      const double cmin = static_cast<double>(integer_param(p, "cmin", 1));
      return train_deleted_interpolation(table, BucketScheme::ContextCount, cmin, options.em).model;
    }
    case Method::Katz: {
      KatzParams kp;
      kp.delta = p.at("delta");
      for (int k = 2; k <= order; ++k) {
        kp.k[static_cast<std::size_t>(k)] = static_cast<int>(integer_param(p, "k" + std::to_string(k), 5));
      }
      return std::make_shared<KatzModel>(table, kp);
    }
    case Method::ChurchGale:
      return std::make_shared<ChurchGaleModel>(table, integer_param(p, "cmin", 1),
                                               options.church_gale_budget);
    case Method::NewOneCount: {
      OneCountParams op;
      for (int k = 1; k <= order; ++k) {
        op.beta[static_cast<std::size_t>(k)] = p.at("beta" + std::to_string(k));
        op.gamma[static_cast<std::size_t>(k)] = p.at("gamma" + std::to_string(k));
      }
      return std::make_shared<OneCountModel>(table, op);
    }
  }
  throw ParameterError("unknown method");
}

double dev_objective(Method method, const TrainingData& data, const ParamMap& params,
                     const BuildOptions& options) {
  const auto model = build_model(method, data, params, options);
  return cross_entropy(*model, require(data.dev2, "dev2")).bits_per_word;
}

FittedModel fit_model(Method method, const TrainingData& data, const FitOptions& options) {
  const int order = data.table->order();
  for (const auto& [name, value] : options.fixed) check_parameter_name(method, order, name);

  FittedModel fitted;
  fitted.objective = std::numeric_limits<double>::quiet_NaN();
  const auto specs = method_parameters(method, data);
  ParamMap current;
  for (const auto& s : specs) current[s.name] = s.initial;
  for (const auto& [name, value] : options.fixed) current[name] = value;

  std::vector<const ParameterSpec*> integers;
  std::vector<const ParameterSpec*> continuous;
  for (const auto& s : specs) {
    if (options.fixed.count(s.name)) continue;
    (s.integer ? integers : continuous).push_back(&s);
  }

  if (options.optimize && !(integers.empty() && continuous.empty())) {
    auto objective = [&](const ParamMap& p) {
      ++fitted.evaluations;
      return dev_objective(method, data, p, options.build);
    };
    double best = objective(current);
    for (int round = 0; round < std::max(1, options.max_rounds); ++round) {
      bool improved = false;
      for (const auto* spec : integers) {
        for (double v : spec->grid) {
          if (v == current[spec->name]) continue;
          ParamMap trial = current;
          trial[spec->name] = v;
          double value = std::numeric_limits<double>::infinity();
          try {
            value = objective(trial);
          } catch (const ParameterError&) {
            continue;
          }
          if (value < best) {
            best = value;
            current = std::move(trial);
            improved = true;
          }
        }
      }
      if (!continuous.empty()) {
        std::vector<double> start;
        std::vector<Bound> bounds;
        for (const auto* spec : continuous) {
          start.push_back(current[spec->name]);
          bounds.push_back(spec->bound);
        }
        auto powell_objective = [&](const std::vector<double>& x) {
          ParamMap trial = current;
          for (std::size_t i = 0; i < x.size(); ++i) trial[continuous[i]->name] = x[i];
          return objective(trial);
        };
        const auto result = powell_minimize(powell_objective, start, bounds, options.powell);
        if (result.value < best) {
          best = result.value;
          for (std::size_t i = 0; i < continuous.size(); ++i) current[continuous[i]->name] = result.params[i];
          improved = true;
        }
      }
      if (integers.empty() || !improved) break;
    }
    fitted.objective = best;
  }

  fitted.params = current;
  fitted.model = build_model(method, data, current, options.build);
  return fitted;
}

}  // namespace smoothlm
