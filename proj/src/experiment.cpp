#include "smoothlm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "smoothlm/evaluation.hpp"
#include "smoothlm/ngram_table.hpp"

namespace smoothlm {

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' || c == '\r' ? ' ' : c;
  }
  return out + '"';
}

// Entries of `params` that `method` accepts at `order`.
ParamMap params_for(Method method, int order, const ParamMap& params) {
  ParamMap out;
  for (const auto& [name, value] : params) {
    try {
      check_parameter_name(method, order, name);
      out[name] = value;
    } catch (const ParameterError&) {
    }
  }
  return out;
}

TokenSentences read_corpus(const ExperimentConfig& config) {
  if (config.corpus_path.empty()) throw DataError("no corpus given");
  return read_sentences_file(config.corpus_path, config.lowercase);
}

// One run's segments, encoded against the run's vocabulary.
struct RunData {
  std::shared_ptr<const Vocabulary> vocab;
  EncodedCorpus train;  // largest size; smaller sizes are prefixes
  EncodedCorpus dev1;
  EncodedCorpus dev2;
  EncodedCorpus test;
};

RunData prepare_run(const ExperimentConfig& config, const TokenSentences& corpus,
                    std::uint64_t seed) {
  std::vector<Count> lengths;
  lengths.reserve(corpus.size());
  for (const auto& s : corpus) lengths.push_back(static_cast<Count>(s.size()) + 1);
  SplitSpec spec;
  spec.train_sentences = config.sizes.back();
  spec.dev1_words = config.dev_words;
  spec.dev2_words = config.dev_words;
  spec.test_words = config.test_words;
  spec.shuffle_seed = seed;
  spec.block_sentences = config.block_sentences;
  const SplitIndices idx = split_indices(lengths, spec);

  RunData run;
  const TokenSentences train_tokens = select(corpus, idx.train);
  if (!config.fixed_vocab_path.empty()) {
    run.vocab = std::make_shared<const Vocabulary>(Vocabulary::load_file(config.fixed_vocab_path));
  } else if (config.vocab_scope == VocabScope::Corpus) {
    run.vocab = std::make_shared<const Vocabulary>(Vocabulary::build(corpus, config.vocab_policy));
  } else {
    run.vocab = std::make_shared<const Vocabulary>(
        Vocabulary::build(train_tokens, config.vocab_policy, /*with_unk=*/true));
  }
  run.train = encode(train_tokens, run.vocab);
  run.dev1 = encode(select(corpus, idx.dev1), run.vocab);
  run.dev2 = encode(select(corpus, idx.dev2), run.vocab);
  run.test = encode(select(corpus, idx.test), run.vocab);
  return run;
}

std::vector<Method> with_baseline_first(const std::vector<Method>& methods) {
  std::vector<Method> out{Method::InterpBaseline};
  for (Method m : methods) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

FitOptions fit_options(const ExperimentConfig& config, Method method) {
  FitOptions options;
  options.optimize = config.optimize;
  options.fixed = params_for(method, config.order, config.params);
  options.powell.trace = config.powell_trace;
  return options;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (order < 1 || order > kMaxOrder) {
    throw ParameterError("order must be between 1 and " + std::to_string(kMaxOrder));
  }
  if (sizes.empty()) throw ParameterError("no training sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ParameterError("training sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ParameterError("training sizes must be ascending");
  }
  if (runs < 1) throw ParameterError("runs must be at least 1");
  if (methods.empty()) throw ParameterError("no methods given");
  if (dev_words < 1 || test_words < 1) throw ParameterError("dev and test targets must be positive");
  if (block_sentences < 1) throw ParameterError("block size must be positive");
  // A fixed parameter that no configured method takes is most likely a typo.
  for (const auto& [name, value] : params) {
    bool used = !params_for(Method::InterpBaseline, order, {{name, value}}).empty();
    for (Method m : methods) used = used || !params_for(m, order, {{name, value}}).empty();
    if (!used) check_parameter_name(methods.front(), order, name);
  }
}

const Aggregate* ExperimentResult::find(Method method, std::size_t train_sentences) const {
  for (const auto& a : aggregates) {
    if (a.method == method && a.train_sentences == train_sentences) return &a;
  }
  return nullptr;
}

MeanSd mean_and_sd(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
  struct Group {
    Method method;
    std::size_t size;
    std::vector<double> entropy;
    std::vector<double> delta;
  };
  std::vector<Group> groups;
  for (const auto& r : rows) {
    if (!r.error.empty() || !r.entropy_bits) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.method == r.method && g.size == r.train_sentences;
    });
    if (it == groups.end()) {
      groups.push_back({r.method, r.train_sentences, {}, {}});
      it = groups.end() - 1;
    }
    it->entropy.push_back(*r.entropy_bits);
    if (r.delta_bits) it->delta.push_back(*r.delta_bits);
  }
  std::vector<Aggregate> out;
  for (const auto& g : groups) {
    Aggregate a;
    a.method = g.method;
    a.train_sentences = g.size;
    a.runs = g.entropy.size();
    const MeanSd e = mean_and_sd(g.entropy);
    a.mean_entropy = e.mean;
    a.sd_entropy = e.sd;
    if (!g.delta.empty()) {
      const MeanSd d = mean_and_sd(g.delta);
      a.mean_delta = d.mean;
      a.sd_delta = d.sd;
    }
    out.push_back(a);
  }
  return out;
}

std::string to_csv(const ResultRow& row) {
  std::string out;
  out += method_name(row.method);
  out += ',' + std::to_string(row.order);
  out += ',' + std::to_string(row.train_sentences);
  out += ',' + std::to_string(row.run);
  out += ',' + std::to_string(row.seed);
  out += ',' + optional_number(row.entropy_bits);
  out += ',' + optional_number(row.delta_bits);
  out += ',' + csv_field(format_params(row.params));
  out += ',' + csv_field(row.error);
  return out;
}

void write_aggregates(std::ostream& out, const std::vector<Aggregate>& aggregates) {
  out << "method,train_sentences,runs,mean_entropy,sd_entropy,mean_delta,sd_delta\n";
  for (const auto& a : aggregates) {
    out << method_name(a.method) << ',' << a.train_sentences << ',' << a.runs << ','
        << number(a.mean_entropy) << ',' << optional_number(a.sd_entropy) << ','
        << optional_number(a.mean_delta) << ',' << optional_number(a.sd_delta) << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RowSink& sink) {
  config.validate();
  return run_experiment(config, read_corpus(config), sink);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const TokenSentences& corpus,
                                const RowSink& sink) {
  config.validate();
  ExperimentResult result;
  const auto methods = with_baseline_first(config.methods);
  for (int r = 0; r < config.runs; ++r) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    const RunData data = prepare_run(config, corpus, seed);
    for (std::size_t size : config.sizes) {
      const auto table =
          std::make_shared<const NGramTable>(accumulate_counts(truncate_corpus(data.train, size), config.order));
      const TrainingData training{table, &data.dev1, &data.dev2};
      std::optional<EvaluationReport> baseline;
      for (Method method : methods) {
        ResultRow row;
        row.method = method;
        row.order = config.order;
        row.train_sentences = size;
        row.run = r;
        row.seed = seed;
        try {
          const FittedModel fitted = fit_model(method, training, fit_options(config, method));
          row.params = fitted.params;
          const EvaluationReport report = cross_entropy(*fitted.model, data.test);
          row.entropy_bits = report.bits_per_word;
          if (method == Method::InterpBaseline) baseline = report;
          if (baseline) row.delta_bits = entropy_delta(report, *baseline).bits;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        if (sink) sink(row);
        result.rows.push_back(std::move(row));
      }
    }
  }
  result.aggregates = aggregate(result.rows);
  return result;
}

ExperimentResult sweep_parameter(const ExperimentConfig& config, Method method,
                                 const std::string& param, const std::vector<double>& grid,
                                 const RowSink& sink) {
  config.validate();
  check_parameter_name(method, config.order, param);
  return sweep_parameter(config, read_corpus(config), method, param, grid, sink);
}

ExperimentResult sweep_parameter(const ExperimentConfig& config, const TokenSentences& corpus,
                                 Method method, const std::string& param,
                                 const std::vector<double>& grid, const RowSink& sink) {
  config.validate();
  check_parameter_name(method, config.order, param);
  if (grid.empty()) throw ParameterError("empty grid for " + param);
  ExperimentResult result;
  for (int r = 0; r < config.runs; ++r) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    const RunData data = prepare_run(config, corpus, seed);
    for (std::size_t size : config.sizes) {
      const auto table =
          std::make_shared<const NGramTable>(accumulate_counts(truncate_corpus(data.train, size), config.order));
      const TrainingData training{table, &data.dev1, &data.dev2};
      std::optional<EvaluationReport> baseline;
      std::optional<FittedModel> fitted;
      std::string setup_error;
      try {
        const auto base = fit_model(Method::InterpBaseline, training,
                                    fit_options(config, Method::InterpBaseline));
        baseline = cross_entropy(*base.model, data.test);
        fitted = fit_model(method, training, fit_options(config, method));
      } catch (const std::exception& e) {
        setup_error = e.what();
      }
      for (double value : grid) {
        ResultRow row;
        row.method = method;
        row.order = config.order;
        row.train_sentences = size;
        row.run = r;
        row.seed = seed;
        try {
          if (!fitted) throw DataError(setup_error);
          row.params = fitted->params;
          row.params[param] = value;
          const auto model = build_model(method, training, row.params);
          const EvaluationReport report = cross_entropy(*model, data.test);
          row.entropy_bits = report.bits_per_word;
          if (baseline) row.delta_bits = entropy_delta(report, *baseline).bits;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        if (sink) sink(row);
        result.rows.push_back(std::move(row));
      }
    }
  }
  result.aggregates = aggregate(result.rows);
  return result;
}

}  // namespace smoothlm
