// Command-line driver: experiments, parameter sweeps, one-off scoring.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "smoothlm/evaluation.hpp"
#include "smoothlm/experiment.hpp"
#include "smoothlm/ngram_table.hpp"
#include "smoothlm/trainer.hpp"

using namespace smoothlm;
using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kAllFailed = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Method method_arg(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

std::vector<double> number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

VocabScope scope_arg(const std::string& text) {
  if (text == "train") return VocabScope::Train;
  if (text == "corpus") return VocabScope::Corpus;
  throw UsageError("vocabulary scope must be 'train' or 'corpus'");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void apply_json(ExperimentConfig& config, const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "corpus") {
      config.corpus_path = value.get<std::string>();
    } else if (key == "order") {
      config.order = value.get<int>();
    } else if (key == "methods") {
      config.methods.clear();
      const auto names = value.is_string() ? split_list(value.get<std::string>())
                                           : value.get<std::vector<std::string>>();
      for (const auto& name : names) config.methods.push_back(method_arg(name));
    } else if (key == "sizes") {
      config.sizes = value.get<std::vector<std::size_t>>();
    } else if (key == "runs") {
      config.runs = value.get<int>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "dev_words") {
      config.dev_words = value.get<Count>();
    } else if (key == "test_words") {
      config.test_words = value.get<Count>();
    } else if (key == "block_sentences") {
      config.block_sentences = value.get<std::size_t>();
    } else if (key == "vocab") {
      config.vocab_policy = VocabularyPolicy::parse(value.get<std::string>());
    } else if (key == "vocab_scope") {
      config.vocab_scope = scope_arg(value.get<std::string>());
    } else if (key == "fixed_vocab") {
      config.fixed_vocab_path = value.get<std::string>();
    } else if (key == "lowercase") {
      config.lowercase = value.get<bool>();
    } else if (key == "optimize") {
      config.optimize = value.get<bool>();
    } else if (key == "params") {
      for (const auto& [name, v] : value.items()) config.params[name] = v.get<double>();
    } else if (key == "out") {
      config.out_path = value.get<std::string>();
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

// Flags shared by `experiment` and `sweep`; values are applied only when given.
struct ConfigFlags {
  std::string config_file, corpus, methods, sizes, vocab, vocab_scope, fixed_vocab, out, params;
  std::string aggregates, trace;
  int order = 0, runs = 0;
  std::uint64_t seed = 0;
  Count dev_words = 0, test_words = 0;
  std::size_t block = 0;
  bool no_optimize = false, lowercase = false;

  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App* app, bool with_methods) {
    opts["config"] = app->add_option("--config", config_file, "JSON experiment configuration")->check(CLI::ExistingFile);
    opts["corpus"] = app->add_option("--corpus", corpus, "Corpus, one sentence per line");
    opts["order"] = app->add_option("--order", order, "N-gram order")->check(CLI::Range(1, kMaxOrder));
    if (with_methods) opts["methods"] = app->add_option("--methods", methods, "Comma-separated method names");
    opts["sizes"] = app->add_option("--sizes", sizes, "Comma-separated training sizes (sentences)");
    opts["runs"] = app->add_option("--runs", runs, "Runs per size")->check(CLI::PositiveNumber);
    opts["seed"] = app->add_option("--seed", seed, "Base seed; run r uses seed + r");
    opts["dev_words"] = app->add_option("--dev-words", dev_words, "Words in each development segment");
    opts["test_words"] = app->add_option("--test-words", test_words, "Words in the test segment");
    opts["block"] = app->add_option("--block-sentences", block, "Shuffle block size in sentences");
    opts["vocab"] = app->add_option("--vocab", vocab, "all | min-count:K");
    opts["vocab_scope"] = app->add_option("--vocab-scope", vocab_scope, "train | corpus");
    opts["fixed_vocab"] = app->add_option("--fixed-vocab", fixed_vocab, "Vocabulary file, one token per line");
    opts["out"] = app->add_option("--out", out, "Result CSV (default stdout)");
    opts["params"] = app->add_option("--params", params, "Fixed parameters, name=value,...");
    opts["no_optimize"] = app->add_flag("--no-optimize", no_optimize, "Use defaults instead of searching");
    opts["lowercase"] = app->add_flag("--lowercase", lowercase, "Fold case while reading");
    opts["aggregates"] = app->add_option("--aggregates", aggregates, "Write per-size means and deviations here");
    opts["trace"] = app->add_option("--trace", trace, "Append Powell traces (CSV) to this file");
  }

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  ExperimentConfig build() const {
    ExperimentConfig c;
    if (given("config")) apply_json(c, read_json(config_file));
    if (given("corpus")) c.corpus_path = corpus;
    if (given("order")) c.order = order;
    if (given("methods")) {
      c.methods.clear();
      for (const auto& m : split_list(methods)) c.methods.push_back(method_arg(m));
    }
    if (given("sizes")) {
      c.sizes.clear();
      for (double v : number_list(sizes)) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
          throw UsageError("training sizes must be positive integers");
        }
        c.sizes.push_back(static_cast<std::size_t>(v));
      }
    }
    if (given("runs")) c.runs = runs;
    if (given("seed")) c.seed = seed;
    if (given("dev_words")) c.dev_words = dev_words;
    if (given("test_words")) c.test_words = test_words;
    if (given("block")) c.block_sentences = block;
    if (given("vocab")) c.vocab_policy = VocabularyPolicy::parse(vocab);
    if (given("vocab_scope")) c.vocab_scope = scope_arg(vocab_scope);
    if (given("fixed_vocab")) c.fixed_vocab_path = fixed_vocab;
    if (given("out")) c.out_path = out;
    if (given("params")) {
      for (const auto& [name, value] : parse_params(params)) c.params[name] = value;
    }
    if (no_optimize) c.optimize = false;
    if (lowercase) c.lowercase = true;
    if (c.corpus_path.empty()) throw UsageError("no corpus given (--corpus or config 'corpus')");
    return c;
  }
};

// Writes the header, then each row as soon as it is produced.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot write '" + path + "'");
    }
    out() << kCsvHeader << '\n';
    out().flush();
  }
  void operator()(const ResultRow& row) {
    out() << to_csv(row) << '\n';
    out().flush();
  }

 private:
  std::ostream& out() { return file_ ? *file_ : std::cout; }
  std::unique_ptr<std::ofstream> file_;
};

int finish(const ExperimentResult& result, const std::string& aggregates_path) {
  if (!aggregates_path.empty()) {
    std::ofstream out(aggregates_path);
    if (!out) throw DataError("cannot write '" + aggregates_path + "'");
    write_aggregates(out, result.aggregates);
  }
  std::size_t failed = 0;
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      ++failed;
      std::cerr << method_name(row.method) << " (size " << row.train_sentences << ", run " << row.run
                << "): " << row.error << '\n';
    }
  }
  return !result.rows.empty() && failed == result.rows.size() ? kAllFailed : kOk;
}

int run_eval(const std::string& model_config, const std::string& test_path, bool show_baseline) {
  const json j = read_json(model_config);
  auto str = [&](const char* key, const std::string& fallback = {}) {
    return j.contains(key) ? j.at(key).get<std::string>() : fallback;
  };
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> known = {"train", "method", "order", "vocab", "fixed_vocab",
                                                "lowercase", "params", "dev1", "dev2", "optimize"};
    if (!known.count(key)) throw UsageError("unknown model config key '" + key + "'");
  }
  const std::string train_path = str("train");
  if (train_path.empty()) throw UsageError("model config needs 'train'");
  const Method method = method_arg(str("method", "interp-baseline"));
  const int order = j.value("order", 2);
  const bool lowercase = j.value("lowercase", false);
  const bool optimize = j.value("optimize", false);
  ParamMap params;
  if (j.contains("params")) {
    for (const auto& [name, v] : j.at("params").items()) params[name] = v.get<double>();
  }

  const TokenSentences train_tokens = read_sentences_file(train_path, lowercase);
  std::shared_ptr<const Vocabulary> vocab;
  if (j.contains("fixed_vocab")) {
    vocab = std::make_shared<const Vocabulary>(Vocabulary::load_file(str("fixed_vocab")));
  } else {
    vocab = std::make_shared<const Vocabulary>(
        Vocabulary::build(train_tokens, VocabularyPolicy::parse(str("vocab", "all")), true));
  }
  const auto table = std::make_shared<const NGramTable>(accumulate_counts(encode(train_tokens, vocab), order));
  EncodedCorpus dev1, dev2;
  if (j.contains("dev1")) dev1 = encode(read_sentences_file(str("dev1"), lowercase), vocab);
  if (j.contains("dev2")) dev2 = encode(read_sentences_file(str("dev2"), lowercase), vocab);
  const TrainingData data{table, j.contains("dev1") ? &dev1 : nullptr, j.contains("dev2") ? &dev2 : nullptr};
  if (optimize && data.dev2 == nullptr) throw UsageError("'optimize' needs a 'dev2' segment");

  auto fit = [&](Method m, const ParamMap& fixed) {
    FitOptions options;
    options.optimize = optimize;
    options.fixed = fixed;
    return fit_model(m, data, options);
  };
  const FittedModel fitted = fit(method, params);
  const EncodedCorpus test = encode(read_sentences_file(test_path, lowercase), vocab);
  EvaluationReport report = cross_entropy(*fitted.model, test);
  if (show_baseline) {
    const FittedModel base = fit(Method::InterpBaseline, {});
    report = with_baseline(report, cross_entropy(*base.model, test));
  }
  std::cout << "method=" << method_name(method) << '\n'
            << "order=" << order << '\n'
            << "params=" << format_params(fitted.params) << '\n'
            << report.to_key_value();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-gram smoothing experiments"};
  app.require_subcommand(1);

  ConfigFlags exp_flags;
  auto* experiment = app.add_subcommand("experiment", "Train, tune and score methods over sizes and runs");
  exp_flags.add(experiment, true);

  ConfigFlags sweep_flags;
  std::string sweep_method, sweep_param, sweep_grid;
  auto* sweep = app.add_subcommand("sweep", "Score one method over a grid of one parameter");
  sweep_flags.add(sweep, false);
  sweep->add_option("--method", sweep_method, "Method name")->required();
  sweep->add_option("--param", sweep_param, "Parameter name")->required();
  sweep->add_option("--grid", sweep_grid, "Comma-separated values")->required();

  std::string model_config, test_path;
  bool eval_baseline = false;
  auto* eval = app.add_subcommand("eval", "Train one model and report its test cross-entropy");
  eval->add_option("--model-config", model_config, "JSON model description")->required()->check(CLI::ExistingFile);
  eval->add_option("--test", test_path, "Test text, one sentence per line")->required();
  eval->add_flag("--baseline", eval_baseline, "Also report the change against interp-baseline");

  std::string vocab_corpus, vocab_policy = "all", vocab_out;
  bool vocab_lower = false;
  auto* vocab_cmd = app.add_subcommand("vocab", "Write a vocabulary file usable with --fixed-vocab");
  vocab_cmd->add_option("--corpus", vocab_corpus, "Corpus")->required();
  vocab_cmd->add_option("--vocab", vocab_policy, "all | min-count:K");
  vocab_cmd->add_option("--out", vocab_out, "Output file (default stdout)");
  vocab_cmd->add_flag("--lowercase", vocab_lower, "Fold case while reading");

  std::string counts_corpus;
  int counts_order = 2;
  auto* counts_cmd = app.add_subcommand("counts", "Dump n-gram counts as ids");
  counts_cmd->add_option("--corpus", counts_corpus, "Corpus")->required();
  counts_cmd->add_option("--order", counts_order, "N-gram order")->check(CLI::Range(1, kMaxOrder));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*experiment) {
      ExperimentConfig config = exp_flags.build();
      config.validate();
      std::ofstream trace;
      if (!exp_flags.trace.empty()) {
        trace.open(exp_flags.trace, std::ios::app);
        if (!trace) throw DataError("cannot write '" + exp_flags.trace + "'");
        config.powell_trace = &trace;
      }
      CsvWriter writer(config.out_path);
      const auto result = run_experiment(config, [&](const ResultRow& r) { writer(r); });
      return finish(result, exp_flags.aggregates);
    }
    if (*sweep) {
      ExperimentConfig config = sweep_flags.build();
      std::ofstream trace;
      if (!sweep_flags.trace.empty()) {
        trace.open(sweep_flags.trace, std::ios::app);
        if (!trace) throw DataError("cannot write '" + sweep_flags.trace + "'");
        config.powell_trace = &trace;
      }
      const Method method = method_arg(sweep_method);
      const auto grid = number_list(sweep_grid);
      if (grid.empty()) throw UsageError("empty grid");
      config.validate();
      check_parameter_name(method, config.order, sweep_param);
      CsvWriter writer(config.out_path);
      const auto result =
          sweep_parameter(config, method, sweep_param, grid, [&](const ResultRow& r) { writer(r); });
      return finish(result, sweep_flags.aggregates);
    }
    if (*eval) return run_eval(model_config, test_path, eval_baseline);
    if (*vocab_cmd) {
      const auto vocab = Vocabulary::build(read_sentences_file(vocab_corpus, vocab_lower),
                                           VocabularyPolicy::parse(vocab_policy));
      if (vocab_out.empty()) {
        vocab.save(std::cout);
      } else {
        std::ofstream out(vocab_out);
        if (!out) throw DataError("cannot write '" + vocab_out + "'");
        vocab.save(out);
      }
      return kOk;
    }
    if (*counts_cmd) {
      const auto tokens = read_sentences_file(counts_corpus);
      const auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(tokens, VocabularyPolicy::all_words()));
      accumulate_counts(encode(tokens, vocab), counts_order).dump(std::cout);
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const json::exception& e) {
    std::cerr << "error: bad configuration value: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
