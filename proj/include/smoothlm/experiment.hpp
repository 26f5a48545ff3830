#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smoothlm/corpus.hpp"
#include "smoothlm/model.hpp"
#include "smoothlm/trainer.hpp"

namespace smoothlm {

enum class VocabScope {
  Train,   // built from the (largest) training segment, UNK for held-out OOVs
  Corpus,  // built from the whole corpus
};

struct ExperimentConfig {
  std::string corpus_path;
  VocabularyPolicy vocab_policy;
  VocabScope vocab_scope = VocabScope::Train;
  std::string fixed_vocab_path;  // overrides vocab_policy/vocab_scope
  bool lowercase = false;
  int order = 2;
  std::vector<Method> methods{Method::InterpBaseline};
  std::vector<std::size_t> sizes{1000};
  int runs = 1;
  std::uint64_t seed = 1;
  Count dev_words = 50000;
  Count test_words = 50000;
  std::size_t block_sentences = 100;
  bool optimize = true;
  ParamMap params;  // fixed values, applied to every method that has them
  std::string out_path;
  std::ostream* powell_trace = nullptr;  // optimizer trace CSV, when wanted

  // Throws ParameterError on empty/unsorted sizes, runs < 1, or bad order.
  void validate() const;
};

struct ResultRow {
  Method method = Method::InterpBaseline;
  int order = 2;
  std::size_t train_sentences = 0;
  int run = 0;
  std::uint64_t seed = 0;
  std::optional<double> entropy_bits;
  std::optional<double> delta_bits;
  ParamMap params;
  std::string error;
};

struct Aggregate {
  Method method = Method::InterpBaseline;
  std::size_t train_sentences = 0;
  std::size_t runs = 0;
  double mean_entropy = 0.0;
  std::optional<double> sd_entropy;  // absent for a single run
  std::optional<double> mean_delta;
  std::optional<double> sd_delta;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<Aggregate> aggregates;

  const Aggregate* find(Method method, std::size_t train_sentences) const;
};

struct MeanSd {
  double mean = 0.0;
  std::optional<double> sd;  // sample standard deviation, n >= 2 only
};
MeanSd mean_and_sd(const std::vector<double>& values);

// Groups by (method, train_sentences) in first-appearance order; rows with
// errors are skipped.
std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows);

inline constexpr std::string_view kCsvHeader =
    "method,order,train_sentences,run,seed,entropy_bits,delta_bits,params,error";
std::string to_csv(const ResultRow& row);
void write_aggregates(std::ostream& out, const std::vector<Aggregate>& aggregates);

using RowSink = std::function<void(const ResultRow&)>;

// Every run re-splits the corpus with seed base+run; each size truncates the
// same training pool, so sizes are nested. interp-baseline is trained first on
// every split and is the reference for delta_bits. Failures of one method are
// recorded in its row and do not stop the others.
ExperimentResult run_experiment(const ExperimentConfig& config, const RowSink& sink = {});
ExperimentResult run_experiment(const ExperimentConfig& config, const TokenSentences& corpus,
                                const RowSink& sink = {});

// Optimizes every parameter once per (run, size), then re-evaluates the test
// entropy with `param` set to each grid value. One row per (run, size, value).
ExperimentResult sweep_parameter(const ExperimentConfig& config, Method method,
                                 const std::string& param, const std::vector<double>& grid,
                                 const RowSink& sink = {});
ExperimentResult sweep_parameter(const ExperimentConfig& config, const TokenSentences& corpus,
                                 Method method, const std::string& param,
                                 const std::vector<double>& grid, const RowSink& sink = {});

}  // namespace smoothlm
