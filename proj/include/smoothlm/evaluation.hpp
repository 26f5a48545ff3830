#pragma once

#include <optional>
#include <string>

#include "smoothlm/corpus.hpp"
#include "smoothlm/model.hpp"

namespace smoothlm {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct ZeroProbabilityEvent {
  std::size_t sentence = 0;
  std::size_t position = 0;
  WordId word = 0;
};

struct EvaluationReport {
  double bits_per_word = 0.0;
  Count word_count = 0;
  double total_log2_prob = 0.0;
  double perplexity = 1.0;
  std::optional<double> delta_bits;
  std::optional<double> delta_perplexity_percent;
  std::optional<ZeroProbabilityEvent> zero_event;

  std::string to_key_value() const;
};

// -(1/N_T) sum of sentence log2 probabilities. A zero probability yields
// +infinity and records the first offending event.
EvaluationReport cross_entropy(const LanguageModel& model, const EncodedCorpus& test);

struct EntropyDelta {
  double bits = 0.0;
  double perplexity_percent = 0.0;
};

// bits = model - baseline; percent = 100 (2^bits - 1).
// Throws DataError if the reports cover different word counts.
EntropyDelta entropy_delta(const EvaluationReport& model, const EvaluationReport& baseline);
double perplexity_change_percent(double delta_bits);

// Attaches delta fields from a baseline report.
EvaluationReport with_baseline(EvaluationReport report, const EvaluationReport& baseline);

}  // namespace smoothlm
