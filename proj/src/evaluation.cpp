#include "smoothlm/evaluation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace smoothlm {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::string EvaluationReport::to_key_value() const {
  std::ostringstream out;
  out.precision(10);
  out << "bits_per_word=" << bits_per_word << '\n'
      << "perplexity=" << perplexity << '\n'
      << "words=" << word_count << '\n'
      << "log2_prob=" << total_log2_prob << '\n';
  if (delta_bits) out << "delta_bits=" << *delta_bits << '\n';
  if (delta_perplexity_percent) out << "delta_perplexity_percent=" << *delta_perplexity_percent << '\n';
  if (zero_event) {
    out << "zero_probability=sentence " << zero_event->sentence << " position "
        << zero_event->position << " word " << zero_event->word << '\n';
  }
  return out.str();
}

EvaluationReport cross_entropy(const LanguageModel& model, const EncodedCorpus& test) {
  EvaluationReport report;
  const std::size_t pad = static_cast<std::size_t>(model.order() - 1);
  const WordId bos = static_cast<WordId>(model.vocab_size());
  CompensatedSum sum;
  std::vector<WordId> padded;
  for (std::size_t si = 0; si < test.sentences.size(); ++si) {
    const auto& s = test.sentences[si];
    padded.assign(pad, bos);
    padded.insert(padded.end(), s.begin(), s.end());
    for (std::size_t i = pad; i < padded.size(); ++i) {
      const double p = model.prob(std::span<const WordId>(padded.data() + i - pad, pad), padded[i]);
      ++report.word_count;
      if (!(p > 0.0)) {
        if (!report.zero_event) report.zero_event = ZeroProbabilityEvent{si, i - pad, padded[i]};
        continue;
      }
      sum.add(std::log2(p));
    }
  }
  if (report.word_count == 0) throw DataError("empty test set");
  if (report.zero_event) {
    report.total_log2_prob = -std::numeric_limits<double>::infinity();
    report.bits_per_word = std::numeric_limits<double>::infinity();
    report.perplexity = std::numeric_limits<double>::infinity();
    return report;
  }
  report.total_log2_prob = sum.value();
  report.bits_per_word = -report.total_log2_prob / static_cast<double>(report.word_count);
  report.perplexity = std::exp2(report.bits_per_word);
  return report;
}

double perplexity_change_percent(double delta_bits) { return 100.0 * (std::exp2(delta_bits) - 1.0); }

EntropyDelta entropy_delta(const EvaluationReport& model, const EvaluationReport& baseline) {
  if (model.word_count != baseline.word_count) {
    throw DataError("entropy delta over different test sets (" + std::to_string(model.word_count) +
                    " vs " + std::to_string(baseline.word_count) + " words)");
  }
  EntropyDelta d;
  d.bits = model.bits_per_word - baseline.bits_per_word;
  d.perplexity_percent = perplexity_change_percent(d.bits);
  return d;
}

EvaluationReport with_baseline(EvaluationReport report, const EvaluationReport& baseline) {
  const EntropyDelta d = entropy_delta(report, baseline);
  report.delta_bits = d.bits;
  report.delta_perplexity_percent = d.perplexity_percent;
  return report;
}

}  // namespace smoothlm
