#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothlm/common.hpp"
#include "smoothlm/ngram_table.hpp"

namespace smoothlm {

enum class Method {
  ML,
  PlusOne,
  PlusDelta,
  InterpBaseline,
  InterpHeldOut,
  InterpDelInt,
  NewAvgCount,
  Katz,
  ChurchGale,
  NewOneCount,
};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
// The nine compared techniques, in reporting order (ML excluded).
const std::vector<Method>& smoothing_methods();

// Conditional distribution P(w | context) over the predictable vocabulary.
// `context` holds exactly order()-1 ids, most recent last; it may contain BOS.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual int order() const = 0;
  virtual std::size_t vocab_size() const = 0;
  virtual double prob(std::span<const WordId> context, WordId word) const = 0;
};

using ModelPtr = std::shared_ptr<const LanguageModel>;
using TablePtr = std::shared_ptr<const NGramTable>;

class UniformModel final : public LanguageModel {
 public:
  UniformModel(int order, std::size_t vocab_size) : order_(order), vocab_size_(vocab_size) {}
  int order() const override { return order_; }
  std::size_t vocab_size() const override { return vocab_size_; }
  double prob(std::span<const WordId>, WordId) const override {
    return 1.0 / static_cast<double>(vocab_size_);
  }

 private:
  int order_;
  std::size_t vocab_size_;
};

// Relative frequency at the top order; 0 for unseen contexts.
class MaximumLikelihoodModel final : public LanguageModel {
 public:
  explicit MaximumLikelihoodModel(TablePtr table) : table_(std::move(table)) {}
  int order() const override { return table_->order(); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;

 private:
  TablePtr table_;
};

// c(context w) / c(context) at order context.size()+1, or nullopt if c(context) = 0.
std::optional<double> ml_prob(const NGramTable& table, std::span<const WordId> context,
                              WordId word);

// Sum of log2 P(w_i | history) over the sentence, padded with order-1 BOS ids.
double sequence_logprob(const LanguageModel& model, std::span<const WordId> sentence,
                        WordId bos);

// Sum of P(w | context) over the predictable vocabulary.
double total_probability(const LanguageModel& model, std::span<const WordId> context);

}  // namespace smoothlm
