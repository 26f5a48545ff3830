#pragma once

#include <mutex>
#include <unordered_map>
#include <vector>

#include "smoothlm/good_turing.hpp"
#include "smoothlm/model.hpp"

namespace smoothlm {

// Church-Gale smoothing: Good-Turing inside buckets of the gram space.
//
// Every gram (h, w) of order k >= 2 has a prior j = P(h) P(w), where P(w) is the
// Good-Turing unigram distribution and P(h) is the unigram probability of h
// (bigrams) or the Church-Gale joint probability of the bigram h (trigrams).
// Grams are bucketed by j so that each bucket holds at least c_min seen grams,
// Good-Turing is applied per bucket with n_0 = unseen grams whose prior lands
// in it, and P(w | h) is the corrected count of (h, w) over its row total.
//
// The gram space is every (h, w) with h a possible history: any word but EOS,
// or BOS; for trigrams (u, v) with v neither BOS nor EOS plus (BOS, BOS).
// BOS takes the probability of EOS as its unigram prior (both occur once per
// sentence). n_0 is counted exactly by pairing distinct prior values, so the
// cost grows with the number of distinct priors rather than |V|^k.
class ChurchGaleModel final : public LanguageModel {
 public:
  static constexpr double kDefaultBudget = 1e8;

  // Throws ParameterError for c_min < 1 and DataError when the number of
  // distinct (history prior, word prior) pairs exceeds `budget`.
  ChurchGaleModel(TablePtr table, Count c_min, double budget = kDefaultBudget);
  ~ChurchGaleModel() override;

  int order() const override { return table_->order(); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;

  double unigram(WordId word) const { return unigram_.at(word); }
  // Normalized joint probability of a gram of order k >= 2 over its gram space.
  double joint(std::span<const WordId> gram) const;
  // Sum of joint() over the whole order-k gram space (1 up to rounding).
  double joint_total(int k) const;
  std::size_t num_buckets(int k) const;
  const GoodTuringTable& bucket_table(int k, std::size_t bucket) const;
  Count c_min() const { return c_min_; }

  struct Level;

 private:
  double row_total(const Level& level, std::span<const WordId> history) const;
  double history_prior(int k, std::span<const WordId> history) const;
  bool valid_history(std::span<const WordId> history) const;

  TablePtr table_;
  Count c_min_;
  std::vector<double> unigram_;
  std::vector<std::pair<double, Count>> word_groups_;  // distinct unigram priors
  std::vector<std::unique_ptr<Level>> levels_;  // [0] bigrams, [1] trigrams
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, double> row_cache_;
};

}  // namespace smoothlm
