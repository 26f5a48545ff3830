#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "smoothlm/model.hpp"

namespace smoothlm {

struct KatzParams {
  double delta = 1.0;                 // additive constant of the unigram level
  std::array<int, kMaxOrder + 1> k{}; // k[n]: discount cutoff of order n >= 2
};

// Katz back-off over Good-Turing discounts.
//
// A gram seen r times gets d_r r / c(context), with d_r = 1 above the cutoff
// k_n and d_r = (r*/r - mu) / (1 - mu), mu = (k_n + 1) n_{k_n+1} / n_1, below
// it. Unseen successors share the left-over mass in proportion to the next
// lower order. Discounts that are undefined or fall outside (0, 1] revert to 1.
// A context with unseen successors but no left-over mass reserves
// delta * U / (c(context) + delta * U) for them (U = number of unseen successors).
class KatzModel final : public LanguageModel {
 public:
  KatzModel(TablePtr table, KatzParams params);

  int order() const override { return table_->order(); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;

  double prob_at(int k, std::span<const WordId> context, WordId word) const;
  double discount(int k, Count r) const;
  // 1 for unseen contexts.
  double backoff_weight(int k, std::span<const WordId> context) const;
  const KatzParams& params() const { return params_; }

 private:
  struct ContextWeights {
    double seen_scale = 1.0;  // multiplies d_r r / c for seen successors
    double alpha = 1.0;
  };

  void compute_weights(int k);

  TablePtr table_;
  KatzParams params_;
  std::vector<std::vector<double>> discounts_;  // [k][r], r <= cutoff
  std::vector<std::vector<ContextWeights>> weights_;  // [k][row index]
};

}  // namespace smoothlm
