#pragma once

#include <array>

#include "smoothlm/model.hpp"

namespace smoothlm {

struct OneCountParams {
  std::array<double, kMaxOrder + 1> beta{};   // indexed by order, [0] unused
  std::array<double, kMaxOrder + 1> gamma{};
};

// P_k(w|h) = (c(h w) + alpha P_{k-1}(w|h')) / (c(h) + alpha),
// alpha = gamma_k (n_1(h) + beta_k), recursing down to the uniform distribution.
class OneCountModel final : public LanguageModel {
 public:
  // Throws ParameterError if alpha would be <= 0 for any seen context.
  OneCountModel(TablePtr table, OneCountParams params);

  int order() const override { return table_->order(); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;
  double prob_at(int k, std::span<const WordId> context, WordId word) const;

 private:
  TablePtr table_;
  OneCountParams params_;
};

}  // namespace smoothlm
