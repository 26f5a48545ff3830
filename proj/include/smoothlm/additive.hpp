#pragma once

#include "smoothlm/model.hpp"

namespace smoothlm {

// (c(context w) + delta) / (c(context) + delta |V|) at the top order only.
class AdditiveModel final : public LanguageModel {
 public:
  // Throws ParameterError for delta <= 0.
  AdditiveModel(TablePtr table, double delta);

  int order() const override { return table_->order(); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;
  double delta() const { return delta_; }

 private:
  TablePtr table_;
  double delta_;
};

}  // namespace smoothlm
