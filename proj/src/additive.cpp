#include "smoothlm/additive.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

AdditiveModel::AdditiveModel(TablePtr table, double delta) : table_(std::move(table)), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ParameterError("additive smoothing requires delta > 0");
  }
}

double AdditiveModel::prob(std::span<const WordId> context, WordId word) const {
  const double v = static_cast<double>(table_->predictable_size());
  const auto* row = table_->find_row(context);
  if (row == nullptr) return 1.0 / v;
  auto succ = table_->successors(*row, table_->order());
  auto it = std::lower_bound(succ.begin(), succ.end(), word,
                             [](const Successor& s, WordId id) { return s.word < id; });
  const double c = (it != succ.end() && it->word == word) ? static_cast<double>(it->count) : 0.0;
  return (c + delta_) / (static_cast<double>(row->total) + delta_ * v);
}

}  // namespace smoothlm
