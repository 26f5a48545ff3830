#include "smoothlm/one_count.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

OneCountModel::OneCountModel(TablePtr table, OneCountParams params)
    : table_(std::move(table)), params_(params) {
  for (int k = 1; k <= table_->order(); ++k) {
    const double beta = params_.beta[static_cast<std::size_t>(k)];
    const double gamma = params_.gamma[static_cast<std::size_t>(k)];
    if (!(gamma > 0.0) || !std::isfinite(gamma) || !std::isfinite(beta)) {
      throw ParameterError("one-count requires gamma_" + std::to_string(k) + " > 0");
    }
    for (const auto& row : table_->rows(k)) {
      if (gamma * (static_cast<double>(row.ones) + beta) <= 0.0) {
        throw ParameterError("one-count alpha is not positive for beta_" + std::to_string(k) +
                             " = " + std::to_string(beta));
      }
    }
  }
}

double OneCountModel::prob_at(int k, std::span<const WordId> context, WordId word) const {
  double p = 1.0 / static_cast<double>(table_->predictable_size());
  for (int j = 1; j <= k; ++j) {
    auto h = context.last(static_cast<std::size_t>(j - 1));
    const auto* row = table_->find_row(h);
    if (row == nullptr || row->total == 0) continue;
    const double alpha = params_.gamma[static_cast<std::size_t>(j)] *
                         (static_cast<double>(row->ones) + params_.beta[static_cast<std::size_t>(j)]);
    auto succ = table_->successors(*row, j);
    auto it = std::lower_bound(succ.begin(), succ.end(), word,
                               [](const Successor& s, WordId id) { return s.word < id; });
    const double c = (it != succ.end() && it->word == word) ? static_cast<double>(it->count) : 0.0;
    p = (c + alpha * p) / (static_cast<double>(row->total) + alpha);
  }
  return p;
}

double OneCountModel::prob(std::span<const WordId> context, WordId word) const {
  return prob_at(order(), context, word);
}

}  // namespace smoothlm
