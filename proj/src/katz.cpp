#include "smoothlm/katz.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

namespace {

const Successor* find_successor(std::span<const Successor> succ, WordId word) {
  auto it = std::lower_bound(succ.begin(), succ.end(), word,
                             [](const Successor& s, WordId id) { return s.word < id; });
  return (it != succ.end() && it->word == word) ? &*it : nullptr;
}

}  // namespace

KatzModel::KatzModel(TablePtr table, KatzParams params)
    : table_(std::move(table)), params_(params) {
  if (!(params_.delta > 0.0) || !std::isfinite(params_.delta)) {
    throw ParameterError("katz requires delta > 0");
  }
  const int n = table_->order();
  discounts_.resize(static_cast<std::size_t>(n + 1));
  weights_.resize(static_cast<std::size_t>(n + 1));
  for (int k = 2; k <= n; ++k) {
    const int cutoff = params_.k[static_cast<std::size_t>(k)];
    if (cutoff < 1) throw ParameterError("katz requires k_" + std::to_string(k) + " >= 1");
    const CountOfCounts coc = count_of_counts(*table_, k);
    auto& d = discounts_[static_cast<std::size_t>(k)];
    d.assign(static_cast<std::size_t>(cutoff + 1), 1.0);
    const Count n1 = coc.at(1);
    if (n1 == 0) continue;
    const double mu = static_cast<double>(cutoff + 1) * static_cast<double>(coc.at(cutoff + 1)) /
                      static_cast<double>(n1);
    if (mu >= 1.0) continue;
    for (int r = 1; r <= cutoff; ++r) {
      const Count nr = coc.at(r);
      const Count nr1 = coc.at(r + 1);
      if (nr == 0 || nr1 == 0) continue;
      const double rstar = static_cast<double>(r + 1) * static_cast<double>(nr1) / static_cast<double>(nr);
      const double dr = (rstar / r - mu) / (1.0 - mu);
      if (dr > 0.0 && dr <= 1.0) d[static_cast<std::size_t>(r)] = dr;
    }
  }
  for (int k = 2; k <= n; ++k) compute_weights(k);
}

double KatzModel::discount(int k, Count r) const {
  const auto& d = discounts_.at(static_cast<std::size_t>(k));
  return r < static_cast<Count>(d.size()) ? d[static_cast<std::size_t>(r)] : 1.0;
}

void KatzModel::compute_weights(int k) {
  const auto& rows = table_->rows(k);
  const std::size_t vocab = table_->predictable_size();
  auto& out = weights_[static_cast<std::size_t>(k)];
  out.resize(rows.size());
  std::vector<WordId> history;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    history.assign(row.context.begin(), row.context.begin() + (k - 1));
    std::span<const WordId> lower_history = std::span<const WordId>(history).last(static_cast<std::size_t>(k - 2));
    auto succ = table_->successors(row, k);
    const double c = static_cast<double>(row.total);
    double seen = 0.0;
    double seen_lower = 0.0;
    for (const auto& s : succ) {
      seen += discount(k, s.count) * static_cast<double>(s.count) / c;
      seen_lower += prob_at(k - 1, lower_history, s.word);
    }
    ContextWeights w;
    const std::size_t unseen = vocab - succ.size();
    if (unseen == 0) {
      w.seen_scale = 1.0 / seen;
      w.alpha = 0.0;
    } else {
      double leftover = 1.0 - seen;
      if (leftover <= 1e-12) {
        const double reserve = params_.delta * static_cast<double>(unseen);
        w.seen_scale = c / (c + reserve);
        leftover = reserve / (c + reserve);
      }
      double denominator = 1.0 - seen_lower;
      if (denominator < 1e-9) {
        denominator = 0.0;
        std::size_t j = 0;
        for (std::size_t word = 0; word < vocab; ++word) {
          if (j < succ.size() && succ[j].word == word) {
            ++j;
            continue;
          }
          denominator += prob_at(k - 1, lower_history, static_cast<WordId>(word));
        }
      }
      w.alpha = leftover / denominator;
    }
    out[i] = w;
  }
}

double KatzModel::backoff_weight(int k, std::span<const WordId> context) const {
  const auto h = context.last(static_cast<std::size_t>(k - 1));
  const auto* row = table_->find_row(h);
  if (row == nullptr) return 1.0;
  const auto& rows = table_->rows(k);
  return weights_[static_cast<std::size_t>(k)][static_cast<std::size_t>(row - rows.data())].alpha;
}

double KatzModel::prob_at(int k, std::span<const WordId> context, WordId word) const {
  if (k == 1) {
    const auto* row = table_->find_row({});
    const double total = row == nullptr ? 0.0 : static_cast<double>(row->total);
    const Successor* s = row == nullptr ? nullptr : find_successor(table_->successors(*row, 1), word);
    const double c = s == nullptr ? 0.0 : static_cast<double>(s->count);
    return (c + params_.delta) /
           (total + params_.delta * static_cast<double>(table_->predictable_size()));
  }
  const auto h = context.last(static_cast<std::size_t>(k - 1));
  const auto* row = table_->find_row(h);
  if (row == nullptr) return prob_at(k - 1, h, word);
  const auto& w = weights_[static_cast<std::size_t>(k)][static_cast<std::size_t>(row - table_->rows(k).data())];
  if (const Successor* s = find_successor(table_->successors(*row, k), word)) {
    return w.seen_scale * discount(k, s->count) * static_cast<double>(s->count) /
           static_cast<double>(row->total);
  }
  if (w.alpha == 0.0) return 0.0;
  return w.alpha * prob_at(k - 1, h, word);
}

double KatzModel::prob(std::span<const WordId> context, WordId word) const {
  return prob_at(order(), context, word);
}

}  // namespace smoothlm
