#include "smoothlm/interpolated.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

namespace {

Count successor_count(const NGramTable& table, const NGramTable::Row& row, int k, WordId word) {
  auto succ = table.successors(row, k);
  auto it = std::lower_bound(succ.begin(), succ.end(), word,
                             [](const Successor& s, WordId id) { return s.word < id; });
  return (it != succ.end() && it->word == word) ? it->count : 0;
}

double row_statistic(BucketScheme scheme, const NGramTable::Row& row) {
  if (row.total == 0) return 0.0;
  if (scheme == BucketScheme::ContextCount) return static_cast<double>(row.total);
  return static_cast<double>(row.total) / static_cast<double>(row.distinct);
}

}  // namespace

std::string_view scheme_name(BucketScheme scheme) {
  return scheme == BucketScheme::ContextCount ? "context-count" : "average-count";
}

double bucket_statistic(BucketScheme scheme, const NGramTable& table,
                        std::span<const WordId> context) {
  const auto* row = table.find_row(context);
  return row == nullptr ? 0.0 : row_statistic(scheme, *row);
}

BucketMap BucketMap::single(double lambda) {
  BucketMap map;
  map.lambdas = {lambda};
  map.validate();
  return map;
}

std::size_t BucketMap::bucket_of(double statistic) const {
  auto it = std::lower_bound(upper_bounds.begin(), upper_bounds.end(), statistic);
  return static_cast<std::size_t>(it - upper_bounds.begin());
}

double BucketMap::lambda_for(double statistic) const {
  if (statistic <= 0.0) return 0.0;
  return lambdas[bucket_of(statistic)];
}

void BucketMap::validate() const {
  if (lambdas.empty()) throw ParameterError("bucket map has no buckets");
  if (upper_bounds.size() + 1 != lambdas.size()) {
    throw ParameterError("bucket map needs one bound fewer than lambdas");
  }
  for (std::size_t i = 1; i < upper_bounds.size(); ++i) {
    if (!(upper_bounds[i - 1] < upper_bounds[i])) {
      throw ParameterError("bucket boundaries must be strictly ascending");
    }
  }
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw ParameterError("interpolation weight " + std::to_string(l) + " outside [0, 1]");
    }
  }
}

BucketMap make_buckets(BucketScheme scheme, std::vector<std::pair<double, double>> stat_weight,
                       double c_min, double initial_lambda) {
  std::erase_if(stat_weight, [](const auto& p) { return p.first <= 0.0; });
  std::sort(stat_weight.begin(), stat_weight.end());

  BucketMap map;
  map.scheme = scheme;
  map.c_min = c_min;
  map.lambdas.clear();

  struct Open {
    double weight = 0.0;
    double weighted_stat = 0.0;
    double last_stat = 0.0;
  };
  std::vector<Open> closed;
  Open current;
  for (std::size_t i = 0; i < stat_weight.size(); ++i) {
    const auto [stat, weight] = stat_weight[i];
    current.weight += weight;
    current.weighted_stat += stat * weight;
    current.last_stat = stat;
    const bool boundary = i + 1 == stat_weight.size() || stat_weight[i + 1].first != stat;
    if (boundary && current.weight >= c_min) {
      closed.push_back(current);
      current = Open{};
    }
  }
  if (current.weight > 0.0) {
    if (closed.empty()) {
      closed.push_back(current);
    } else {
      auto& last = closed.back();
      last.weight += current.weight;
      last.weighted_stat += current.weighted_stat;
      last.last_stat = current.last_stat;
    }
  }
  if (closed.empty()) closed.push_back(Open{});

  for (std::size_t b = 0; b < closed.size(); ++b) {
    if (b + 1 < closed.size()) map.upper_bounds.push_back(closed[b].last_stat);
    map.lambdas.push_back(initial_lambda);
    map.weights.push_back(closed[b].weight);
    map.mean_statistic.push_back(closed[b].weight > 0 ? closed[b].weighted_stat / closed[b].weight
                                                      : 0.0);
  }
  map.validate();
  return map;
}

InterpolatedModel::InterpolatedModel(TablePtr table, std::vector<BucketMap> buckets)
    : table_(std::move(table)), buckets_(std::move(buckets)) {
  if (buckets_.empty() || static_cast<int>(buckets_.size()) > table_->order()) {
    throw ParameterError("interpolated model needs one bucket map per order");
  }
  for (const auto& b : buckets_) b.validate();
}

double InterpolatedModel::lambda(int k, std::span<const WordId> context) const {
  auto h = context.last(static_cast<std::size_t>(k - 1));
  const auto& map = buckets_.at(static_cast<std::size_t>(k - 1));
  return map.lambda_for(bucket_statistic(map.scheme, *table_, h));
}

double InterpolatedModel::prob_at(int k, std::span<const WordId> context, WordId word) const {
  double p = 1.0 / static_cast<double>(table_->predictable_size());
  for (int j = 1; j <= k; ++j) {
    auto h = context.last(static_cast<std::size_t>(j - 1));
    const auto* row = table_->find_row(h);
    if (row == nullptr || row->total == 0) continue;
    const auto& map = buckets_[static_cast<std::size_t>(j - 1)];
    const double lambda = map.lambda_for(row_statistic(map.scheme, *row));
    const double ml = static_cast<double>(successor_count(*table_, *row, j, word)) /
                      static_cast<double>(row->total);
    p = lambda * ml + (1.0 - lambda) * p;
  }
  return p;
}

double InterpolatedModel::prob(std::span<const WordId> context, WordId word) const {
  return prob_at(order(), context, word);
}

}  // namespace smoothlm
