#pragma once

#include <utility>
#include <vector>

#include "smoothlm/model.hpp"

namespace smoothlm {

enum class BucketScheme {
  ContextCount,  // c(context)
  AverageCount,  // c(context) / |{w : c(context w) > 0}|
};

std::string_view scheme_name(BucketScheme scheme);

// Statistic used to pick a context's bucket; 0 for unseen contexts.
double bucket_statistic(BucketScheme scheme, const NGramTable& table,
                        std::span<const WordId> context);

// Tied interpolation weights for one order.
//
// Bucket b covers statistics in (upper_bounds[b-1], upper_bounds[b]]; the last
// bucket is open above. Contexts with statistic 0 always get lambda 0.
struct BucketMap {
  BucketScheme scheme = BucketScheme::ContextCount;
  std::vector<double> upper_bounds;
  std::vector<double> lambdas{0.5};
  double c_min = 0.0;
  // Filled by make_buckets: training mass and mean statistic per bucket.
  std::vector<double> weights;
  std::vector<double> mean_statistic;

  static BucketMap single(double lambda);

  std::size_t size() const { return lambdas.size(); }
  std::size_t bucket_of(double statistic) const;
  double lambda_for(double statistic) const;
  // Throws ParameterError on unsorted bounds or lambdas outside [0, 1].
  void validate() const;
};

// Greedy partition in ascending statistic: a bucket closes once it holds at
// least c_min weight and the next statistic differs; a final bucket short of
// c_min is merged into its predecessor. Entries with statistic <= 0 are ignored.
BucketMap make_buckets(BucketScheme scheme, std::vector<std::pair<double, double>> stat_weight,
                       double c_min, double initial_lambda = 0.5);

// Jelinek-Mercer recursion
//   P_k(w|h) = lambda(h) P_ML(w|h) + (1 - lambda(h)) P_{k-1}(w|h')
// ending in the uniform distribution. One BucketMap per order, lowest first.
class InterpolatedModel final : public LanguageModel {
 public:
  InterpolatedModel(TablePtr table, std::vector<BucketMap> buckets);

  int order() const override { return static_cast<int>(buckets_.size()); }
  std::size_t vocab_size() const override { return table_->predictable_size(); }
  double prob(std::span<const WordId> context, WordId word) const override;

  // P_k(word | last k-1 ids of context); k = 0 is the uniform distribution.
  double prob_at(int k, std::span<const WordId> context, WordId word) const;
  double lambda(int k, std::span<const WordId> context) const;

  const std::vector<BucketMap>& buckets() const { return buckets_; }
  const NGramTable& table() const { return *table_; }

 private:
  TablePtr table_;
  std::vector<BucketMap> buckets_;
};

}  // namespace smoothlm
