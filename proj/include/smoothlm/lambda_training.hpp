#pragma once

#include <vector>

#include "smoothlm/corpus.hpp"
#include "smoothlm/interpolated.hpp"

namespace smoothlm {

struct EmOptions {
  int max_iterations = 200;
  // Stop once an iteration improves the held-out entropy by less than this
  // many bits per word. 0 runs max_iterations.
  double tolerance = 1e-6;
};

// One (possibly repeated) event of lambda training at a fixed order.
struct LambdaEvent {
  double ml;      // P_ML(w | h), 0 when undefined
  double lower;   // P_{k-1}(w | h')
  std::size_t bucket;
  double weight = 1.0;
};

struct EmResult {
  std::vector<double> lambdas;
  // Entropy (bits/word over all events) before the first update and after each iteration.
  std::vector<double> bits_per_word;
  int iterations = 0;
};

// EM for mixture weights: rho = l P_ML / (l P_ML + (1 - l) P_lower), then each
// bucket's lambda becomes the weighted mean of rho over its events. Buckets
// without events copy the lambda of the nearest lower bucket (or keep their
// initial value if there is none). `constant_log2` and `constant_weight`
// account for events outside every bucket (their probability is fixed).
EmResult em_train_lambdas(const std::vector<LambdaEvent>& events, std::vector<double> initial,
                          double constant_log2, double constant_weight,
                          const EmOptions& options = {});

struct InterpolationTraining {
  std::shared_ptr<InterpolatedModel> model;
  std::vector<EmResult> per_order;  // index k-1
};

// Held-out interpolation: for k = 1..n, buckets are formed from the held-out
// events' statistics (computed on the training counts) and their lambdas are
// trained by EM with the orders below k frozen.
InterpolationTraining train_heldout_interpolation(TablePtr table, BucketScheme scheme,
                                                  double c_min, const EncodedCorpus& heldout,
                                                  const EmOptions& options = {});

// Deleted interpolation with one word deleted at a time: each training event
// uses P_ML computed with its own occurrence removed, (c(h w) - 1) / (c(h) - 1),
// and is bucketed by the undeleted statistic. Events with c(h) = 1 have P_ML 0.
InterpolationTraining train_deleted_interpolation(TablePtr table, BucketScheme scheme,
                                                  double c_min, const EmOptions& options = {});

}  // namespace smoothlm
