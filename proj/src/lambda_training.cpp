#include "smoothlm/lambda_training.hpp"
#include "smoothlm/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

namespace {

double events_bits(const std::vector<LambdaEvent>& events, const std::vector<double>& lambdas,
                   double constant_log2, double total_weight) {
  CompensatedSum log2_sum;
  log2_sum.add(constant_log2);
  for (const auto& e : events) {
    const double l = lambdas[e.bucket];
    log2_sum.add(e.weight * std::log2(l * e.ml + (1.0 - l) * e.lower));
  }
  return -log2_sum.value() / total_weight;
}

void fill_empty_buckets(std::vector<double>& lambdas, const std::vector<double>& mass) {
  for (std::size_t b = 1; b < lambdas.size(); ++b) {
    if (mass[b] <= 0.0) lambdas[b] = lambdas[b - 1];
  }
}

Count count_in(const NGramTable& table, const NGramTable::Row& row, int k, WordId word) {
  auto succ = table.successors(row, k);
  auto it = std::lower_bound(succ.begin(), succ.end(), word,
                             [](const Successor& s, WordId id) { return s.word < id; });
  return (it != succ.end() && it->word == word) ? it->count : 0;
}

// P_{k-1} from the orders trained so far; the uniform distribution when k = 1.
class LowerOrder {
 public:
  LowerOrder(const TablePtr& table, const std::vector<BucketMap>& maps)
      : uniform_(1.0 / static_cast<double>(table->predictable_size())) {
    if (!maps.empty()) model_ = std::make_unique<InterpolatedModel>(table, maps);
  }
  double operator()(std::span<const WordId> context, WordId word) const {
    return model_ ? model_->prob_at(model_->order(), context, word) : uniform_;
  }

 private:
  double uniform_;
  std::unique_ptr<InterpolatedModel> model_;
};

}  // namespace

EmResult em_train_lambdas(const std::vector<LambdaEvent>& events, std::vector<double> initial,
                          double constant_log2, double constant_weight, const EmOptions& options) {
  EmResult result;
  result.lambdas = std::move(initial);
  const std::size_t nb = result.lambdas.size();
  double total_weight = constant_weight;
  std::vector<double> mass(nb, 0.0);
  for (const auto& e : events) {
    if (e.bucket >= nb) throw ParameterError("lambda event refers to a missing bucket");
    mass[e.bucket] += e.weight;
    total_weight += e.weight;
  }
  if (total_weight <= 0.0) return result;

  double bits = events_bits(events, result.lambdas, constant_log2, total_weight);
  result.bits_per_word.push_back(bits);
  std::vector<double> expected(nb);
  for (int it = 0; it < options.max_iterations; ++it) {
    std::fill(expected.begin(), expected.end(), 0.0);
    for (const auto& e : events) {
      const double l = result.lambdas[e.bucket];
      const double top = l * e.ml;
      const double p = top + (1.0 - l) * e.lower;
      if (p > 0.0) expected[e.bucket] += e.weight * top / p;
    }
    for (std::size_t b = 0; b < nb; ++b) {
      if (mass[b] > 0.0) result.lambdas[b] = std::clamp(expected[b] / mass[b], 0.0, 1.0);
    }
    fill_empty_buckets(result.lambdas, mass);
    const double next = events_bits(events, result.lambdas, constant_log2, total_weight);
    result.bits_per_word.push_back(next);
    result.iterations = it + 1;
    const double gain = bits - next;
    bits = next;
    if (options.tolerance > 0.0 && gain < options.tolerance) break;
  }
  return result;
}

InterpolationTraining train_heldout_interpolation(TablePtr table, BucketScheme scheme,
                                                  double c_min, const EncodedCorpus& heldout,
                                                  const EmOptions& options) {
  const int n = table->order();
  const WordId bos = table->bos();
  std::vector<BucketMap> maps;
  InterpolationTraining out;

  for (int k = 1; k <= n; ++k) {
    // (statistic, history, word) for every held-out token at this order.
    struct Token {
      double stat;
      std::vector<WordId> context;
      WordId word;
    };
    std::vector<Token> tokens;
    std::vector<std::pair<double, double>> stat_weight;
    std::vector<WordId> padded;
    for (const auto& s : heldout.sentences) {
      padded.assign(static_cast<std::size_t>(k - 1), bos);
      padded.insert(padded.end(), s.begin(), s.end());
      for (std::size_t i = static_cast<std::size_t>(k - 1); i < padded.size(); ++i) {
        std::span<const WordId> ctx(padded.data() + i - (k - 1), static_cast<std::size_t>(k - 1));
        const double stat = bucket_statistic(scheme, *table, ctx);
        tokens.push_back({stat, {ctx.begin(), ctx.end()}, padded[i]});
        stat_weight.emplace_back(stat, 1.0);
      }
    }
    BucketMap map = make_buckets(scheme, std::move(stat_weight), c_min);

    const LowerOrder lower_order(table, maps);
    std::vector<LambdaEvent> events;
    double constant_log2 = 0.0;
    double constant_weight = 0.0;
    for (const auto& t : tokens) {
      const double lower = lower_order(t.context, t.word);
      if (t.stat <= 0.0) {
        constant_log2 += std::log2(lower);
        constant_weight += 1.0;
        continue;
      }
      const auto* row = table->find_row(t.context);
      const double ml = static_cast<double>(count_in(*table, *row, k, t.word)) /
                        static_cast<double>(row->total);
      events.push_back({ml, lower, map.bucket_of(t.stat), 1.0});
    }
    EmResult em = em_train_lambdas(events, map.lambdas, constant_log2, constant_weight, options);
    map.lambdas = em.lambdas;
    maps.push_back(std::move(map));
    out.per_order.push_back(std::move(em));
  }
  out.model = std::make_shared<InterpolatedModel>(table, std::move(maps));
  return out;
}

InterpolationTraining train_deleted_interpolation(TablePtr table, BucketScheme scheme,
                                                  double c_min, const EmOptions& options) {
  const int n = table->order();
  std::vector<BucketMap> maps;
  InterpolationTraining out;

  for (int k = 1; k <= n; ++k) {
    const auto& rows = table->rows(k);
    std::vector<std::pair<double, double>> stat_weight;
    stat_weight.reserve(rows.size());
    for (const auto& row : rows) {
      stat_weight.emplace_back(bucket_statistic(scheme, *table,
                                                std::span<const WordId>(row.context.data(),
                                                                        static_cast<std::size_t>(k - 1))),
                               static_cast<double>(row.total));
    }
    BucketMap map = make_buckets(scheme, std::move(stat_weight), c_min);

    const LowerOrder lower_order(table, maps);
    std::vector<LambdaEvent> events;
    std::vector<WordId> ctx;
    for (const auto& row : rows) {
      ctx.assign(row.context.begin(), row.context.begin() + (k - 1));
      const double stat = bucket_statistic(scheme, *table, ctx);
      if (stat <= 0.0) continue;
      const std::size_t b = map.bucket_of(stat);
      const double denom = static_cast<double>(row.total - 1);
      for (const auto& s : table->successors(row, k)) {
        const double ml = row.total > 1 ? static_cast<double>(s.count - 1) / denom : 0.0;
        events.push_back({ml, lower_order(ctx, s.word), b, static_cast<double>(s.count)});
      }
    }
    EmResult em = em_train_lambdas(events, map.lambdas, 0.0, 0.0, options);
    map.lambdas = em.lambdas;
    maps.push_back(std::move(map));
    out.per_order.push_back(std::move(em));
  }
  out.model = std::make_shared<InterpolatedModel>(table, std::move(maps));
  return out;
}

}  // namespace smoothlm
