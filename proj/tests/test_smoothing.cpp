#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "smoothlm/additive.hpp"
#include "smoothlm/interpolated.hpp"
#include "smoothlm/katz.hpp"
#include "smoothlm/one_count.hpp"
#include "smoothlm/trainer.hpp"

using namespace smoothlm;

namespace {

constexpr WordId A = 0, B = 1, EOS = 2, BOS = 3;

double p(const LanguageModel& m, std::initializer_list<WordId> ctx, WordId w) {
  std::vector<WordId> c(ctx);
  return m.prob(c, w);
}

// Straightforward recursion written from the formula, used as an oracle.
double one_count_oracle(const NGramTable& t, const OneCountParams& op, std::vector<WordId> ctx,
                        WordId w) {
  double lower = 1.0 / static_cast<double>(t.predictable_size());
  if (!ctx.empty()) lower = one_count_oracle(t, op, {ctx.begin() + 1, ctx.end()}, w);
  const std::size_t k = ctx.size() + 1;
  const auto stats = context_stats(t, ctx);
  const double alpha = op.gamma[k] * (static_cast<double>(stats.one_count) + op.beta[k]);
  std::vector<WordId> gram = ctx;
  gram.push_back(w);
  return (static_cast<double>(t.count(gram)) + alpha * lower) / (static_cast<double>(stats.total) + alpha);
}

}  // namespace

TEST_CASE("maximum likelihood and uniform models") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  MaximumLikelihoodModel ml(t);
  CHECK(p(ml, {A}, B) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p(ml, {EOS}, B) == 0.0);
  UniformModel u(2, 3);
  CHECK(p(u, {A}, B) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("sequence log probability") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  MaximumLikelihoodModel ml(t);
  const Sentence abe{A, B, EOS};
  CHECK(sequence_logprob(ml, abe, BOS) == doctest::Approx(3.0 * std::log2(2.0 / 3.0)).epsilon(1e-12));
  UniformModel u(2, 3);
  CHECK(sequence_logprob(u, abe, BOS) == doctest::Approx(-4.754887502163468));
  const Sentence ae{A, EOS};
  CHECK(sequence_logprob(ml, ae, BOS) ==
        doctest::Approx(std::log2(p(ml, {BOS}, A)) + std::log2(p(ml, {A}, EOS))));
}

TEST_CASE("additive smoothing") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  AdditiveModel plus_one(t, 1.0);
  CHECK(p(plus_one, {A}, B) == doctest::Approx(0.5).epsilon(1e-12));
  for (WordId w = 0; w < 3; ++w) CHECK(p(plus_one, {EOS}, w) == doctest::Approx(1.0 / 3.0));
  AdditiveModel tiny(t, 1e-9);
  MaximumLikelihoodModel ml(t);
  CHECK(std::fabs(p(tiny, {A}, B) - p(ml, {A}, B)) < 1e-6);
  CHECK_THROWS_AS(AdditiveModel(t, 0.0), ParameterError);
  CHECK_THROWS_AS(AdditiveModel(t, -1.0), ParameterError);
}

TEST_CASE("baseline interpolation") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  InterpolatedModel half(t, {BucketMap::single(0.3), BucketMap::single(0.5)});
  CHECK(p(half, {A}, B) == doctest::Approx(0.5).epsilon(1e-12));

  InterpolatedModel ones(t, {BucketMap::single(1.0), BucketMap::single(1.0)});
  MaximumLikelihoodModel ml(t);
  for (WordId h : {A, B, BOS}) {
    for (WordId w = 0; w < 3; ++w) CHECK(std::fabs(p(ones, {h}, w) - p(ml, {h}, w)) <= 1e-12);
  }
  InterpolatedModel top_zero(t, {BucketMap::single(0.7), BucketMap::single(0.0)});
  for (WordId w = 0; w < 3; ++w) CHECK(p(top_zero, {A}, w) == top_zero.prob_at(1, {}, w));

  // Unseen context: lambda is 0 and the lower order is returned exactly.
  InterpolatedModel any(t, {BucketMap::single(0.4), BucketMap::single(0.9)});
  std::vector<WordId> eos{EOS};
  CHECK(any.lambda(2, eos) == 0.0);
  CHECK(p(any, {EOS}, A) == any.prob_at(1, {}, A));

  CHECK_THROWS_AS(BucketMap::single(1.5), ParameterError);
  CHECK_THROWS_AS(BucketMap::single(-0.1), ParameterError);
}

TEST_CASE("bucket statistics") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  std::vector<WordId> a{A}, eos{EOS};
  CHECK(bucket_statistic(BucketScheme::ContextCount, *t, a) == 3.0);
  CHECK(bucket_statistic(BucketScheme::AverageCount, *t, a) == 1.5);
  CHECK(bucket_statistic(BucketScheme::ContextCount, *t, eos) == 0.0);
  CHECK(bucket_statistic(BucketScheme::AverageCount, *t, eos) == 0.0);

  // Doubling the corpus doubles the average count of every context.
  auto twice = fixtures::toy_tokens();
  const auto more = fixtures::toy_tokens();
  twice.insert(twice.end(), more.begin(), more.end());
  const auto t2 = fixtures::table_of(fixtures::encode_all(twice), 2);
  CHECK(bucket_statistic(BucketScheme::AverageCount, *t2, a) == 3.0);
}

TEST_CASE("bucket construction") {
  // statistic, weight
  std::vector<std::pair<double, double>> sw = {{1, 1}, {1, 1}, {2, 1}, {3, 1}, {3, 1}, {3, 1},
                                               {4, 1}, {5, 1}, {0, 7}};
  const auto map = make_buckets(BucketScheme::ContextCount, sw, 2.0);
  // {1,1} | {2,3,3,3} | {4,5} -- ties stay together, weights reach c_min.
  REQUIRE(map.size() == 3);
  CHECK(map.upper_bounds == std::vector<double>{1, 3});
  CHECK(map.weights == std::vector<double>{2, 4, 2});
  CHECK(map.bucket_of(1.0) == 0);
  CHECK(map.bucket_of(1.5) == 1);
  CHECK(map.bucket_of(3.0) == 1);
  CHECK(map.bucket_of(100.0) == 2);
  CHECK(map.lambda_for(0.0) == 0.0);

  // A short tail merges into its predecessor.
  const auto merged = make_buckets(BucketScheme::ContextCount, {{1, 3}, {2, 3}, {3, 1}}, 3.0);
  CHECK(merged.size() == 2);
  CHECK(merged.weights.back() == 4.0);

  const auto single = make_buckets(BucketScheme::ContextCount, {{1, 1}}, 100.0);
  CHECK(single.size() == 1);
}

TEST_CASE("katz on the toy corpus falls back to undiscounted counts") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  KatzParams kp;
  kp.delta = 1.0;
  kp.k[2] = 1;
  KatzModel katz(t, kp);
  CHECK(katz.discount(2, 1) == 1.0);  // mu = 2 * 3 / 3 >= 1
  CHECK(katz.discount(2, 2) == 1.0);
  double sum = 0.0;
  for (WordId w = 0; w < 3; ++w) sum += p(katz, {A}, w);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // Seen successors keep their ratio; the unseen one stays positive.
  CHECK(p(katz, {A}, B) / p(katz, {A}, EOS) == doctest::Approx(2.0));
  CHECK(p(katz, {A}, A) > 0.0);
  CHECK(katz.backoff_weight(2, std::vector<WordId>{EOS}) == 1.0);
}

TEST_CASE("katz passes high counts through undiscounted") {
  const auto corpus = fixtures::encode_all(fixtures::zipf_text(2000, 60, 17));
  const auto t = fixtures::table_of(corpus, 2);
  KatzParams kp;
  kp.delta = 0.5;
  kp.k[2] = 3;
  KatzModel katz(t, kp);
  const double predictable = static_cast<double>(t->predictable_size());
  int checked = 0;
  int floored = 0;
  for (const auto& row : t->rows(2)) {
    std::vector<WordId> ctx{row.context[0]};
    const auto succ = t->successors(row, 2);
    bool has_low = false;
    for (const auto& s : succ) has_low = has_low || katz.discount(2, s.count) < 1.0;
    // With nothing discounted the row keeps no leftover mass, so seen words
    // are scaled by c / (c + delta * unseen) to leave room for the rest.
    const double c = static_cast<double>(row.total);
    const double unseen = predictable - static_cast<double>(succ.size());
    const double scale = has_low ? 1.0 : c / (c + kp.delta * unseen);
    if (!has_low) ++floored;
    for (const auto& s : succ) {
      if (s.count > 3) {
        CHECK(katz.prob(ctx, s.word) ==
              doctest::Approx(scale * static_cast<double>(s.count) / c).epsilon(1e-12));
        ++checked;
      } else {
        CHECK(katz.discount(2, s.count) <= 1.0);
      }
    }
  }
  CHECK(floored > 0);
  CHECK(checked > 50);
  CHECK(katz.discount(2, 1) < 1.0);
  KatzParams bad = kp;
  bad.k[2] = 0;
  CHECK_THROWS_AS(KatzModel(t, bad), ParameterError);
  bad = kp;
  bad.delta = 0.0;
  CHECK_THROWS_AS(KatzModel(t, bad), ParameterError);
}

TEST_CASE("one-count recursion") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  OneCountParams op;
  op.gamma[1] = 1.0;
  op.beta[1] = 1.0;
  op.gamma[2] = 1.0;
  op.beta[2] = 0.0;
  OneCountModel m(t, op);
  CHECK(m.prob_at(1, {}, B) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(p(m, {A}, B) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(p(m, {A}, B) == doctest::Approx(one_count_oracle(*t, op, {A}, B)).epsilon(1e-12));

  const auto corpus = fixtures::encode_all(fixtures::zipf_text(500, 30, 2));
  const auto t3 = fixtures::table_of(corpus, 3);
  OneCountParams op3;
  for (int k = 1; k <= 3; ++k) {
    op3.beta[static_cast<std::size_t>(k)] = 0.3 * k;
    op3.gamma[static_cast<std::size_t>(k)] = 0.7 + 0.2 * k;
  }
  OneCountModel m3(t3, op3);
  for (const auto& ctx : fixtures::seen_contexts(*t3, 40)) {
    for (WordId w = 0; w < 31; w += 5) {
      CHECK(m3.prob(ctx, w) == doctest::Approx(one_count_oracle(*t3, op3, ctx, w)).epsilon(1e-12));
    }
  }

  OneCountParams near_zero;
  for (int k = 1; k <= 2; ++k) {
    near_zero.beta[static_cast<std::size_t>(k)] = 1e-9;
    near_zero.gamma[static_cast<std::size_t>(k)] = 1e-9;
  }
  OneCountModel limit(t, near_zero);
  MaximumLikelihoodModel ml(t);
  for (WordId w = 0; w < 3; ++w) CHECK(std::fabs(p(limit, {A}, w) - p(ml, {A}, w)) < 1e-6);

  OneCountParams bad = op;
  bad.gamma[2] = 0.0;
  CHECK_THROWS_AS(OneCountModel(t, bad), ParameterError);
  bad = op;
  bad.beta[1] = -1.0;  // unigram context has n_1 = 0
  CHECK_THROWS_AS(OneCountModel(t, bad), ParameterError);
}

TEST_CASE("every method is normalized and positive") {
  const auto all = fixtures::zipf_text(1300, 80, 23);
  const TokenSentences train(all.begin(), all.begin() + 1000);
  const TokenSentences held(all.begin() + 1000, all.end());
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(all, VocabularyPolicy::all_words()));
  const auto train_c = encode(train, vocab);
  const auto dev = encode(held, vocab);
  for (int order = 2; order <= 3; ++order) {
    const auto table = fixtures::table_of(train_c, order);
    TrainingData data{table, &dev, &dev};
    auto contexts = fixtures::seen_contexts(*table, 60);
    const WordId bos = vocab->bos();
    contexts.push_back(std::vector<WordId>(static_cast<std::size_t>(order - 1), bos));
    // Unseen contexts, including ones an actual sentence can never produce.
    contexts.push_back(std::vector<WordId>(static_cast<std::size_t>(order - 1), vocab->eos()));
    std::vector<WordId> odd(static_cast<std::size_t>(order - 1), 79 % vocab->word_count());
    odd.back() = bos;
    contexts.push_back(odd);
    for (Method method : smoothing_methods()) {
      CAPTURE(method_name(method));
      CAPTURE(order);
      const auto model = build_model(method, data, {});
      for (const auto& ctx : contexts) {
        double sum = 0.0;
        double smallest = 1.0;
        for (WordId w = 0; w < vocab->predictable_size(); ++w) {
          const double pr = model->prob(ctx, w);
          sum += pr;
          smallest = std::min(smallest, pr);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(smallest > 0.0);
      }
    }
  }
}
