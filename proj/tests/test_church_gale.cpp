#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "smoothlm/church_gale.hpp"

using namespace smoothlm;

namespace {

double sum_conditional(const ChurchGaleModel& m, std::vector<WordId> ctx) {
  double s = 0.0;
  for (WordId w = 0; w < m.vocab_size(); ++w) s += m.prob(ctx, w);
  return s;
}

}  // namespace

TEST_CASE("church-gale on the toy corpus") {
  const auto t = fixtures::table_of(fixtures::toy_corpus(), 2);
  ChurchGaleModel m(t, 6);
  CHECK(m.num_buckets(2) == 1);
  CHECK(sum_conditional(m, {0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sum_conditional(m, {3}) == doctest::Approx(1.0).epsilon(1e-12));  // BOS
  double uni = 0.0;
  for (WordId w = 0; w < 3; ++w) uni += m.unigram(w);
  CHECK(uni == doctest::Approx(1.0));
  CHECK_THROWS_AS(ChurchGaleModel(t, 0), ParameterError);
}

TEST_CASE("equal counts in one bucket give equal joint probabilities") {
  const auto t = fixtures::table_of(fixtures::encode_all({{"a", "b"}, {"a", "b"}}), 2);
  ChurchGaleModel m(t, 100);
  REQUIRE(m.num_buckets(2) == 1);
  const WordId a = 0, b = 1, eos = 2, bos = 3;
  const std::vector<WordId> g1{bos, a}, g2{a, b}, g3{b, eos};
  CHECK(m.joint(g1) == doctest::Approx(m.joint(g2)).epsilon(1e-12));
  CHECK(m.joint(g2) == doctest::Approx(m.joint(g3)).epsilon(1e-12));
}

TEST_CASE("joint probabilities cover the gram space exactly") {
  const auto corpus = fixtures::encode_all(fixtures::zipf_text(400, 25, 9));
  const auto t = fixtures::table_of(corpus, 3);
  const std::size_t P = t->predictable_size();
  const WordId eos = static_cast<WordId>(P - 1);
  const WordId bos = t->bos();
  ChurchGaleModel m(t, 10);

  // Brute-force enumeration of both gram spaces.
  std::vector<WordId> histories;
  for (WordId h = 0; h < eos; ++h) histories.push_back(h);
  histories.push_back(bos);
  double bigram_sum = 0.0;
  for (WordId h : histories) {
    for (WordId w = 0; w < P; ++w) bigram_sum += m.joint(std::vector<WordId>{h, w});
  }
  CHECK(std::fabs(bigram_sum - 1.0) < 1e-9);
  CHECK(std::fabs(m.joint_total(2) - 1.0) < 1e-9);

  double trigram_sum = 0.0;
  for (WordId u : histories) {
    for (WordId v = 0; v < eos; ++v) {
      for (WordId w = 0; w < P; ++w) trigram_sum += m.joint(std::vector<WordId>{u, v, w});
    }
  }
  for (WordId w = 0; w < P; ++w) trigram_sum += m.joint(std::vector<WordId>{bos, bos, w});
  CHECK(std::fabs(trigram_sum - 1.0) < 1e-9);
  CHECK(std::fabs(m.joint_total(3) - 1.0) < 1e-9);

  // n_0 plus the seen grams of every bucket add up to the size of the space.
  for (int k = 2; k <= 3; ++k) {
    Count space = 0;
    for (std::size_t b = 0; b < m.num_buckets(k); ++b) {
      const auto& bt = m.bucket_table(k, b);
      space += bt.n0;
      for (Count n : bt.counts) space += n;
    }
    const Count expected = k == 2 ? static_cast<Count>(P * P)
                                  : static_cast<Count>((P * (P - 1) + 1) * P);
    CHECK(space == expected);
  }
}

TEST_CASE("buckets hold at least c_min seen grams and conserve mass") {
  const auto corpus = fixtures::encode_all(fixtures::zipf_text(1500, 60, 4));
  const auto t = fixtures::table_of(corpus, 2);
  for (Count cmin : {1, 7, 50, 400}) {
    ChurchGaleModel m(t, cmin);
    Count seen_total = 0;
    for (std::size_t b = 0; b < m.num_buckets(2); ++b) {
      const auto& bt = m.bucket_table(2, b);
      Count seen = 0;
      for (Count n : bt.counts) seen += n;
      seen_total += seen;
      if (m.num_buckets(2) > 1) CHECK(seen >= cmin);
      double mass = static_cast<double>(bt.n0) * bt.rstar_unseen;
      for (std::size_t i = 0; i < bt.ranks.size(); ++i) mass += static_cast<double>(bt.counts[i]) * bt.rstar[i];
      CHECK(mass == doctest::Approx(static_cast<double>(bt.tokens)).epsilon(1e-12));
    }
    CHECK(seen_total == static_cast<Count>(t->num_grams(2)));
    if (cmin == 1) CHECK(m.num_buckets(2) > 10);
  }
}

TEST_CASE("church-gale conditionals are normalized, including odd histories") {
  const auto corpus = fixtures::encode_all(fixtures::zipf_text(600, 40, 31));
  const auto t = fixtures::table_of(corpus, 3);
  ChurchGaleModel m(t, 20);
  const WordId bos = t->bos();
  const WordId eos = bos - 1;
  for (const auto& ctx : fixtures::seen_contexts(*t, 80)) {
    CHECK(sum_conditional(m, ctx) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(sum_conditional(m, {bos, bos}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sum_conditional(m, {3, 5}) == doctest::Approx(1.0).epsilon(1e-9));
  // Histories outside the gram space fall back to the unigram distribution.
  CHECK(m.prob(std::vector<WordId>{eos, 3}, 2) == m.unigram(2));
  CHECK(m.prob(std::vector<WordId>{4, bos}, 2) == m.unigram(2));
}

TEST_CASE("church-gale budget guard") {
  const auto t = fixtures::table_of(fixtures::encode_all(fixtures::zipf_text(200, 30, 1)), 2);
  CHECK_THROWS_AS(ChurchGaleModel(t, 5, 10.0), DataError);
}

TEST_CASE("church-gale with no training data is uniform") {
  EncodedCorpus empty;
  empty.vocab = std::make_shared<const Vocabulary>(std::vector<std::string>{"a", "b"}, false);
  const auto t = fixtures::table_of(empty, 2);
  ChurchGaleModel m(t, 3);
  for (WordId w = 0; w < 3; ++w) CHECK(m.prob(std::vector<WordId>{0}, w) == doctest::Approx(1.0 / 3.0));
}
