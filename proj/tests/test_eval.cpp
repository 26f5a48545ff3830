#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "smoothlm/evaluation.hpp"
#include "smoothlm/interpolated.hpp"
#include "smoothlm/trainer.hpp"

using namespace smoothlm;

TEST_CASE("cross-entropy of simple models") {
  const auto toy = fixtures::toy_corpus();
  UniformModel uniform(2, 3);
  const auto u = cross_entropy(uniform, toy);
  CHECK(u.bits_per_word == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(u.word_count == 9);
  CHECK(u.perplexity == doctest::Approx(3.0));

  MaximumLikelihoodModel ml(fixtures::table_of(toy, 2));
  const auto r = cross_entropy(ml, toy);
  const double expected = -(6.0 * std::log2(2.0 / 3.0) + 3.0 * std::log2(1.0 / 3.0)) / 9.0;
  CHECK(r.bits_per_word == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r.bits_per_word == doctest::Approx(0.918).epsilon(1e-3));
  CHECK_FALSE(r.zero_event.has_value());
}

TEST_CASE("zero probability is reported, not hidden") {
  const auto toy = fixtures::toy_corpus();
  MaximumLikelihoodModel ml(fixtures::table_of(toy, 2));
  const auto test = encode({{"a", "b"}, {"b", "b"}}, toy.vocab);
  const auto r = cross_entropy(ml, test);
  CHECK(std::isinf(r.bits_per_word));
  REQUIRE(r.zero_event.has_value());
  CHECK(r.zero_event->sentence == 1);
  CHECK(r.zero_event->position == 1);
  CHECK(r.zero_event->word == 1);
  CHECK(r.to_key_value().find("zero_probability=sentence 1 position 1 word 1") != std::string::npos);
}

TEST_CASE("entropy deltas") {
  CHECK(perplexity_change_percent(0.014) == doctest::Approx(0.975).epsilon(1e-3));
  CHECK(perplexity_change_percent(0.0) == 0.0);
  CHECK(perplexity_change_percent(-0.014) == doctest::Approx(-0.966).epsilon(1e-3));

  EvaluationReport a, b;
  a.bits_per_word = 7.514;
  b.bits_per_word = 7.5;
  a.word_count = b.word_count = 100;
  const auto d = entropy_delta(a, b);
  CHECK(d.bits == doctest::Approx(0.014));
  const auto with = with_baseline(a, b);
  REQUIRE(with.delta_perplexity_percent.has_value());
  CHECK(*with.delta_perplexity_percent == doctest::Approx(0.975).epsilon(1e-3));
  b.word_count = 99;
  CHECK_THROWS_AS(entropy_delta(a, b), DataError);
}

TEST_CASE("cross-entropy is additive over concatenated segments") {
  const auto all = fixtures::zipf_text(600, 40, 2);
  const auto corpus = fixtures::encode_all(all);
  const auto train = truncate_corpus(corpus, 400);
  EncodedCorpus s1 = corpus, s2 = corpus;
  s1.sentences.assign(corpus.sentences.begin() + 400, corpus.sentences.begin() + 470);
  s2.sentences.assign(corpus.sentences.begin() + 470, corpus.sentences.end());
  for (auto* s : {&s1, &s2}) {
    s->word_count = 0;
    for (const auto& x : s->sentences) s->word_count += static_cast<Count>(x.size());
  }
  const auto t = fixtures::table_of(train, 2);
  TrainingData data{t, &s1, &s2};
  for (Method m : smoothing_methods()) {
    const auto model = build_model(m, data, {});
    const auto r1 = cross_entropy(*model, s1);
    const auto r2 = cross_entropy(*model, s2);
    const auto r = cross_entropy(*model, concatenate(s1, s2));
    const double mixed = (r1.bits_per_word * r1.word_count + r2.bits_per_word * r2.word_count) /
                         static_cast<double>(r1.word_count + r2.word_count);
    CHECK(std::fabs(r.bits_per_word - mixed) < 1e-9);
    CHECK(r.word_count == s1.word_count + s2.word_count);
    CHECK(r.bits_per_word >= 0.0);
    CHECK(r.perplexity >= 1.0);
  }
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-9));
}
