#include <doctest.h>

#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "smoothlm/ngram_table.hpp"

using namespace smoothlm;

namespace {

// Vocabulary of the toy corpus: a=0, b=1, EOS=2, BOS=3.
constexpr WordId A = 0, B = 1, EOS = 2, BOS = 3;

Count c(const NGramTable& t, std::initializer_list<WordId> gram) {
  std::vector<WordId> g(gram);
  return t.count(g);
}

}  // namespace

TEST_CASE("toy bigram counts") {
  const auto t = accumulate_counts(fixtures::toy_corpus(), 2);
  CHECK(t.predictable_size() == 3);
  CHECK(c(t, {A, B}) == 2);
  CHECK(c(t, {B, EOS}) == 2);
  CHECK(c(t, {BOS, A}) == 2);
  CHECK(c(t, {BOS, B}) == 1);
  CHECK(c(t, {B, A}) == 1);
  CHECK(c(t, {A, EOS}) == 1);
  CHECK(c(t, {A, A}) == 0);
  CHECK(c(t, {A}) == 3);
  CHECK(c(t, {B}) == 3);
  CHECK(c(t, {EOS}) == 3);
  CHECK(c(t, {BOS}) == 0);
  CHECK(t.total_words() == 9);
  CHECK(t.num_grams(2) == 6);
}

TEST_CASE("trigram padding uses two BOS ids") {
  const auto corpus = fixtures::encode_all({{"a"}});
  const auto t = accumulate_counts(corpus, 3);
  const WordId a = 0, eos = 1, bos = 2;
  CHECK(c(t, {bos, bos, a}) == 1);
  CHECK(c(t, {bos, a, eos}) == 1);
  CHECK(t.num_grams(3) == 2);
  CHECK(t.total_words() == 2);
}

TEST_CASE("empty corpus gives an empty table") {
  EncodedCorpus empty;
  empty.vocab = std::make_shared<const Vocabulary>(std::vector<std::string>{"a"}, false);
  const auto t = accumulate_counts(empty, 2);
  CHECK(t.total_words() == 0);
  CHECK(t.num_grams(2) == 0);
  CHECK(count_of_counts(t, 2).empty());
  CHECK_THROWS_AS(accumulate_counts(empty, 4), ParameterError);
  CHECK_THROWS_AS(accumulate_counts(empty, 0), ParameterError);
}

TEST_CASE("context statistics") {
  const auto t = accumulate_counts(fixtures::toy_corpus(), 2);
  std::vector<WordId> a{A}, bos{BOS}, eos{EOS};
  auto s = context_stats(t, a);
  CHECK(s.total == 3);
  CHECK(s.distinct == 2);
  CHECK(s.one_count == 1);
  CHECK(s.average == doctest::Approx(1.5));
  s = context_stats(t, bos);
  CHECK(s.total == 3);
  CHECK(s.distinct == 2);
  CHECK(s.one_count == 1);
  CHECK(s.average == doctest::Approx(1.5));
  s = context_stats(t, eos);
  CHECK(s.total == 0);
  CHECK(s.distinct == 0);
  CHECK(s.one_count == 0);
  CHECK(s.average == 0.0);
}

TEST_CASE("count of counts") {
  const auto t = accumulate_counts(fixtures::toy_corpus(), 2);
  const auto bi = count_of_counts(t, 2);
  CHECK(bi.n == std::map<Count, Count>{{1, 3}, {2, 3}});
  CHECK(bi.tokens() == 9);
  CHECK(bi.types() == 6);
  const auto uni = count_of_counts(t, 1);
  CHECK(uni.n == std::map<Count, Count>{{3, 3}});
}

TEST_CASE("dump lists grams with counts") {
  const auto t = accumulate_counts(fixtures::toy_corpus(), 2);
  std::ostringstream out;
  t.dump(out);
  const std::string s = out.str();
  CHECK(s.find("0 1\t2\n") != std::string::npos);
  CHECK(s.find("3 0\t2\n") != std::string::npos);
}

TEST_CASE("marginals are consistent across orders") {
  const auto corpus = fixtures::encode_all(fixtures::zipf_text(300, 40, 5));
  const auto t = accumulate_counts(corpus, 3);
  for (int k = 2; k <= 3; ++k) {
    std::map<std::vector<WordId>, Count> suffix_sum;
    for (const auto& row : t.rows(k)) {
      Count total = 0;
      for (const auto& s : t.successors(row, k)) {
        total += s.count;
        std::vector<WordId> lower(row.context.begin() + 1, row.context.begin() + (k - 1));
        lower.push_back(s.word);
        suffix_sum[lower] += s.count;
      }
      CHECK(total == row.total);
    }
    // Dropping the oldest word of every k-gram gives the (k-1)-gram counts.
    for (const auto& [gram, count] : suffix_sum) CHECK(t.count(gram) == count);
  }
  CHECK(t.total_words() == corpus.word_count);
}
