#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "smoothlm/corpus.hpp"
#include "smoothlm/ngram_table.hpp"
#include "smoothlm/model.hpp"

namespace fixtures {

using namespace smoothlm;

// {a b, a b, b a}
inline TokenSentences toy_tokens() { return {{"a", "b"}, {"a", "b"}, {"b", "a"}}; }

inline EncodedCorpus encode_all(const TokenSentences& tokens, bool with_unk = false) {
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::build(tokens, VocabularyPolicy::all_words(), with_unk));
  return encode(tokens, vocab);
}

inline EncodedCorpus toy_corpus() { return encode_all(toy_tokens()); }

inline TablePtr table_of(const EncodedCorpus& corpus, int order) {
  return std::make_shared<const NGramTable>(accumulate_counts(corpus, order));
}

inline double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Sentences of Zipf-distributed words "w0".."w{vocab-1}" with a mild bigram
// dependency, so contexts differ in how many successors they have.
inline TokenSentences zipf_text(std::size_t sentences, std::size_t vocab, std::uint64_t seed,
                                std::size_t max_len = 12) {
  std::vector<double> cdf(vocab);
  double total = 0.0;
  for (std::size_t i = 0; i < vocab; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    cdf[i] = total;
  }
  for (auto& c : cdf) c /= total;
  auto draw = [&](std::uint64_t& st) {
    const double u = uniform01(st);
    std::size_t i = 0;
    while (i + 1 < vocab && cdf[i] < u) ++i;
    return i;
  };
  std::uint64_t state = seed;
  TokenSentences out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t len = 1 + static_cast<std::size_t>(uniform01(state) * static_cast<double>(max_len));
    std::vector<std::string> sent;
    std::size_t prev = draw(state);
    sent.push_back("w" + std::to_string(prev));
    for (std::size_t i = 1; i < len; ++i) {
      std::size_t w = draw(state);
      if (uniform01(state) < 0.3) w = (prev * 7 + 3) % vocab;
      sent.push_back("w" + std::to_string(w));
      prev = w;
    }
    out.push_back(std::move(sent));
  }
  return out;
}

// Distinct contexts of length order-1 seen in the table, plus BOS-padded ones.
inline std::vector<std::vector<WordId>> seen_contexts(const NGramTable& table, std::size_t limit) {
  std::vector<std::vector<WordId>> out;
  const int k = table.order();
  for (const auto& row : table.rows(k)) {
    out.emplace_back(row.context.begin(), row.context.begin() + (k - 1));
    if (out.size() >= limit) break;
  }
  return out;
}

}  // namespace fixtures
