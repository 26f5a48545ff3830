#include "smoothlm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace smoothlm {

std::vector<std::string> tokenize(std::string_view line, bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) {
      std::string token(line.substr(start, i - start));
      if (lowercase) {
        for (auto& ch : token) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

TokenSentences read_sentences(std::istream& in, bool lowercase) {
  TokenSentences sentences;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line, lowercase);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return sentences;
}

TokenSentences read_sentences_file(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path + "'");
  return read_sentences(in, lowercase);
}

EncodedCorpus encode(const TokenSentences& sentences, std::shared_ptr<const Vocabulary> vocab) {
  EncodedCorpus corpus;
  corpus.vocab = vocab;
  corpus.sentences.reserve(sentences.size());
  for (const auto& tokens : sentences) {
    Sentence ids;
    ids.reserve(tokens.size() + 1);
    for (const auto& token : tokens) {
      if (token == Vocabulary::kBos || token == Vocabulary::kEos) {
        throw DataError("reserved token '" + token + "' in input text");
      }
      if (auto id = vocab->find(token)) {
        ids.push_back(*id);
      } else if (vocab->has_unk()) {
        ids.push_back(vocab->unk());
      } else {
        throw DataError("OOV token '" + token + "'");
      }
    }
    ids.push_back(vocab->eos());
    corpus.word_count += static_cast<Count>(ids.size());
    corpus.sentences.push_back(std::move(ids));
  }
  return corpus;
}

std::vector<std::string> decode(const Sentence& sentence, const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  for (WordId id : sentence) {
    if (id == vocab.eos()) break;
    tokens.push_back(vocab.token(id));
  }
  return tokens;
}

EncodedCorpus truncate_corpus(const EncodedCorpus& corpus, std::size_t sentences) {
  if (sentences > corpus.size()) {
    throw DataError("cannot truncate to " + std::to_string(sentences) + " sentences; only " +
                    std::to_string(corpus.size()) + " available");
  }
  EncodedCorpus out;
  out.vocab = corpus.vocab;
  out.sentences.assign(corpus.sentences.begin(),
                       corpus.sentences.begin() + static_cast<std::ptrdiff_t>(sentences));
  for (const auto& s : out.sentences) out.word_count += static_cast<Count>(s.size());
  return out;
}

EncodedCorpus concatenate(const EncodedCorpus& a, const EncodedCorpus& b) {
  EncodedCorpus out = a;
  out.sentences.insert(out.sentences.end(), b.sentences.begin(), b.sentences.end());
  out.word_count += b.word_count;
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
  std::uint64_t state = seed;
  for (std::size_t i = items.size(); i > 1; --i) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = splitmix64(state);
    } while (r >= limit);
    std::swap(items[i - 1], items[r % bound]);
  }
}

SplitIndices split_indices(const std::vector<Count>& lengths, const SplitSpec& spec) {
  if (spec.block_sentences == 0) throw ParameterError("block_sentences must be positive");
  const std::size_t n = lengths.size();
  const std::size_t num_blocks = (n + spec.block_sentences - 1) / spec.block_sentences;
  std::vector<std::size_t> blocks(num_blocks);
  std::iota(blocks.begin(), blocks.end(), 0);
  seeded_shuffle(blocks, spec.shuffle_seed);

  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t b : blocks) {
    const std::size_t end = std::min(n, (b + 1) * spec.block_sentences);
    for (std::size_t i = b * spec.block_sentences; i < end; ++i) order.push_back(i);
  }

  const Count available = std::accumulate(lengths.begin(), lengths.end(), Count{0});
  const Count needed_words = spec.dev1_words + spec.dev2_words + spec.test_words;

  SplitIndices out;
  std::size_t next = 0;
  auto fill = [&](std::vector<std::size_t>& segment, Count target) {
    Count words = 0;
    while (words < target) {
      if (next == order.size()) {
        throw DataError("insufficient data: held-out segments need " + std::to_string(needed_words) +
                        " words, corpus has " + std::to_string(available));
      }
      segment.push_back(order[next]);
      words += lengths[order[next]];
      ++next;
    }
  };
  fill(out.dev1, spec.dev1_words);
  fill(out.dev2, spec.dev2_words);
  fill(out.test, spec.test_words);

  const std::size_t remaining = order.size() - next;
  if (remaining < spec.train_sentences) {
    throw DataError("insufficient data: training needs " + std::to_string(spec.train_sentences) +
                    " sentences, " + std::to_string(remaining) + " available after held-out segments");
  }
  out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(next),
                   order.begin() + static_cast<std::ptrdiff_t>(next + spec.train_sentences));
  return out;
}

EncodedCorpus select(const EncodedCorpus& corpus, const std::vector<std::size_t>& indices) {
  EncodedCorpus out;
  out.vocab = corpus.vocab;
  out.sentences.reserve(indices.size());
  for (std::size_t i : indices) {
    out.sentences.push_back(corpus.sentences.at(i));
    out.word_count += static_cast<Count>(out.sentences.back().size());
  }
  return out;
}

TokenSentences select(const TokenSentences& corpus, const std::vector<std::size_t>& indices) {
  TokenSentences out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(corpus.at(i));
  return out;
}

CorpusSplit split_corpus(const EncodedCorpus& corpus, const SplitSpec& spec) {
  std::vector<Count> lengths;
  lengths.reserve(corpus.size());
  for (const auto& s : corpus.sentences) lengths.push_back(static_cast<Count>(s.size()));
  const auto idx = split_indices(lengths, spec);
  return {select(corpus, idx.train), select(corpus, idx.dev1), select(corpus, idx.dev2),
          select(corpus, idx.test)};
}

}  // namespace smoothlm
