#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "smoothlm/common.hpp"
#include "smoothlm/vocabulary.hpp"

namespace smoothlm {

using TokenSentences = std::vector<std::vector<std::string>>;

// Splits on runs of whitespace. No other normalization.
std::vector<std::string> tokenize(std::string_view line, bool lowercase = false);

// One sentence per line; blank lines are skipped.
TokenSentences read_sentences(std::istream& in, bool lowercase = false);
TokenSentences read_sentences_file(const std::string& path, bool lowercase = false);

// Id sequences, each terminated by EOS. BOS never appears here; it is added as
// padding by the counting and scoring code.
struct EncodedCorpus {
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<Sentence> sentences;
  Count word_count = 0;  // predicted tokens, EOS included

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

EncodedCorpus encode(const TokenSentences& sentences, std::shared_ptr<const Vocabulary> vocab);
// Inverse of encode for in-vocabulary sentences; drops the trailing EOS.
std::vector<std::string> decode(const Sentence& sentence, const Vocabulary& vocab);

EncodedCorpus truncate_corpus(const EncodedCorpus& corpus, std::size_t sentences);
EncodedCorpus concatenate(const EncodedCorpus& a, const EncodedCorpus& b);

struct SplitSpec {
  std::size_t train_sentences = 0;
  Count dev1_words = 50000;
  Count dev2_words = 50000;
  Count test_words = 50000;
  std::uint64_t shuffle_seed = 0;
  // Granularity of the seeded shuffle; held-out segments are runs of blocks.
  std::size_t block_sentences = 100;
};

// Sentence indices of each segment, in the order they were drawn.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev1;
  std::vector<std::size_t> dev2;
  std::vector<std::size_t> test;
};

// `lengths[i]` is the number of predicted tokens of sentence i (EOS included).
// Blocks of consecutive sentences are shuffled with the seed; dev1, dev2 and
// test are then filled sentence by sentence until each word target is reached,
// and train takes the requested number of sentences from what remains.
SplitIndices split_indices(const std::vector<Count>& lengths, const SplitSpec& spec);

struct CorpusSplit {
  EncodedCorpus train;
  EncodedCorpus dev1;
  EncodedCorpus dev2;
  EncodedCorpus test;
};

CorpusSplit split_corpus(const EncodedCorpus& corpus, const SplitSpec& spec);
EncodedCorpus select(const EncodedCorpus& corpus, const std::vector<std::size_t>& indices);
TokenSentences select(const TokenSentences& corpus, const std::vector<std::size_t>& indices);

// Deterministic 64-bit generator helpers; std::shuffle's algorithm is
// implementation-defined, these are not.
std::uint64_t splitmix64(std::uint64_t& state);
void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed);

}  // namespace smoothlm
