#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smoothlm/common.hpp"

namespace smoothlm {

struct VocabularyPolicy {
  enum class Kind { AllWords, MinCount };
  Kind kind = Kind::AllWords;
  Count min_count = 1;

  static VocabularyPolicy all_words() { return {}; }
  static VocabularyPolicy min_count_of(Count k);
  // Accepts "all" or "min-count:K".
  static VocabularyPolicy parse(std::string_view text);
  std::string to_string() const;
};

// Bidirectional token <-> id mapping.
//
// Ids are dense: ordinary words first in lexicographic order, then UNK (when
// present), then EOS, and BOS last. Every id below bos() is predictable, so
// predictable_size() == bos() and models iterate [0, predictable_size()).
class Vocabulary {
 public:
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kEos = "</s>";
  static constexpr std::string_view kUnk = "<unk>";

  Vocabulary() : Vocabulary(std::vector<std::string>{}, false) {}
  // `words` must not contain the reserved strings; duplicates are removed.
  Vocabulary(std::vector<std::string> words, bool with_unk);

  // Builds a vocabulary from tokenized sentences. Throws DataError("empty corpus")
  // when the stream holds no tokens. `with_unk` forces an UNK entry under the
  // all-words policy; min-count always has one.
  static Vocabulary build(const std::vector<std::vector<std::string>>& sentences,
                          const VocabularyPolicy& policy, bool with_unk = false);

  // One token per line in id order, as written by save().
  static Vocabulary load(std::istream& in);
  static Vocabulary load_file(const std::string& path);
  void save(std::ostream& out) const;

  std::size_t size() const { return tokens_.size(); }
  std::size_t predictable_size() const { return tokens_.size() - 1; }
  std::size_t word_count() const { return num_words_; }
  WordId bos() const { return static_cast<WordId>(tokens_.size() - 1); }
  WordId eos() const { return static_cast<WordId>(tokens_.size() - 2); }
  bool has_unk() const { return has_unk_; }
  WordId unk() const;

  std::optional<WordId> find(std::string_view token) const;
  const std::string& token(WordId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, WordId> index_;
  std::size_t num_words_ = 0;
  bool has_unk_ = false;
};

}  // namespace smoothlm
