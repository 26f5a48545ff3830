#include "smoothlm/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace smoothlm {

namespace {

bool is_reserved(std::string_view token) {
  return token == Vocabulary::kBos || token == Vocabulary::kEos || token == Vocabulary::kUnk;
}

}  // namespace

VocabularyPolicy VocabularyPolicy::min_count_of(Count k) {
  if (k < 1) throw ParameterError("min-count threshold must be >= 1");
  return {Kind::MinCount, k};
}

VocabularyPolicy VocabularyPolicy::parse(std::string_view text) {
  if (text == "all") return all_words();
  constexpr std::string_view prefix = "min-count:";
  if (text.substr(0, prefix.size()) == prefix) {
    auto digits = text.substr(prefix.size());
    Count k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return min_count_of(k);
  }
  throw ParameterError("invalid vocabulary policy '" + std::string(text) +
                       "' (expected 'all' or 'min-count:K')");
}

std::string VocabularyPolicy::to_string() const {
  return kind == Kind::AllWords ? "all" : "min-count:" + std::to_string(min_count);
}

Vocabulary::Vocabulary(std::vector<std::string> words, bool with_unk) : has_unk_(with_unk) {
  std::erase_if(words, [](const std::string& w) { return is_reserved(w); });
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  num_words_ = words.size();
  tokens_ = std::move(words);
  if (with_unk) tokens_.emplace_back(kUnk);
  tokens_.emplace_back(kEos);
  tokens_.emplace_back(kBos);
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], static_cast<WordId>(i));
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& sentences,
                             const VocabularyPolicy& policy, bool with_unk) {
  std::unordered_map<std::string, Count> freq;
  Count tokens = 0;
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence) {
      ++freq[token];
      ++tokens;
    }
  }
  if (tokens == 0) throw DataError("empty corpus");

  std::vector<std::string> words;
  words.reserve(freq.size());
  for (const auto& [token, c] : freq) {
    if (policy.kind == VocabularyPolicy::Kind::AllWords || c >= policy.min_count) {
      words.push_back(token);
    }
  }
  const bool unk = with_unk || policy.kind == VocabularyPolicy::Kind::MinCount;
  return Vocabulary(std::move(words), unk);
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::vector<std::string> words;
  bool unk = false;
  bool eos = false;
  bool bos = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == kUnk) {
      unk = true;
    } else if (line == kEos) {
      eos = true;
    } else if (line == kBos) {
      bos = true;
    } else {
      words.push_back(line);
    }
  }
  if (words.empty() && !unk) throw DataError("vocabulary file holds no words");
  if (!eos || !bos) throw DataError("vocabulary file lacks </s> or <s>");
  return Vocabulary(std::move(words), unk);
}

Vocabulary Vocabulary::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary file '" + path + "'");
  return load(in);
}

void Vocabulary::save(std::ostream& out) const {
  for (const auto& token : tokens_) out << token << '\n';
}

WordId Vocabulary::unk() const {
  if (!has_unk_) throw DataError("vocabulary has no UNK token");
  return static_cast<WordId>(num_words_);
}

std::optional<WordId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace smoothlm
