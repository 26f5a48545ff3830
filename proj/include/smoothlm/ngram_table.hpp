#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "smoothlm/common.hpp"
#include "smoothlm/corpus.hpp"

namespace smoothlm {

constexpr int kMaxOrder = 3;

struct Successor {
  WordId word;
  Count count;
};

struct ContextStats {
  Count total = 0;           // c(context) = sum of successor counts
  std::size_t distinct = 0;  // |{w : c(context w) > 0}|
  std::size_t one_count = 0; // |{w : c(context w) = 1}|
  double average = 0.0;      // total / distinct, 0 for unseen contexts
};

// Histogram r -> n_r over grams of one order (or one bucket).
struct CountOfCounts {
  std::map<Count, Count> n;
  std::optional<Count> n0;  // unseen grams, when the event space is enumerable

  Count at(Count r) const;
  Count tokens() const;  // sum r * n_r
  Count types() const;   // sum n_r, r >= 1
  bool empty() const { return n.empty(); }
};

// Counts of every k-gram, k = 1..order, grouped by context.
//
// Sentences are padded with order-1 BOS ids and every gram ending at a
// predicted position is recorded, so BOS shows up only inside contexts.
class NGramTable {
 public:
  struct Row {
    std::array<WordId, 2> context{};
    Count total = 0;
    std::uint32_t distinct = 0;
    std::uint32_t ones = 0;
    std::uint32_t begin = 0;  // into successors of the row's order
    std::uint32_t end = 0;
  };

  NGramTable() = default;
  NGramTable(int order, std::size_t predictable_size);

  int order() const { return order_; }
  std::size_t predictable_size() const { return predictable_size_; }
  WordId bos() const { return static_cast<WordId>(predictable_size_); }
  Count total_words() const { return total_words_; }

  // c(gram) for 1 <= gram.size() <= order.
  Count count(std::span<const WordId> gram) const;
  // Context of length k-1 looked up at order k = context.size() + 1.
  ContextStats stats(std::span<const WordId> context) const;
  std::span<const Successor> successors(std::span<const WordId> context) const;
  const Row* find_row(std::span<const WordId> context) const;
  std::span<const Successor> successors(const Row& row, int k) const;

  const std::vector<Row>& rows(int k) const { return levels_.at(k - 1).rows; }
  std::size_t num_grams(int k) const { return levels_.at(k - 1).successors.size(); }

  // Sorted by id sequence, "id id ...<TAB>count" per line.
  void dump(std::ostream& out) const;

 private:
  friend NGramTable accumulate_counts(const EncodedCorpus& corpus, int order);

  struct Level {
    std::vector<Row> rows;
    std::vector<Successor> successors;
    std::unordered_map<std::uint64_t, std::uint32_t> index;
  };

  static std::uint64_t pack(std::span<const WordId> context);

  int order_ = 0;
  std::size_t predictable_size_ = 0;
  Count total_words_ = 0;
  std::vector<Level> levels_;
};

// Throws ParameterError unless 1 <= order <= kMaxOrder.
NGramTable accumulate_counts(const EncodedCorpus& corpus, int order);

ContextStats context_stats(const NGramTable& table, std::span<const WordId> context);
CountOfCounts count_of_counts(const NGramTable& table, int k);

}  // namespace smoothlm
