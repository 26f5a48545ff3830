#include "smoothlm/ngram_table.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

namespace smoothlm {

Count CountOfCounts::at(Count r) const {
  if (r == 0) return n0.value_or(0);
  auto it = n.find(r);
  return it == n.end() ? 0 : it->second;
}

Count CountOfCounts::tokens() const {
  Count total = 0;
  for (const auto& [r, nr] : n) total += r * nr;
  return total;
}

Count CountOfCounts::types() const {
  Count total = 0;
  for (const auto& [r, nr] : n) total += nr;
  return total;
}

NGramTable::NGramTable(int order, std::size_t predictable_size)
    : order_(order), predictable_size_(predictable_size), levels_(static_cast<std::size_t>(order)) {
  if (order < 1 || order > kMaxOrder) {
    throw ParameterError("n-gram order must be in 1.." + std::to_string(kMaxOrder));
  }
}

std::uint64_t NGramTable::pack(std::span<const WordId> context) {
  std::uint64_t key = 0;
  for (WordId id : context) key = (key << 32) | id;
  return key;
}

const NGramTable::Row* NGramTable::find_row(std::span<const WordId> context) const {
  const std::size_t k = context.size() + 1;
  if (k > levels_.size()) return nullptr;
  const auto& level = levels_[k - 1];
  auto it = level.index.find(pack(context));
  return it == level.index.end() ? nullptr : &level.rows[it->second];
}

std::span<const Successor> NGramTable::successors(const Row& row, int k) const {
  const auto& succ = levels_.at(static_cast<std::size_t>(k - 1)).successors;
  return std::span<const Successor>(succ).subspan(row.begin, row.end - row.begin);
}

std::span<const Successor> NGramTable::successors(std::span<const WordId> context) const {
  const Row* row = find_row(context);
  if (row == nullptr) return {};
  return successors(*row, static_cast<int>(context.size()) + 1);
}

Count NGramTable::count(std::span<const WordId> gram) const {
  if (gram.empty()) return total_words_;
  auto succ = successors(gram.first(gram.size() - 1));
  const WordId w = gram.back();
  auto it = std::lower_bound(succ.begin(), succ.end(), w,
                             [](const Successor& s, WordId id) { return s.word < id; });
  return (it != succ.end() && it->word == w) ? it->count : 0;
}

ContextStats NGramTable::stats(std::span<const WordId> context) const {
  ContextStats s;
  const Row* row = find_row(context);
  if (row == nullptr) return s;
  s.total = row->total;
  s.distinct = row->distinct;
  s.one_count = row->ones;
  s.average = row->distinct > 0 ? static_cast<double>(row->total) / row->distinct : 0.0;
  return s;
}

void NGramTable::dump(std::ostream& out) const {
  for (int k = 1; k <= order_; ++k) {
    const auto& level = levels_[static_cast<std::size_t>(k - 1)];
    std::vector<const Row*> sorted;
    sorted.reserve(level.rows.size());
    for (const auto& row : level.rows) sorted.push_back(&row);
    std::sort(sorted.begin(), sorted.end(), [k](const Row* a, const Row* b) {
      return std::lexicographical_compare(a->context.begin(), a->context.begin() + (k - 1),
                                          b->context.begin(), b->context.begin() + (k - 1));
    });
    for (const Row* row : sorted) {
      for (const auto& s : successors(*row, k)) {
        for (int i = 0; i < k - 1; ++i) out << row->context[static_cast<std::size_t>(i)] << ' ';
        out << s.word << '\t' << s.count << '\n';
      }
    }
  }
}

NGramTable accumulate_counts(const EncodedCorpus& corpus, int order) {
  if (!corpus.vocab) throw DataError("corpus has no vocabulary");
  NGramTable table(order, corpus.vocab->predictable_size());
  const WordId bos = table.bos();

  struct Gram {
    std::array<WordId, 2> context;
    WordId word;
  };
  std::vector<std::vector<Gram>> grams(static_cast<std::size_t>(order));
  for (auto& g : grams) g.reserve(static_cast<std::size_t>(corpus.word_count));

  std::vector<WordId> padded;
  for (const auto& sentence : corpus.sentences) {
    padded.assign(static_cast<std::size_t>(order - 1), bos);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    for (std::size_t i = static_cast<std::size_t>(order - 1); i < padded.size(); ++i) {
      for (int k = 1; k <= order; ++k) {
        Gram g{{0, 0}, padded[i]};
        for (int j = 0; j < k - 1; ++j) {
          g.context[static_cast<std::size_t>(j)] = padded[i - static_cast<std::size_t>(k - 1 - j)];
        }
        grams[static_cast<std::size_t>(k - 1)].push_back(g);
      }
    }
    table.total_words_ += static_cast<Count>(sentence.size());
  }

  for (int k = 1; k <= order; ++k) {
    auto& list = grams[static_cast<std::size_t>(k - 1)];
    std::sort(list.begin(), list.end(), [](const Gram& a, const Gram& b) {
      return std::tie(a.context, a.word) < std::tie(b.context, b.word);
    });
    auto& level = table.levels_[static_cast<std::size_t>(k - 1)];
    std::size_t i = 0;
    while (i < list.size()) {
      NGramTable::Row row;
      row.context = list[i].context;
      row.begin = static_cast<std::uint32_t>(level.successors.size());
      while (i < list.size() && list[i].context == row.context) {
        const WordId w = list[i].word;
        Count c = 0;
        while (i < list.size() && list[i].context == row.context && list[i].word == w) {
          ++c;
          ++i;
        }
        level.successors.push_back({w, c});
        row.total += c;
        ++row.distinct;
        if (c == 1) ++row.ones;
      }
      row.end = static_cast<std::uint32_t>(level.successors.size());
      const std::uint64_t key =
          NGramTable::pack(std::span<const WordId>(row.context.data(), static_cast<std::size_t>(k - 1)));
      level.index.emplace(key, static_cast<std::uint32_t>(level.rows.size()));
      level.rows.push_back(row);
    }
    list.clear();
    list.shrink_to_fit();
  }
  return table;
}

ContextStats context_stats(const NGramTable& table, std::span<const WordId> context) {
  return table.stats(context);
}

CountOfCounts count_of_counts(const NGramTable& table, int k) {
  if (k < 1 || k > table.order()) throw ParameterError("count_of_counts: order out of range");
  CountOfCounts coc;
  for (const auto& row : table.rows(k)) {
    for (const auto& s : table.successors(row, k)) ++coc.n[s.count];
  }
  return coc;
}

}  // namespace smoothlm
