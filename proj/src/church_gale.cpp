#include "smoothlm/church_gale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace smoothlm {

namespace {

struct PriorGroup {
  double value;
  Count multiplicity;
};

struct SeenGram {
  double prior;
  Count count;
};

std::vector<PriorGroup> group_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<PriorGroup> out;
  for (double v : values) {
    if (!out.empty() && out.back().value == v) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

}  // namespace

struct ChurchGaleModel::Level {
  int k = 2;
  std::vector<double> uppers;  // inclusive upper prior of each bucket; last is +inf
  std::vector<GoodTuringTable> tables;
  double tokens = 0.0;

  std::size_t bucket_of(double prior) const {
    auto it = std::lower_bound(uppers.begin(), uppers.end(), prior);
    if (it == uppers.end()) return uppers.size() - 1;
    return static_cast<std::size_t>(it - uppers.begin());
  }
  double rstar(double prior, Count c) const { return tables[bucket_of(prior)].lookup(c); }
};

namespace {

// Cut sorted priors of seen grams into buckets of at least c_min grams each.
std::vector<double> bucket_bounds(std::vector<double> priors, Count c_min) {
  std::sort(priors.begin(), priors.end());
  std::vector<double> uppers;
  Count in_bucket = 0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    ++in_bucket;
    const bool tie_ahead = i + 1 < priors.size() && priors[i + 1] == priors[i];
    if (in_bucket >= c_min && !tie_ahead) {
      uppers.push_back(priors[i]);
      in_bucket = 0;
    }
  }
  // A short tail joins the bucket before it.
  if (uppers.empty()) {
    uppers.push_back(std::numeric_limits<double>::infinity());
  } else {
    uppers.back() = std::numeric_limits<double>::infinity();
  }
  return uppers;
}

std::unique_ptr<ChurchGaleModel::Level> build_level(int k, const std::vector<PriorGroup>& histories,
                                                    const std::vector<PriorGroup>& words,
                                                    const std::vector<SeenGram>& seen,
                                                    Count c_min, double budget, double tokens) {
  const double pairs = static_cast<double>(histories.size()) * static_cast<double>(words.size());
  if (pairs > budget) {
    throw DataError("church-gale: " + std::to_string(static_cast<long long>(pairs)) +
                    " prior pairs at order " + std::to_string(k) + " exceed the budget");
  }
  auto level = std::make_unique<ChurchGaleModel::Level>();
  level->k = k;
  level->tokens = tokens;

  std::vector<double> priors;
  priors.reserve(seen.size());
  for (const auto& g : seen) priors.push_back(g.prior);
  level->uppers = bucket_bounds(std::move(priors), c_min);

  const std::size_t nb = level->uppers.size();
  std::vector<CountOfCounts> coc(nb);
  std::vector<Count> space(nb, 0);
  for (const auto& h : histories) {
    for (const auto& w : words) {
      space[level->bucket_of(h.value * w.value)] += h.multiplicity * w.multiplicity;
    }
  }
  std::vector<Count> seen_in(nb, 0);
  for (const auto& g : seen) {
    const std::size_t b = level->bucket_of(g.prior);
    ++coc[b].n[g.count];
    ++seen_in[b];
  }
  level->tables.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    coc[b].n0 = space[b] - seen_in[b];
    level->tables.push_back(good_turing_table(coc[b]));
  }
  return level;
}

}  // namespace

ChurchGaleModel::ChurchGaleModel(TablePtr table, Count c_min, double budget)
    : table_(std::move(table)), c_min_(c_min) {
  if (c_min_ < 1) throw ParameterError("church-gale requires cmin >= 1");
  const std::size_t vocab = table_->predictable_size();
  const WordId eos = static_cast<WordId>(vocab - 1);
  const double total = static_cast<double>(table_->total_words());

  // Good-Turing unigram distribution over the predictable words.
  std::vector<Count> unigram_counts(vocab, 0);
  for (const auto& s : table_->successors(std::span<const WordId>{})) unigram_counts[s.word] = s.count;
  CountOfCounts uni;
  for (Count c : unigram_counts) {
    if (c > 0) ++uni.n[c];
  }
  uni.n0 = static_cast<Count>(std::count(unigram_counts.begin(), unigram_counts.end(), Count{0}));
  const GoodTuringTable uni_gt = good_turing_table(uni);
  unigram_.assign(vocab, 1.0 / static_cast<double>(vocab));
  if (total > 0.0) {
    for (std::size_t w = 0; w < vocab; ++w) unigram_[w] = uni_gt.lookup(unigram_counts[w]) / total;
  }

  const int n = table_->order();
  if (n < 2 || total == 0.0) return;

  const std::vector<PriorGroup> word_groups = group_values(unigram_);
  for (const auto& g : word_groups) word_groups_.emplace_back(g.value, g.multiplicity);

  // Bigrams: histories are all words but EOS, plus BOS with EOS's prior.
  {
    std::vector<double> hv;
    hv.reserve(vocab);
    for (std::size_t w = 0; w < vocab; ++w) {
      if (w != eos) hv.push_back(unigram_[w]);
    }
    hv.push_back(unigram_[eos]);
    std::vector<SeenGram> seen;
    seen.reserve(table_->num_grams(2));
    for (const auto& row : table_->rows(2)) {
      const double hp = history_prior(2, std::span<const WordId>(row.context.data(), 1));
      for (const auto& s : table_->successors(row, 2)) seen.push_back({hp * unigram_[s.word], s.count});
    }
    levels_.push_back(build_level(2, group_values(std::move(hv)), word_groups, seen, c_min_, budget,
                                  total));
  }
  if (n < 3) return;

  // Trigrams: histories are bigram grams (u, v) with v a real word, plus (BOS, BOS).
  {
    const Level& bi = *levels_[0];
    std::map<double, Count> hist;
    // Unseen bigram grams, by bucket, excluding those ending in EOS.
    std::vector<Count> unseen(bi.tables.size(), 0);
    for (std::size_t b = 0; b < bi.tables.size(); ++b) unseen[b] = bi.tables[b].n0;
    std::vector<double> hv;
    for (std::size_t w = 0; w < vocab; ++w) {
      if (w != eos) hv.push_back(unigram_[w]);
    }
    hv.push_back(unigram_[eos]);
    for (const auto& h : group_values(std::move(hv))) {
      unseen[bi.bucket_of(h.value * unigram_[eos])] -= h.multiplicity;
    }
    for (const auto& row : table_->rows(2)) {
      const double hp = history_prior(2, std::span<const WordId>(row.context.data(), 1));
      for (const auto& s : table_->successors(row, 2)) {
        const double p = hp * unigram_[s.word];
        if (s.word == eos) {
          ++unseen[bi.bucket_of(p)];  // was subtracted above but is seen
          continue;
        }
        hist[bi.rstar(p, s.count) / bi.tokens] += 1;
      }
    }
    for (std::size_t b = 0; b < bi.tables.size(); ++b) {
      if (unseen[b] > 0) hist[bi.tables[b].rstar_unseen / bi.tokens] += unseen[b];
    }
    hist[unigram_[eos]] += 1;
    std::vector<PriorGroup> history_groups;
    for (const auto& [v, m] : hist) history_groups.push_back({v, m});

    std::vector<SeenGram> seen;
    seen.reserve(table_->num_grams(3));
    for (const auto& row : table_->rows(3)) {
      const double hp = history_prior(3, std::span<const WordId>(row.context.data(), 2));
      for (const auto& s : table_->successors(row, 3)) seen.push_back({hp * unigram_[s.word], s.count});
    }
    levels_.push_back(build_level(3, history_groups, word_groups, seen, c_min_, budget, total));
  }
}

ChurchGaleModel::~ChurchGaleModel() = default;

bool ChurchGaleModel::valid_history(std::span<const WordId> history) const {
  const WordId bos = table_->bos();
  const WordId eos = bos - 1;
  if (history.size() == 1) return history[0] == bos || history[0] < eos;
  if (history.size() == 2) {
    if (history[0] == bos && history[1] == bos) return true;
    return (history[0] == bos || history[0] < eos) && history[1] < eos;
  }
  return history.empty();
}

double ChurchGaleModel::history_prior(int k, std::span<const WordId> history) const {
  const WordId bos = table_->bos();
  if (k == 2) return history[0] == bos ? unigram_[bos - 1] : unigram_[history[0]];
  if (history[0] == bos && history[1] == bos) return unigram_[bos - 1];
  return joint(history);
}

double ChurchGaleModel::joint(std::span<const WordId> gram) const {
  const int k = static_cast<int>(gram.size());
  if (k < 2 || k > static_cast<int>(levels_.size()) + 1) {
    throw ParameterError("church-gale joint needs a gram of a modelled order >= 2");
  }
  const Level& level = *levels_[static_cast<std::size_t>(k - 2)];
  auto history = gram.first(static_cast<std::size_t>(k - 1));
  const double prior = history_prior(k, history) * unigram_.at(gram.back());
  return level.rstar(prior, table_->count(gram)) / level.tokens;
}

double ChurchGaleModel::joint_total(int k) const {
  const Level& level = *levels_.at(static_cast<std::size_t>(k - 2));
  double sum = 0.0;
  for (const auto& t : level.tables) {
    sum += static_cast<double>(t.n0) * t.rstar_unseen;
    for (std::size_t i = 0; i < t.ranks.size(); ++i) sum += static_cast<double>(t.counts[i]) * t.rstar[i];
  }
  return sum / level.tokens;
}

std::size_t ChurchGaleModel::num_buckets(int k) const {
  return levels_.at(static_cast<std::size_t>(k - 2))->tables.size();
}

const GoodTuringTable& ChurchGaleModel::bucket_table(int k, std::size_t bucket) const {
  return levels_.at(static_cast<std::size_t>(k - 2))->tables.at(bucket);
}

double ChurchGaleModel::row_total(const Level& level, std::span<const WordId> history) const {
  std::uint64_t key = history.size() == 1
                          ? history[0]
                          : ((static_cast<std::uint64_t>(history[0]) + 1) << 32) | history[1];
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = row_cache_.find(key); it != row_cache_.end()) return it->second;
  }
  const double hp = history_prior(level.k, history);
  double total = 0.0;
  // Every word as if unseen, grouped by distinct prior value.
  for (const auto& [p, m] : word_groups_) {
    total += static_cast<double>(m) * level.tables[level.bucket_of(hp * p)].rstar_unseen;
  }
  for (const auto& s : table_->successors(history)) {
    const double prior = hp * unigram_[s.word];
    total += level.rstar(prior, s.count) - level.tables[level.bucket_of(prior)].rstar_unseen;
  }
  std::lock_guard lock(cache_mutex_);
  row_cache_.emplace(key, total);
  return total;
}

double ChurchGaleModel::prob(std::span<const WordId> context, WordId word) const {
  const std::size_t h = std::min<std::size_t>(context.size(), levels_.size());
  if (h == 0) return unigram_.at(word);
  auto history = context.last(h);
  if (!valid_history(history)) return unigram_.at(word);
  const Level& level = *levels_[h - 1];
  const double prior = history_prior(level.k, history) * unigram_[word];
  std::array<WordId, kMaxOrder> gram{};
  std::copy(history.begin(), history.end(), gram.begin());
  gram[h] = word;
  const Count c = table_->count(std::span<const WordId>(gram.data(), h + 1));
  const double total = row_total(level, history);
  if (!(total > 0.0)) return unigram_[word];  // nothing was trained at this order
  return level.rstar(prior, c) / total;
}

}  // namespace smoothlm
