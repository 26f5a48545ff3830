#include "smoothlm/good_turing.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlm {

double gt_adjusted_count(const CountOfCounts& coc, Count r) {
  const Count nr = coc.at(r);
  if (nr == 0) throw FitError("Good-Turing r* undefined: n_" + std::to_string(r) + " = 0");
  return static_cast<double>(r + 1) * static_cast<double>(coc.at(r + 1)) / static_cast<double>(nr);
}

SimpleGoodTuring SimpleGoodTuring::fit(const CountOfCounts& coc, double confidence) {
  SimpleGoodTuring sgt;
  for (const auto& [r, nr] : coc.n) {
    if (r >= 1 && nr > 0) {
      sgt.ranks_.push_back(r);
      sgt.counts_.push_back(nr);
    }
  }
  const std::size_t rows = sgt.ranks_.size();
  if (rows < 2) throw FitError("simple Good-Turing needs at least two distinct non-zero counts");

  for (std::size_t j = 0; j < rows; ++j) sgt.total_ += sgt.ranks_[j] * sgt.counts_[j];
  const Count n1 = coc.at(1);
  sgt.unseen_mass_ = static_cast<double>(n1) / static_cast<double>(sgt.total_);

  // Least squares of log Z_r on log r.
  std::vector<double> log_r(rows);
  std::vector<double> log_z(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const double r = static_cast<double>(sgt.ranks_[j]);
    const double prev = j == 0 ? 0.0 : static_cast<double>(sgt.ranks_[j - 1]);
    const double next = j + 1 == rows ? 2.0 * r - prev : static_cast<double>(sgt.ranks_[j + 1]);
    log_r[j] = std::log(r);
    log_z[j] = std::log(static_cast<double>(sgt.counts_[j]) / (0.5 * (next - prev)));
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t j = 0; j < rows; ++j) {
    mean_x += log_r[j];
    mean_y += log_z[j];
  }
  mean_x /= static_cast<double>(rows);
  mean_y /= static_cast<double>(rows);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = 0; j < rows; ++j) {
    sxy += (log_r[j] - mean_x) * (log_z[j] - mean_y);
    sxx += (log_r[j] - mean_x) * (log_r[j] - mean_x);
  }
  sgt.slope_ = sxy / sxx;
  sgt.intercept_ = mean_y - sgt.slope_ * mean_x;

  sgt.adjusted_.resize(rows);
  bool smoothed_from_here = false;
  sgt.switch_rank_ = 0;
  for (std::size_t j = 0; j < rows; ++j) {
    const Count r = sgt.ranks_[j];
    const double rd = static_cast<double>(r);
    const double y = (rd + 1.0) * sgt.smoothed(rd + 1.0) / sgt.smoothed(rd);
    const bool has_next = j + 1 < rows && sgt.ranks_[j + 1] == r + 1;
    if (!has_next) smoothed_from_here = true;
    if (!smoothed_from_here) {
      const double nr = static_cast<double>(sgt.counts_[j]);
      const double nr1 = static_cast<double>(sgt.counts_[j + 1]);
      const double x = (rd + 1.0) * nr1 / nr;
      const double sd = std::sqrt((rd + 1.0) * (rd + 1.0) * nr1 / (nr * nr) * (1.0 + nr1 / nr));
      if (std::fabs(x - y) <= confidence * sd) {
        smoothed_from_here = true;
      } else {
        sgt.adjusted_[j] = x;
        continue;
      }
    }
    if (sgt.switch_rank_ == 0) sgt.switch_rank_ = r;
    sgt.adjusted_[j] = y;
  }

  sgt.norm_ = 0.0;
  for (std::size_t j = 0; j < rows; ++j) sgt.norm_ += static_cast<double>(sgt.counts_[j]) * sgt.adjusted_[j];
  return sgt;
}

double SimpleGoodTuring::smoothed(double r) const { return std::exp(intercept_ + slope_ * std::log(r)); }

double SimpleGoodTuring::adjusted_count(Count r) const {
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), r);
  if (it == ranks_.end() || *it != r) throw FitError("rank " + std::to_string(r) + " not in the fit");
  return adjusted_[static_cast<std::size_t>(it - ranks_.begin())];
}

double SimpleGoodTuring::probability(Count r) const {
  return (1.0 - unseen_mass_) * adjusted_count(r) / norm_;
}

double GoodTuringTable::lookup(Count r) const {
  if (r == 0) return rstar_unseen;
  auto it = std::lower_bound(ranks.begin(), ranks.end(), r);
  if (it == ranks.end() || *it != r) throw FitError("rank " + std::to_string(r) + " not in table");
  return rstar[static_cast<std::size_t>(it - ranks.begin())];
}

GoodTuringTable good_turing_table(const CountOfCounts& coc, double confidence) {
  GoodTuringTable t;
  t.n0 = coc.n0.value_or(0);
  t.tokens = coc.tokens();
  for (const auto& [r, nr] : coc.n) {
    if (r >= 1 && nr > 0) {
      t.ranks.push_back(r);
      t.counts.push_back(nr);
    }
  }
  t.rstar.assign(t.ranks.size(), 0.0);
  if (t.tokens == 0) return t;
  const double total = static_cast<double>(t.tokens);

  double unseen_share = 0.0;  // fraction of the token mass given to unseen grams
  std::vector<double> seen_rstar(t.ranks.size());
  try {
    const auto sgt = SimpleGoodTuring::fit(coc, confidence);
    t.smoothed = true;
    for (std::size_t j = 0; j < t.ranks.size(); ++j) seen_rstar[j] = sgt.adjusted()[j];
    unseen_share = coc.at(1) > 0 ? sgt.unseen_mass() : std::min(0.5, sgt.smoothed(1.0) / total);
  } catch (const FitError&) {
    for (std::size_t j = 0; j < t.ranks.size(); ++j) seen_rstar[j] = static_cast<double>(t.ranks[j]);
    const double pseudo = static_cast<double>(std::max<Count>(coc.at(1), 1));
    unseen_share = pseudo / (total + pseudo);
  }
  if (t.n0 == 0) unseen_share = 0.0;

  double seen_norm = 0.0;
  for (std::size_t j = 0; j < t.ranks.size(); ++j) {
    seen_norm += static_cast<double>(coc.at(t.ranks[j])) * seen_rstar[j];
  }
  for (std::size_t j = 0; j < t.ranks.size(); ++j) {
    t.rstar[j] = total * (1.0 - unseen_share) * seen_rstar[j] / seen_norm;
  }
  t.rstar_unseen = t.n0 > 0 ? total * unseen_share / static_cast<double>(t.n0) : 0.0;
  return t;
}

}  // namespace smoothlm
