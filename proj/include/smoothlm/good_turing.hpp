#pragma once

#include <vector>

#include "smoothlm/ngram_table.hpp"

namespace smoothlm {

// r* = (r + 1) n_{r+1} / n_r from raw counts; 0 when n_{r+1} = 0.
// Throws FitError when n_r = 0.
double gt_adjusted_count(const CountOfCounts& coc, Count r);

// Gale & Sampson's "simple Good-Turing".
//
// Count-of-counts are averaged over the gaps between neighbouring non-zero
// ranks (Z_r = n_r / (0.5 (r_next - r_prev))), log Z is regressed on log r,
// and r* follows the raw Turing estimate until it is within `confidence`
// standard errors of the smoothed one, after which the smoothed estimate is
// used for every larger r. Probabilities of seen ranks are renormalized so
// that they sum to 1 - n_1 / N.
class SimpleGoodTuring {
 public:
  static constexpr double kConfidence = 1.65;

  // Throws FitError when fewer than two distinct r have n_r > 0.
  static SimpleGoodTuring fit(const CountOfCounts& coc, double confidence = kConfidence);

  double intercept() const { return intercept_; }
  double slope() const { return slope_; }
  double smoothed(double r) const;  // S(r) = exp(a + b log r)

  const std::vector<Count>& ranks() const { return ranks_; }
  // Unnormalized r* for each rank, aligned with ranks().
  const std::vector<double>& adjusted() const { return adjusted_; }
  double adjusted_count(Count r) const;
  // Per-gram probability of a gram seen r times (r must be a rank of the fit).
  double probability(Count r) const;
  double unseen_mass() const { return unseen_mass_; }  // n_1 / N
  Count total() const { return total_; }
  // First rank that uses the smoothed estimate.
  Count switch_rank() const { return switch_rank_; }

 private:
  std::vector<Count> ranks_;
  std::vector<Count> counts_;
  std::vector<double> adjusted_;
  double intercept_ = 0.0;
  double slope_ = 0.0;
  double unseen_mass_ = 0.0;
  double norm_ = 1.0;  // sum n_r r*
  Count total_ = 0;
  Count switch_rank_ = 0;
};

// Good-Turing corrected counts for one population of grams (a Church-Gale
// bucket or the unigram distribution), scaled so that the population keeps
// its token mass: sum over r >= 0 of n_r r*(r) equals sum r n_r.
//
// Simple Good-Turing is used when it can be fitted; otherwise the raw counts
// stand and the unseen grams jointly receive n_1 pseudo-occurrences. When n_0
// is 0 the seen grams keep all the mass; when n_1 is 0 the unseen share comes
// from the fitted S(1).
struct GoodTuringTable {
  std::vector<Count> ranks;
  std::vector<Count> counts;  // n_r for each rank
  std::vector<double> rstar;  // aligned with ranks, mass-preserving
  double rstar_unseen = 0.0;  // per unseen gram
  Count n0 = 0;
  Count tokens = 0;
  bool smoothed = false;

  double lookup(Count r) const;  // r = 0 allowed
};

GoodTuringTable good_turing_table(const CountOfCounts& coc,
                                  double confidence = SimpleGoodTuring::kConfidence);

}  // namespace smoothlm
