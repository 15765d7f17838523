#ifndef MDCLT_OUTCOME_TABLE_HPP_
#define MDCLT_OUTCOME_TABLE_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace mdclt::models {

/// Exhaustive list of row realizations with their probabilities.
///
/// Rows are stored contiguously: outcome o occupies
/// values[o * length, (o + 1) * length).
struct OutcomeTable {
  long length = 0;
  std::vector<double> values;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  std::span<const double> row(std::size_t o) const {
    return {values.data() + o * static_cast<std::size_t>(length), static_cast<std::size_t>(length)};
  }

  double total_probability() const;
  /// E X_ni, i is 1-based.
  double mean(long i) const;
  /// Cov(X_ni, X_nj), 1-based.
  double covariance(long i, long j) const;
  double row_sum_mean() const;
  double row_sum_variance() const;
  /// Maximum |X_ni| over all outcomes and indices.
  double max_abs() const;

  /// Sort rows lexicographically and merge identical rows.
  OutcomeTable canonical() const;

  /// CSV with header "prob,x_1,...,x_N".
  void write_csv(std::ostream& os) const;
};

}  // namespace mdclt::models

#endif  // MDCLT_OUTCOME_TABLE_HPP_
