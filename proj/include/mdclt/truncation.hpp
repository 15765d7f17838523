#ifndef MDCLT_TRUNCATION_HPP_
#define MDCLT_TRUNCATION_HPP_

#include <span>
#include <utility>
#include <vector>

#include "mdclt/array_model.hpp"

namespace mdclt::models {

/// Per-entry split X = X' + X'' at threshold t = ε σ_n / m_n:
///   X'  = X 1{|X| <= t} − μ_i,   X'' = X 1{|X| > t} + μ_i,
///   μ_i = E[X_ni 1{|X_ni| <= t}].
/// Both arrays are centred and inherit the m_n-dependence of the row; the
/// split is a pointwise map, so it acts on any realized or enumerated row.
struct TruncationSplit {
  long n = 0;
  double epsilon = 0.0;
  double threshold = 0.0;
  std::vector<double> centering;

  std::pair<std::vector<double>, std::vector<double>> split(std::span<const double> row) const;
  /// Apply the split to every outcome of a table.
  std::pair<OutcomeTable, OutcomeTable> split(const OutcomeTable& table) const;
};

/// Uses max(m_n, 1) in the threshold. Throws degenerate_variance if σ_n = 0.
TruncationSplit truncated_model(const ArrayModel& model, long n, double epsilon);

}  // namespace mdclt::models

#endif  // MDCLT_TRUNCATION_HPP_
