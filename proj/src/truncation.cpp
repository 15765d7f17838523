#include "mdclt/truncation.hpp"

#include <algorithm>
#include <cmath>

#include "mdclt/error.hpp"

namespace mdclt::models {

TruncationSplit truncated_model(const ArrayModel& model, long n, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_parameter, "truncation needs epsilon > 0");
  const double sigma2 = model.exact_sigma2(n);
  if (!(sigma2 > 0.0)) throw Error(ErrorKind::degenerate_variance, "sigma_n = 0");
  const double m = static_cast<double>(std::max(model.dependence(n), 1L));
  TruncationSplit out;
  out.n = n;
  out.epsilon = epsilon;
  out.threshold = epsilon * std::sqrt(sigma2) / m;
  out.centering.reserve(static_cast<std::size_t>(model.length(n)));
  for (const auto& block : model.entry_laws(n)) {
    const double mu = block.law.truncated_mean(out.threshold);
    out.centering.insert(out.centering.end(), static_cast<std::size_t>(block.count), mu);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> TruncationSplit::split(
    std::span<const double> row) const {
  if (row.size() != centering.size()) {
    throw Error(ErrorKind::invalid_parameter, "row length does not match the truncation split");
  }
  std::vector<double> inner(row.size());
  std::vector<double> outer(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool small = std::abs(row[i]) <= threshold;
    inner[i] = (small ? row[i] : 0.0) - centering[i];
    outer[i] = (small ? 0.0 : row[i]) + centering[i];
  }
  return {std::move(inner), std::move(outer)};
}

std::pair<OutcomeTable, OutcomeTable> TruncationSplit::split(const OutcomeTable& table) const {
  OutcomeTable inner{table.length, {}, table.probs};
  OutcomeTable outer{table.length, {}, table.probs};
  inner.values.reserve(table.values.size());
  outer.values.reserve(table.values.size());
  for (std::size_t o = 0; o < table.size(); ++o) {
    auto [a, b] = split(table.row(o));
    inner.values.insert(inner.values.end(), a.begin(), a.end());
    outer.values.insert(outer.values.end(), b.begin(), b.end());
  }
  return {std::move(inner), std::move(outer)};
}

}  // namespace mdclt::models
