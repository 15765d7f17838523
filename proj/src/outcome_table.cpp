#include "mdclt/outcome_table.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"

namespace mdclt::models {

double OutcomeTable::total_probability() const { return compensated_sum(probs); }

double OutcomeTable::mean(long i) const {
  if (i < 1 || i > length) throw Error(ErrorKind::index_out_of_range, "outcome table index");
  CompensatedSum acc;
  for (std::size_t o = 0; o < size(); ++o) acc.add(probs[o] * row(o)[i - 1]);
  return acc.value();
}

double OutcomeTable::covariance(long i, long j) const {
  if (i < 1 || i > length || j < 1 || j > length) {
    throw Error(ErrorKind::index_out_of_range, "outcome table index");
  }
  const double mi = mean(i);
  const double mj = mean(j);
  CompensatedSum acc;
  for (std::size_t o = 0; o < size(); ++o) {
    acc.add(probs[o] * (row(o)[i - 1] - mi) * (row(o)[j - 1] - mj));
  }
  return acc.value();
}

double OutcomeTable::row_sum_mean() const {
  CompensatedSum acc;
  for (std::size_t o = 0; o < size(); ++o) acc.add(probs[o] * compensated_sum(row(o)));
  return acc.value();
}

double OutcomeTable::row_sum_variance() const {
  const double mu = row_sum_mean();
  CompensatedSum acc;
  for (std::size_t o = 0; o < size(); ++o) {
    const double d = compensated_sum(row(o)) - mu;
    acc.add(probs[o] * d * d);
  }
  return acc.value();
}

double OutcomeTable::max_abs() const {
  double best = 0.0;
  for (double x : values) best = std::max(best, std::abs(x));
  return best;
}

OutcomeTable OutcomeTable::canonical() const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto ra = row(a);
    const auto rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  OutcomeTable out;
  out.length = length;
  for (std::size_t o : order) {
    const auto r = row(o);
    if (!out.probs.empty() && std::equal(r.begin(), r.end(), out.row(out.size() - 1).begin())) {
      out.probs.back() += probs[o];
      continue;
    }
    out.values.insert(out.values.end(), r.begin(), r.end());
    out.probs.push_back(probs[o]);
  }
  return out;
}

void OutcomeTable::write_csv(std::ostream& os) const {
  os << "prob";
  for (long i = 1; i <= length; ++i) os << ",x_" << i;
  os << '\n' << std::setprecision(17);
  for (std::size_t o = 0; o < size(); ++o) {
    os << probs[o];
    for (double x : row(o)) os << ',' << x;
    os << '\n';
  }
}

}  // namespace mdclt::models
