#ifndef MDCLT_ENTRY_LAW_HPP_
#define MDCLT_ENTRY_LAW_HPP_

#include <variant>
#include <vector>

namespace mdclt::models {

/// Finite-support law given by atoms and their probabilities.
struct DiscreteLaw {
  std::vector<double> points;
  std::vector<double> probs;
};

/// Centred normal law N(0, sd^2).
struct GaussianLaw {
  double sd = 1.0;
};

/// Marginal law of a single array entry X_ni.
///
/// Every moment functional the condition checks need is available exactly:
/// discrete laws by summing over atoms, Gaussian laws by closed form.
class EntryLaw {
 public:
  /// Atoms are sorted and duplicates merged; zero-probability atoms dropped.
  static EntryLaw discrete(std::vector<double> points, std::vector<double> probs);
  static EntryLaw gaussian(double sd);
  static EntryLaw rademacher(double amplitude);

  bool is_discrete() const { return std::holds_alternative<DiscreteLaw>(law_); }
  const DiscreteLaw& as_discrete() const { return std::get<DiscreteLaw>(law_); }
  const GaussianLaw& as_gaussian() const { return std::get<GaussianLaw>(law_); }

  EntryLaw scaled(double c) const;

  double mean() const;
  double second_moment() const;
  double variance() const { return second_moment() - mean() * mean(); }
  /// E|X|^r, r > 0.
  double abs_moment(double r) const;
  /// E[X^2 1{|X| > t}].
  double tail_second_moment(double t) const;
  /// E[X 1{|X| <= t}], the centring constant of the truncation split.
  double truncated_mean(double t) const;
  /// E[X^2 min(c|X|, 1)], c >= 0.
  double capped_cubic_moment(double c) const;
  /// Essential supremum of |X|; +inf for Gaussian laws.
  double max_abs() const;

 private:
  explicit EntryLaw(std::variant<DiscreteLaw, GaussianLaw> law) : law_(std::move(law)) {}
  std::variant<DiscreteLaw, GaussianLaw> law_;
};

}  // namespace mdclt::models

#endif  // MDCLT_ENTRY_LAW_HPP_
