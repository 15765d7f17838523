#include "mdclt/entry_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"

namespace mdclt::models {

namespace {

template <typename F>
double expect_discrete(const DiscreteLaw& law, F&& g) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < law.points.size(); ++k) acc.add(law.probs[k] * g(law.points[k]));
  return acc.value();
}

// E[Z^2 1{|Z| > u}] for Z ~ N(0,1).
double gaussian_tail_second(double u) {
  if (u <= 0.0) return 1.0;
  return 2.0 * (u * normal_pdf(u) + 1.0 - normal_cdf(u));
}

// E[|Z|^3 1{|Z| > u}] for Z ~ N(0,1).
double gaussian_tail_third(double u) {
  u = std::max(u, 0.0);
  return 2.0 * (u * u + 2.0) * normal_pdf(u);
}

}  // namespace

EntryLaw EntryLaw::discrete(std::vector<double> points, std::vector<double> probs) {
  if (points.size() != probs.size() || points.empty()) {
    throw Error(ErrorKind::invalid_parameter, "discrete law needs matching nonempty atoms and probs");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  DiscreteLaw law;
  for (auto k : order) {
    if (probs[k] < 0.0) throw Error(ErrorKind::invalid_parameter, "negative atom probability");
    if (probs[k] == 0.0) continue;
    if (!law.points.empty() && law.points.back() == points[k]) {
      law.probs.back() += probs[k];
    } else {
      law.points.push_back(points[k]);
      law.probs.push_back(probs[k]);
    }
  }
  return EntryLaw(std::move(law));
}

EntryLaw EntryLaw::gaussian(double sd) {
  if (!(sd >= 0.0)) throw Error(ErrorKind::invalid_parameter, "gaussian sd must be >= 0");
  if (sd == 0.0) return discrete({0.0}, {1.0});
  return EntryLaw(GaussianLaw{sd});
}

EntryLaw EntryLaw::rademacher(double amplitude) {
  return discrete({-amplitude, amplitude}, {0.5, 0.5});
}

EntryLaw EntryLaw::scaled(double c) const {
  if (is_discrete()) {
    auto pts = as_discrete().points;
    for (double& x : pts) x *= c;
    return discrete(std::move(pts), as_discrete().probs);
  }
  return gaussian(std::abs(c) * as_gaussian().sd);
}

double EntryLaw::mean() const {
  if (!is_discrete()) return 0.0;
  return expect_discrete(as_discrete(), [](double x) { return x; });
}

double EntryLaw::second_moment() const {
  if (!is_discrete()) return as_gaussian().sd * as_gaussian().sd;
  return expect_discrete(as_discrete(), [](double x) { return x * x; });
}

double EntryLaw::abs_moment(double r) const {
  if (!is_discrete()) return std::pow(as_gaussian().sd, r) * gaussian_abs_moment(r);
  return expect_discrete(as_discrete(), [r](double x) { return std::pow(std::abs(x), r); });
}

double EntryLaw::tail_second_moment(double t) const {
  if (!is_discrete()) {
    const double sd = as_gaussian().sd;
    return sd * sd * gaussian_tail_second(t / sd);
  }
  return expect_discrete(as_discrete(), [t](double x) { return std::abs(x) > t ? x * x : 0.0; });
}

double EntryLaw::truncated_mean(double t) const {
  if (!is_discrete()) return 0.0;
  return expect_discrete(as_discrete(), [t](double x) { return std::abs(x) <= t ? x : 0.0; });
}

double EntryLaw::capped_cubic_moment(double c) const {
  if (is_discrete()) {
    return expect_discrete(as_discrete(),
                           [c](double x) { return x * x * std::min(c * std::abs(x), 1.0); });
  }
  const double sd = as_gaussian().sd;
  if (c == 0.0) return 0.0;
  // c E[|X|^3 1{|X| <= 1/c}] + E[X^2 1{|X| > 1/c}]
  const double u = 1.0 / (c * sd);
  const double inner_third = gaussian_abs_moment(3.0) - gaussian_tail_third(u);
  return c * sd * sd * sd * inner_third + sd * sd * gaussian_tail_second(u);
}

double EntryLaw::max_abs() const {
  if (!is_discrete()) return std::numeric_limits<double>::infinity();
  const auto& pts = as_discrete().points;
  return std::max(std::abs(pts.front()), std::abs(pts.back()));
}

}  // namespace mdclt::models
