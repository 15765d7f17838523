#include "mdclt/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdclt/error.hpp"

namespace mdclt::conditions {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::tends_to_zero: return "tends-to-zero";
    case Verdict::bounded: return "bounded";
    case Verdict::diverges: return "diverges";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

SlopeFit fit_loglog(std::span<const long> ns, std::span<const double> values) {
  const std::size_t k = ns.size();
  if (k < 2 || values.size() != k) {
    throw Error(ErrorKind::insufficient_grid, "slope fit needs matching series of >= 2 points");
  }
  std::vector<double> x(k), y(k);
  for (std::size_t j = 0; j < k; ++j) {
    x[j] = std::log(static_cast<double>(ns[j]));
    y[j] = std::log(values[j]);
  }
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    xbar += x[j];
    ybar += y[j];
  }
  xbar /= static_cast<double>(k);
  ybar /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    sxx += (x[j] - xbar) * (x[j] - xbar);
    sxy += (x[j] - xbar) * (y[j] - ybar);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  if (k > 2) {
    double ssr = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double r = y[j] - ybar - fit.slope * (x[j] - xbar);
      ssr += r * r;
    }
    fit.std_err = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

ConditionReport asymptotic_verdict(std::vector<ConditionValue> series) {
  if (series.size() < 4) {
    throw Error(ErrorKind::insufficient_grid, "asymptotic verdict needs at least 4 grid points");
  }
  for (std::size_t j = 0; j < series.size(); ++j) {
    if (j > 0 && series[j].n <= series[j - 1].n) {
      throw Error(ErrorKind::insufficient_grid, "grid must be strictly increasing in n");
    }
    if (!(series[j].value >= 0.0)) {
      throw Error(ErrorKind::invalid_parameter, "condition values must be nonnegative");
    }
  }
  ConditionReport report;
  report.condition_id = series.front().condition_id;
  report.paper_eq = series.front().paper_eq;
  report.params = series.front().params;

  const bool any_zero =
      std::any_of(series.begin(), series.end(), [](const auto& v) { return v.value == 0.0; });
  if (any_zero) {
    if (series.back().value == 0.0) {
      report.loglog_slope = -std::numeric_limits<double>::infinity();
      report.slope_std_err = 0.0;
      report.verdict = Verdict::tends_to_zero;
    } else {
      report.loglog_slope = std::numeric_limits<double>::quiet_NaN();
      report.slope_std_err = std::numeric_limits<double>::quiet_NaN();
      report.verdict = Verdict::inconclusive;
    }
    report.grid = std::move(series);
    return report;
  }

  std::vector<long> ns;
  std::vector<double> vals;
  for (const auto& v : series) {
    ns.push_back(v.n);
    vals.push_back(v.value);
  }
  const auto fit = fit_loglog(ns, vals);
  report.loglog_slope = fit.slope;
  report.slope_std_err = fit.std_err;
  const double margin = std::max(2.0 * fit.std_err, kSlopeFloor);
  if (fit.slope < -margin) {
    report.verdict = Verdict::tends_to_zero;
  } else if (fit.slope > margin) {
    report.verdict = Verdict::diverges;
  } else if (fit.std_err <= kBoundedMaxStdErr) {
    report.verdict = Verdict::bounded;
  } else {
    report.verdict = Verdict::inconclusive;
  }
  report.grid = std::move(series);
  return report;
}

ConditionReport evaluate_series(std::span<const long> grid,
                                const std::function<ConditionValue(long)>& at) {
  std::vector<ConditionValue> series;
  series.reserve(grid.size());
  for (long n : grid) series.push_back(at(n));
  return asymptotic_verdict(std::move(series));
}

std::vector<long> geometric_grid(int kmin, int kmax) {
  if (kmin < 0 || kmax < kmin || kmax > 40) {
    throw Error(ErrorKind::invalid_parameter, "geometric grid exponents out of range");
  }
  std::vector<long> out;
  for (int k = kmin; k <= kmax; ++k) out.push_back(1L << k);
  return out;
}

namespace {

std::vector<ConditionReport> component_reports(
    std::span<const long> grid, const std::function<std::vector<ConditionValue>(long)>& at) {
  std::vector<std::vector<ConditionValue>> columns;
  for (long n : grid) {
    auto row = at(n);
    if (columns.empty()) columns.resize(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) columns[c].push_back(std::move(row[c]));
  }
  std::vector<ConditionReport> out;
  for (auto& col : columns) out.push_back(asymptotic_verdict(std::move(col)));
  return out;
}

bool is_finite_limit(Verdict v) { return v == Verdict::bounded || v == Verdict::tends_to_zero; }

}  // namespace

BerkAssessment assess_berk(const models::ArrayModel& model, std::span<const long> grid,
                           double delta) {
  BerkAssessment a;
  a.reports = component_reports(grid, [&](long n) { return berk_check(model, n, delta); });
  a.moment_bounded = is_finite_limit(a.reports[0].verdict);
  a.variance_rate_positive_limit = a.reports[1].verdict == Verdict::bounded;
  a.dependence_rate_vanishes = a.reports[2].verdict == Verdict::tends_to_zero;
  return a;
}

RomanoWolfAssessment assess_romano_wolf(const models::ArrayModel& model,
                                        std::span<const long> grid,
                                        const RomanoWolfInputs& inputs) {
  RomanoWolfAssessment a;
  a.reports = component_reports(grid, [&](long n) { return romano_wolf_check(model, n, inputs); });
  constexpr double kRel = 1e-12;
  a.moment_bound_holds = std::all_of(a.reports[0].grid.begin(), a.reports[0].grid.end(), [](const auto& v) {
    return v.value <= v.params.at("Delta_n") * (1.0 + kRel);
  });
  a.variance_floor_holds = std::all_of(a.reports[1].grid.begin(), a.reports[1].grid.end(), [](const auto& v) {
    return v.value >= v.params.at("L_n") * (1.0 - kRel);
  });
  a.ratio_bounded = is_finite_limit(a.reports[2].verdict);
  a.dependence_rate_vanishes = a.reports[3].verdict == Verdict::tends_to_zero;
  a.block_variance_bounded = is_finite_limit(a.reports[4].verdict);
  return a;
}

}  // namespace mdclt::conditions
