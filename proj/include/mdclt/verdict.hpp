#ifndef MDCLT_VERDICT_HPP_
#define MDCLT_VERDICT_HPP_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdclt/conditions.hpp"

namespace mdclt::conditions {

enum class Verdict { tends_to_zero, bounded, diverges, inconclusive };
std::string_view to_string(Verdict v);

/// A condition functional over an n-grid with its fitted log-log slope.
struct ConditionReport {
  std::string condition_id;
  std::string paper_eq;
  std::map<std::string, double> params;
  std::vector<ConditionValue> grid;
  double loglog_slope = 0.0;
  double slope_std_err = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct SlopeFit {
  double slope = 0.0;
  double std_err = 0.0;
};

/// Ordinary least squares of log(value) on log(n).
SlopeFit fit_loglog(std::span<const long> ns, std::span<const double> values);

/// Slopes smaller in magnitude than this are treated as flat. Series that
/// settle to a positive constant show small residual slopes from
/// finite-n corrections (about 3e-4 for the MA(1) Orey ratio).
inline constexpr double kSlopeFloor = 0.02;
/// A flat fit counts as "bounded" only when its standard error is below this.
inline constexpr double kBoundedMaxStdErr = 0.025;

/// Needs >= 4 points with strictly increasing n and nonnegative values.
/// A series whose last value is exactly 0 is declared tends-to-zero with
/// slope -inf. Otherwise: tends-to-zero if slope < -max(2 se, floor),
/// diverges if slope > max(2 se, floor), bounded if neither and
/// se <= kBoundedMaxStdErr, else inconclusive.
ConditionReport asymptotic_verdict(std::vector<ConditionValue> series);

/// Evaluate `at` on every grid point and fit the verdict.
ConditionReport evaluate_series(std::span<const long> grid,
                                const std::function<ConditionValue(long)>& at);

/// Powers of two 2^kmin .. 2^kmax.
std::vector<long> geometric_grid(int kmin, int kmax);

/// Berk's three requirements over a grid.
struct BerkAssessment {
  std::vector<ConditionReport> reports;  // moment, variance-rate, dependence-rate
  bool moment_bounded = false;
  bool variance_rate_positive_limit = false;
  bool dependence_rate_vanishes = false;
  bool satisfied() const {
    return moment_bounded && variance_rate_positive_limit && dependence_rate_vanishes;
  }
};

BerkAssessment assess_berk(const models::ArrayModel& model, std::span<const long> grid, double delta);

/// Romano-Wolf requirements over a grid; see romano_wolf_check.
struct RomanoWolfAssessment {
  std::vector<ConditionReport> reports;  // rw1, rw3, rw5, rw6, rw-block
  bool moment_bound_holds = false;
  bool variance_floor_holds = false;
  bool ratio_bounded = false;
  bool dependence_rate_vanishes = false;
  bool block_variance_bounded = false;
  bool satisfied() const {
    return moment_bound_holds && variance_floor_holds && ratio_bounded &&
           dependence_rate_vanishes && block_variance_bounded;
  }
};

RomanoWolfAssessment assess_romano_wolf(const models::ArrayModel& model, std::span<const long> grid,
                                        const RomanoWolfInputs& inputs);

}  // namespace mdclt::conditions

#endif  // MDCLT_VERDICT_HPP_
