#ifndef MDCLT_MARTINGALE_HPP_
#define MDCLT_MARTINGALE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdclt/array_model.hpp"

namespace mdclt::oracle {

/// Exact Doob martingale M_nk = E(S_n | F_nk) of one enumerable row.
///
/// Outcomes are sorted lexicographically and identical rows merged, so the
/// cells of F_nk (outcomes sharing the prefix X_n1..X_nk) are contiguous runs
/// of the table. W_nik = E(X_ni | F_nk) is constant on a cell and is stored
/// once per cell.
class MartingaleTrace {
 public:
  struct Level {
    std::vector<std::size_t> start;  // cell c covers outcomes [start[c], start[c+1])
    std::vector<double> w;           // cells x N, W_{n,i,k} at w[c*N + i-1]
    std::vector<double> m;           // M_nk per cell
    std::size_t cells() const { return start.size() - 1; }
  };

  long n() const { return n_; }
  long length() const { return length_; }
  long dependence() const { return m_; }
  double sigma2() const { return sigma2_; }
  const models::OutcomeTable& table() const { return table_; }
  const Level& level(long k) const { return levels_.at(static_cast<std::size_t>(k)); }

  std::size_t cell_of(long k, std::size_t outcome) const;
  double w(long k, std::size_t cell, long i) const {
    return levels_[static_cast<std::size_t>(k)].w[cell * static_cast<std::size_t>(length_) +
                                                 static_cast<std::size_t>(i - 1)];
  }
  /// ΔM_nk on an outcome, k = 1..N.
  double dm(std::size_t outcome, long k) const {
    return dm_[outcome * static_cast<std::size_t>(length_) + static_cast<std::size_t>(k - 1)];
  }
  /// Q_n = Σ_k ΔM_nk² on an outcome.
  double quadratic_variation(std::size_t outcome) const { return qv_[outcome]; }
  /// q_nk = E ΔM_nk², k = 1..N.
  double q(long k) const { return q_[static_cast<std::size_t>(k - 1)]; }

  double sum_q() const;
  double mean_quadratic_variation() const;
  double variance_quadratic_variation() const;
  double max_abs_dm() const;

  std::optional<std::size_t> find_outcome(std::span<const double> row) const;

  /// Negative-control hook: shift one stored W entry.
  void perturb_conditional_mean(long k, std::size_t cell, long i, double delta);

  friend MartingaleTrace build_trace(const models::ArrayModel& model, long n);

 private:
  long n_ = 0;
  long length_ = 0;
  long m_ = 0;
  double sigma2_ = 0.0;
  models::OutcomeTable table_;
  std::vector<Level> levels_;
  std::vector<double> dm_;
  std::vector<double> qv_;
  std::vector<double> q_;
};

/// Throws too_large / continuous_model when the row cannot be enumerated.
MartingaleTrace build_trace(const models::ArrayModel& model, long n);

struct Violation {
  long k = 0;
  long i = 0;
  std::size_t outcome = 0;
};

struct CheckResult {
  std::string name;
  std::string paper_eq;
  bool passed = true;
  double max_error = 0.0;  // or realized value for bound checks
  double tolerance = 0.0;  // or bound
  std::optional<Violation> first_violation;
};

inline constexpr double kIdentityTolerance = 1e-10;

/// Identities of the Doob decomposition on every outcome.
std::vector<CheckResult> check_structure(const MartingaleTrace& trace);

/// Throws Error(structural_violation) naming the first failed identity.
void require_passed(const std::vector<CheckResult>& results);

struct BoundsReport {
  double epsilon = 0.0;
  std::vector<CheckResult> results;
  double var_q_ratio = 0.0;   // Var Q_n / (ε² σ_n²), must be <= 48
  double max_dm_ratio = 0.0;  // max |ΔM_nk| / ε, must be <= 4
  bool passed() const;
};

/// Requires |X_ni| <= ε / max(m_n, 1) on every outcome (throws
/// hypothesis_violation otherwise).
BoundsReport check_bounds(const MartingaleTrace& trace, double epsilon);

struct TruncationReport {
  long n = 0;
  double epsilon = 0.0;
  double threshold = 0.0;
  double tail_second_moment = 0.0;   // E[(S_n'')^2]
  double tail_bound = 0.0;           // (2m+1) Σ E[X² 1{|X| > t}]
  double max_abs_inner = 0.0;        // max |X'_ni|
  double max_centering = 0.0;        // max |μ_i|
  std::vector<CheckResult> results;
  bool passed() const;
};

TruncationReport check_truncation(const models::ArrayModel& model, long n, double epsilon);

/// One-line summary of a trace and its checks.
struct TraceSummary {
  long n = 0;
  double sigma2 = 0.0;
  double sum_q = 0.0;
  double var_q = 0.0;
  double max_abs_dm = 0.0;
  std::vector<std::pair<std::string, bool>> pass_flags;
};

TraceSummary summarize(const MartingaleTrace& trace, const std::vector<CheckResult>& structure,
                       const BoundsReport* bounds, const TruncationReport* truncation);

/// Full per-cell dump (k, cell, prob, M, W_1..W_N); refuses N > 8.
void write_trace_csv(const MartingaleTrace& trace, std::ostream& os);

}  // namespace mdclt::oracle

#endif  // MDCLT_MARTINGALE_HPP_
