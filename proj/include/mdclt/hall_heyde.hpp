#ifndef MDCLT_HALL_HEYDE_HPP_
#define MDCLT_HALL_HEYDE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mdclt/array_model.hpp"
#include "mdclt/verdict.hpp"

namespace mdclt::oracle {

/// Monte Carlo statistics of the normalized martingale differences
/// ΔM_nk / σ_n at one n. M_nk is built from the prefix form
/// M_nk = T_nk + Σ_{i=k+1}^{k+m_n} E(X_ni | F_nk).
struct HallHeydePoint {
  long n = 0;
  long reps = 0;
  double max_dm_median = 0.0;  // median of max_k |ΔM_nk| / σ_n
  double max_dm_q90 = 0.0;
  double q_mean = 0.0;         // mean of Q_n / σ_n²
  double q_sd = 0.0;
  double q_within_005 = 0.0;   // fraction of rows with |Q_n/σ_n² − 1| <= 0.05
  double max_dm2_mean = 0.0;   // E max_k ΔM_nk² / σ_n²
  double max_dm2_std_err = 0.0;
};

struct HallHeydeReport {
  std::vector<HallHeydePoint> grid;
  conditions::ConditionReport max_increment;  // q90 of max |ΔM|; HH1
  conditions::ConditionReport qv_spread;      // sd of Q_n/σ_n²; HH2
  conditions::ConditionReport max_square;     // E max ΔM²; HH3
  bool hh1 = false;
  bool hh2 = false;
  bool hh3 = false;
  bool passed() const { return hh1 && hh2 && hh3; }
};

/// One grid point. Throws unsupported_family without closed-form
/// conditional expectations.
HallHeydePoint hall_heyde_point(const models::ArrayModel& model, long n, long reps,
                                std::uint64_t seed);

/// Needs >= 4 grid points. HH1 holds when the q90 trend tends to zero, HH2
/// when the spread of Q_n tends to zero with mean near 1, HH3 when the
/// expected squared maximum stays bounded.
HallHeydeReport check_hh_hypotheses(const models::ArrayModel& model, std::span<const long> grid,
                                    long reps, std::uint64_t seed);

}  // namespace mdclt::oracle

#endif  // MDCLT_HALL_HEYDE_HPP_
