#ifndef MDCLT_MONTE_CARLO_HPP_
#define MDCLT_MONTE_CARLO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdclt/array_model.hpp"

namespace mdclt::montecarlo {

/// Sorted replicates of S_n / σ_n.
struct EmpiricalDistribution {
  long n = 0;
  long reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;

  double mean() const;
  double variance() const;
};

/// Replicate r uses the row-sampling stream (seed, n, r), so the result does
/// not depend on the thread count. Needs reps >= 100 and σ_n > 0.
EmpiricalDistribution simulate_normalized_sums(const models::ArrayModel& model, long n, long reps,
                                               std::uint64_t seed);
EmpiricalDistribution simulate_normalized_sums_serial(const models::ArrayModel& model, long n,
                                                      long reps, std::uint64_t seed);

/// sup_x |F_R(x) − Φ(x)| for sorted samples.
double ks_statistic(std::span<const double> sorted_samples);
inline double ks_statistic(const EmpiricalDistribution& e) { return ks_statistic(e.samples); }

/// Upper 1% point of the Kolmogorov limit law, scaled: 1.63 / √R.
double kolmogorov_band_99(long reps);

struct ConvergencePoint {
  long n = 0;
  double ks = 0.0;
  long reps = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  bool moments_ok = false;  // |mean| <= 4/√R and |var − 1| <= 4√(2/R)
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> grid;
  /// No KS value exceeds its predecessor by more than the 99% band.
  bool monotone_trend = false;
  double final_ks = 0.0;
};

ConvergenceReport convergence_sweep(const models::ArrayModel& model, std::span<const long> grid,
                                    long reps, std::uint64_t seed);

/// Two columns z, F_R(z) − Φ(z) at each order statistic.
void write_plot_data(const EmpiricalDistribution& e, std::ostream& os);

}  // namespace mdclt::montecarlo

#endif  // MDCLT_MONTE_CARLO_HPP_
