#include "mdclt/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"
#include "mdclt/rng.hpp"

namespace mdclt::montecarlo {

namespace {

struct Setup {
  double sigma = 0.0;
  std::size_t latents = 0;
  std::size_t length = 0;
};

Setup prepare(const models::ArrayModel& model, long n, long reps) {
  if (reps < 100) throw Error(ErrorKind::invalid_parameter, "reps must be >= 100");
  const double s2 = model.exact_sigma2(n);
  if (!(s2 > 0.0)) throw Error(ErrorKind::degenerate_variance, model.describe() + ": sigma_n^2 = 0");
  return {std::sqrt(s2), static_cast<std::size_t>(model.latent_count(n)),
          static_cast<std::size_t>(model.length(n))};
}

double one_replicate(const models::ArrayModel& model, long n, std::uint64_t seed, long r,
                     const Setup& s, std::vector<double>& latents, std::vector<double>& row) {
  RandomStream stream(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r),
                      StreamPurpose::row_sampling);
  model.sample_row_into(n, stream, latents, row);
  return compensated_sum(row) / s.sigma;
}

EmpiricalDistribution finish(long n, long reps, std::uint64_t seed, std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  return {n, reps, seed, std::move(samples)};
}

}  // namespace

double EmpiricalDistribution::mean() const {
  return compensated_sum(samples) / static_cast<double>(samples.size());
}

double EmpiricalDistribution::variance() const {
  const double mu = mean();
  CompensatedSum acc;
  for (double x : samples) acc.add((x - mu) * (x - mu));
  return acc.value() / static_cast<double>(samples.size() - 1);
}

EmpiricalDistribution simulate_normalized_sums(const models::ArrayModel& model, long n, long reps,
                                               std::uint64_t seed) {
  const Setup s = prepare(model, n, reps);
  std::vector<double> out(static_cast<std::size_t>(reps));
#pragma omp parallel
  {
    std::vector<double> latents(s.latents), row(s.length);
#pragma omp for schedule(static)
    for (long r = 0; r < reps; ++r) {
      out[static_cast<std::size_t>(r)] = one_replicate(model, n, seed, r, s, latents, row);
    }
  }
  return finish(n, reps, seed, std::move(out));
}

EmpiricalDistribution simulate_normalized_sums_serial(const models::ArrayModel& model, long n,
                                                      long reps, std::uint64_t seed) {
  const Setup s = prepare(model, n, reps);
  std::vector<double> out(static_cast<std::size_t>(reps));
  std::vector<double> latents(s.latents), row(s.length);
  for (long r = 0; r < reps; ++r) {
    out[static_cast<std::size_t>(r)] = one_replicate(model, n, seed, r, s, latents, row);
  }
  return finish(n, reps, seed, std::move(out));
}

double ks_statistic(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorKind::invalid_parameter, "KS statistic of an empty sample");
  const double r = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / r - f, f - static_cast<double>(i) / r});
  }
  return d;
}

double kolmogorov_band_99(long reps) { return 1.63 / std::sqrt(static_cast<double>(reps)); }

ConvergenceReport convergence_sweep(const models::ArrayModel& model, std::span<const long> grid,
                                    long reps, std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorKind::insufficient_grid, "convergence sweep needs a grid");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (grid[j] <= grid[j - 1]) throw Error(ErrorKind::insufficient_grid, "grid must be increasing");
  }
  ConvergenceReport rep;
  const double rr = static_cast<double>(reps);
  for (long n : grid) {
    const auto e = simulate_normalized_sums(model, n, reps, seed);
    ConvergencePoint p;
    p.n = n;
    p.ks = ks_statistic(e);
    p.reps = reps;
    p.seed = seed;
    p.mean = e.mean();
    p.variance = e.variance();
    p.moments_ok = std::abs(p.mean) <= 4.0 / std::sqrt(rr) &&
                   std::abs(p.variance - 1.0) <= 4.0 * std::sqrt(2.0 / rr);
    rep.grid.push_back(p);
  }
  const double band = kolmogorov_band_99(reps);
  rep.monotone_trend = true;
  for (std::size_t j = 1; j < rep.grid.size(); ++j) {
    if (rep.grid[j].ks > rep.grid[j - 1].ks + band) rep.monotone_trend = false;
  }
  rep.final_ks = rep.grid.back().ks;
  return rep;
}

void write_plot_data(const EmpiricalDistribution& e, std::ostream& os) {
  const double r = static_cast<double>(e.samples.size());
  os << "z,ecdf_minus_phi\n" << std::setprecision(17);
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    os << e.samples[i] << ',' << static_cast<double>(i + 1) / r - normal_cdf(e.samples[i]) << '\n';
  }
}

}  // namespace mdclt::montecarlo
