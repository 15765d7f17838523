#include "mdclt/hall_heyde.hpp"

#include <algorithm>
#include <cmath>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"
#include "mdclt/rng.hpp"

namespace mdclt::oracle {

namespace {

double quantile_of_sorted(const std::vector<double>& v, double p) {
  const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(idx, 1) - 1];
}

conditions::ConditionValue point_value(const char* id, long n, double value, double se) {
  conditions::ConditionValue v;
  v.condition_id = id;
  v.paper_eq = id;
  v.n = n;
  v.value = value;
  v.method = conditions::Method::monte_carlo;
  v.mc_std_err = se;
  return v;
}

}  // namespace

HallHeydePoint hall_heyde_point(const models::ArrayModel& model, long n, long reps,
                                std::uint64_t seed) {
  if (!model.has_closed_form_lookahead()) {
    throw Error(ErrorKind::unsupported_family,
                model.describe() + " has no closed-form conditional expectations");
  }
  if (reps < 2) throw Error(ErrorKind::invalid_parameter, "reps must be >= 2");
  const double sigma2 = model.exact_sigma2(n);
  if (!(sigma2 > 0.0)) throw Error(ErrorKind::degenerate_variance, "sigma_n^2 = 0");
  const double sigma = std::sqrt(sigma2);
  const long len = model.length(n);
  const auto latent_size = static_cast<std::size_t>(model.latent_count(n));
  const auto row_size = static_cast<std::size_t>(len);

  std::vector<double> max_abs(static_cast<std::size_t>(reps));
  std::vector<double> qv(static_cast<std::size_t>(reps));

#pragma omp parallel
  {
    std::vector<double> latents(latent_size), row(row_size), ahead(row_size + 1);
#pragma omp for schedule(static)
    for (long r = 0; r < reps; ++r) {
      RandomStream stream(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r),
                          StreamPurpose::row_sampling);
      model.sample_row_into(n, stream, latents, row);
      model.lookahead_path(n, latents, row, ahead);
      CompensatedSum prefix, q;
      double prev = 0.0, biggest = 0.0;
      for (long k = 1; k <= len; ++k) {
        prefix.add(row[static_cast<std::size_t>(k - 1)]);
        const double mk = prefix.value() + ahead[static_cast<std::size_t>(k)];
        const double d = (mk - prev) / sigma;
        prev = mk;
        biggest = std::max(biggest, std::abs(d));
        q.add(d * d);
      }
      max_abs[static_cast<std::size_t>(r)] = biggest;
      qv[static_cast<std::size_t>(r)] = q.value();
    }
  }

  HallHeydePoint p;
  p.n = n;
  p.reps = reps;
  const double rr = static_cast<double>(reps);
  CompensatedSum qs, qss, ms, mss;
  long within = 0;
  for (long r = 0; r < reps; ++r) {
    const double q = qv[static_cast<std::size_t>(r)];
    const double m2 = max_abs[static_cast<std::size_t>(r)] * max_abs[static_cast<std::size_t>(r)];
    qs.add(q);
    qss.add(q * q);
    ms.add(m2);
    mss.add(m2 * m2);
    if (std::abs(q - 1.0) <= 0.05) ++within;
  }
  p.q_mean = qs.value() / rr;
  p.q_sd = std::sqrt(std::max(0.0, (qss.value() - rr * p.q_mean * p.q_mean) / (rr - 1.0)));
  p.q_within_005 = static_cast<double>(within) / rr;
  p.max_dm2_mean = ms.value() / rr;
  p.max_dm2_std_err =
      std::sqrt(std::max(0.0, (mss.value() - rr * p.max_dm2_mean * p.max_dm2_mean) / (rr - 1.0)) / rr);
  std::sort(max_abs.begin(), max_abs.end());
  p.max_dm_median = quantile_of_sorted(max_abs, 0.5);
  p.max_dm_q90 = quantile_of_sorted(max_abs, 0.9);
  return p;
}

HallHeydeReport check_hh_hypotheses(const models::ArrayModel& model, std::span<const long> grid,
                                    long reps, std::uint64_t seed) {
  if (grid.size() < 4) throw Error(ErrorKind::insufficient_grid, "HH checks need >= 4 grid points");
  HallHeydeReport rep;
  std::vector<conditions::ConditionValue> hh1, hh2, hh3;
  for (long n : grid) {
    auto p = hall_heyde_point(model, n, reps, seed);
    const double se_sd = p.q_sd / std::sqrt(2.0 * static_cast<double>(reps - 1));
    hh1.push_back(point_value("HH1", n, p.max_dm_q90, p.max_dm_q90 / std::sqrt(static_cast<double>(reps))));
    hh2.push_back(point_value("HH2", n, p.q_sd, se_sd));
    hh3.push_back(point_value("HH3", n, p.max_dm2_mean, p.max_dm2_std_err));
    rep.grid.push_back(p);
  }
  rep.max_increment = conditions::asymptotic_verdict(std::move(hh1));
  rep.qv_spread = conditions::asymptotic_verdict(std::move(hh2));
  rep.max_square = conditions::asymptotic_verdict(std::move(hh3));
  using conditions::Verdict;
  rep.hh1 = rep.max_increment.verdict == Verdict::tends_to_zero;
  rep.hh2 = rep.qv_spread.verdict == Verdict::tends_to_zero &&
            std::abs(rep.grid.back().q_mean - 1.0) <= 0.05;
  rep.hh3 = rep.max_square.verdict == Verdict::tends_to_zero ||
            rep.max_square.verdict == Verdict::bounded;
  return rep;
}

}  // namespace mdclt::oracle
