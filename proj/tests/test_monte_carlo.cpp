#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "mdclt/hall_heyde.hpp"
#include "mdclt/monte_carlo.hpp"
#include "mdclt/rng.hpp"
#include "oracles.hpp"

using namespace th;
using namespace mdclt::montecarlo;
using mdclt::ErrorKind;

TEST_CASE("simulate_normalized_sums basics") {
  const auto e = simulate_normalized_sums(iid(), 1, 500, 3);
  for (double x : e.samples) CHECK(std::abs(x) == 1.0);
  CHECK(std::is_sorted(e.samples.begin(), e.samples.end()));
  CHECK(e.samples.size() == 500);
  CHECK(error_kind_of([] { simulate_normalized_sums(iid(), 4, 99, 1); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("moment sanity at every catalogue model") {
  const long reps = 4000;
  for (const auto& m : catalogue()) {
    CAPTURE(m.describe());
    const auto e = simulate_normalized_sums(m, 256, reps, 11);
    CHECK(std::abs(e.mean()) <= 4.0 / std::sqrt(double(reps)));
    CHECK(std::abs(e.variance() - 1.0) <= 4.0 * std::sqrt(2.0 / reps) * (m.is_discrete() ? 1.0 : 1.0));
  }
}

TEST_CASE("ks_statistic trivial cases") {
  const std::vector<double> zero{0.0};
  CHECK(ks_statistic(zero) == doctest::Approx(0.5));
  const std::vector<double> tens(50, 10.0);
  CHECK(ks_statistic(tens) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(error_kind_of([] { ks_statistic(std::vector<double>{}); }) == ErrorKind::invalid_parameter);
  CHECK(kolmogorov_band_99(10000) == doctest::Approx(0.0163));
}

TEST_CASE("ks_statistic against a brute-force supremum") {
  mdclt::RandomStream s(1, 0, 0, mdclt::StreamPurpose::reference_normals);
  std::vector<double> x(300);
  for (double& v : x) v = 0.8 * s.normal() + 0.1;
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // F_R jumps at x_i from i/R to (i+1)/R.
    const double f = oracle_ref::Phi(x[i]);
    d = std::max(d, std::abs(double(i) / x.size() - f));
    d = std::max(d, std::abs(double(i + 1) / x.size() - f));
  }
  CHECK(ks_statistic(x) == doctest::Approx(d).epsilon(1e-14));
}

TEST_CASE("kolmogorov band is the 99% point of the limit law") {
  CHECK(oracle_ref::kolmogorov_cdf(1.63) == doctest::Approx(0.99).epsilon(0.001));
}

TEST_CASE("null calibration: exact normals stay inside the 99% band") {
  const long reps = 10000;
  const double band = kolmogorov_band_99(reps);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    mdclt::RandomStream s(seed, 0, 0, mdclt::StreamPurpose::reference_normals);
    std::vector<double> x(reps);
    for (double& v : x) v = s.normal();
    std::sort(x.begin(), x.end());
    if (ks_statistic(x) < band) ++inside;
  }
  CHECK(inside >= 95);
}

TEST_CASE("convergence sweep bookkeeping") {
  const std::vector<long> grid{64, 256, 1024};
  const auto rep = convergence_sweep(two_scale(0.25), grid, 2000, 5);
  REQUIRE(rep.grid.size() == 3);
  CHECK(rep.final_ks == rep.grid.back().ks);
  CHECK(rep.grid.back().n == 1024);
  for (const auto& p : rep.grid) CHECK(p.moments_ok);
  const std::vector<long> bad{64, 64};
  CHECK(error_kind_of([&] { convergence_sweep(iid(), bad, 200, 1); }) == ErrorKind::insufficient_grid);
  std::ostringstream os;
  write_plot_data(simulate_normalized_sums(iid(), 16, 100, 1), os);
  CHECK(os.str().rfind("z,ecdf_minus_phi\n", 0) == 0);
}

TEST_CASE("tail-coupled sums are exactly normal") {
  const auto m = tail_coupled(DependenceSchedule::floor_power(0.25));
  const auto e = simulate_normalized_sums(m, 4096, 10000, 17);
  CHECK(ks_statistic(e) < 0.03);
}

TEST_CASE("hall-heyde hypotheses") {
  using namespace mdclt::oracle;
  SUBCASE("iid rademacher: Q is identically 1") {
    const auto p = hall_heyde_point(iid(), 64, 500, 2);
    CHECK(p.q_mean == doctest::Approx(1.0));
    CHECK(p.q_sd == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.max_dm_q90 == doctest::Approx(0.125));
  }
  SUBCASE("two-scale α=0.3 at n=2^14, 2000 reps") {
    const auto p = hall_heyde_point(two_scale(0.3), 1L << 14, 2000, 4);
    CHECK(std::abs(p.q_mean - 1.0) <= 0.05);
  }
  SUBCASE("grid report") {
    const auto grid = std::vector<long>{256, 1024, 4096, 16384};
    const auto rep = check_hh_hypotheses(two_scale(0.3), grid, 1000, 8);
    CHECK(rep.hh1);
    CHECK(rep.hh2);
    CHECK(rep.hh3);
    const auto blocks = check_hh_hypotheses(block_repeat(DependenceSchedule::floor_power(0.25), Innovation::normal),
                                            grid, 1000, 8);
    CHECK(blocks.passed());
  }
  SUBCASE("a dominant lead block violates HH1") {
    const auto grid = std::vector<long>{256, 1024, 4096, 16384};
    const auto rep = check_hh_hypotheses(block_repeat(DependenceSchedule::constant(1), Innovation::rademacher, 0.9),
                                         grid, 1000, 8);
    CHECK_FALSE(rep.hh1);
  }
  SUBCASE("bounded model obeys |ΔM| <= 4 m max|X| along samples") {
    const auto m = two_scale(0.25);
    const long n = 1024;
    const double bound = 4.0 * (1.0 / std::sqrt(double(n)) + 2.0 * std::pow(double(n), -0.25));
    const auto p = hall_heyde_point(m, n, 500, 1);
    CHECK(p.max_dm_q90 * std::sqrt(m.exact_sigma2(n)) <= bound);
  }
  CHECK(error_kind_of([] { hall_heyde_point(moving_average({1.0, 0.5}), 64, 100, 1); }) ==
        ErrorKind::unsupported_family);
}
