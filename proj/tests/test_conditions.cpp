#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mdclt/conditions.hpp"
#include "mdclt/verdict.hpp"
#include "oracles.hpp"

using namespace th;
using namespace mdclt::conditions;
using mdclt::ErrorKind;

namespace {

ArrayModel floored(const ArrayModel& m, long n) {
  return m.dependence(n) == 0 ? m.with_unit_dependence_floor() : m;
}

}  // namespace

TEST_CASE("tail_second_moment examples") {
  const auto m = iid();
  // Rademacher ±1/2 at n = 4.
  CHECK(tail_second_moment(m, 4, 1, 0.3).value == doctest::Approx(0.25));
  CHECK(tail_second_moment(m, 4, 1, 0.5).value == 0.0);
  CHECK(tail_second_moment(m, 4, 1, 0.3).method == Method::enumeration);
  const auto g = iid(Innovation::normal);
  const double t = 0.7;
  const double z = t * 2.0;  // standardized threshold at n = 4
  CHECK(tail_second_moment(g, 4, 2, t).value ==
        doctest::Approx(0.25 * 2.0 * (z * oracle_ref::phi(z) + 1.0 - oracle_ref::Phi(z))));
  CHECK(tail_second_moment(g, 4, 2, t).method == Method::closed_form);
  for (const auto& model : catalogue()) {
    const long n = 12;
    for (long i = 1; i <= model.length(n); ++i) {
      CHECK(tail_second_moment(model, n, i, 0.0).value ==
            doctest::Approx(model.exact_cov(n, i, i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lindeberg_classic examples") {
  SUBCASE("two-scale vanishes once n^{-1/2} + 2n^{-α} <= εσ_n") {
    const double alpha = 0.25, eps = 0.5;
    const auto m = two_scale(alpha);
    for (long n = 16; n <= (1L << 14); n *= 2) {
      const double bound = 1.0 / std::sqrt(double(n)) + 2.0 * std::pow(double(n), -alpha);
      if (bound <= eps * std::sqrt(m.exact_sigma2(n))) CHECK(lindeberg_classic(m, n, eps).value == 0.0);
    }
  }
  SUBCASE("iid below threshold") {
    CHECK(lindeberg_classic(iid(), 100, 0.2).value == 0.0);
    CHECK(lindeberg_classic(iid(), 100, 0.05).value == doctest::Approx(1.0));
  }
  SUBCASE("block-repeat normal m=2, n=8, ε=0.5") {
    const auto m = block_repeat(DependenceSchedule::constant(2), Innovation::normal);
    const double s2 = m.exact_sigma2(8);
    CHECK(s2 == doctest::Approx(4.0));
    const auto y = mdclt::models::EntryLaw::gaussian(1.0);
    const double expected = 0.5 * (1.0 / s2) * 4.0 * y.tail_second_moment(0.5 * std::sqrt(s2) * 2.0);
    CHECK(lindeberg_classic(m, 8, 0.5).value == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(lindeberg_classic(iid(), 4, 0.5).paper_eq == "tmL");
  CHECK(error_kind_of([] { lindeberg_classic(iid(), 4, 0.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("lindeberg_mdep examples") {
  const auto ts = two_scale(0.3);
  for (long n : {8L, 100L, 1000L}) {
    for (double eps : {0.1, 0.5, 1.0}) {
      CHECK(lindeberg_mdep(ts, n, eps).value == doctest::Approx(lindeberg_classic(ts, n, eps).value));
    }
  }
  CHECK(error_kind_of([] { lindeberg_mdep(iid(), 10, 0.5); }) == ErrorKind::zero_dependence);
  CHECK(lindeberg_mdep(iid().with_unit_dependence_floor(), 10, 0.5).value ==
        lindeberg_classic(iid(), 10, 0.5).value);
  // Bounded rows: |X| = 1/(m√J)... with Rademacher blocks |X| = 1/m and εσ/m = ε√J/m.
  const auto br = block_repeat(DependenceSchedule::constant(3));
  CHECK(lindeberg_mdep(br, 300, 0.5).value == 0.0);
  CHECK(lindeberg_mdep(br, 300, 0.5).paper_eq == "tmnL");
}

TEST_CASE("block-repeat lindeberg_mdep equals classic lindeberg of the innovations") {
  for (auto sched : {DependenceSchedule::constant(2), DependenceSchedule::floor_power(0.3),
                     DependenceSchedule::floor_log()}) {
    const auto m = block_repeat(sched, Innovation::normal);
    const auto y = m.block_innovations();
    for (long n : {16L, 250L, 4096L}) {
      CHECK(y.length(n) * m.dependence(n) == m.length(n));
      for (double eps : {0.05, 0.2, 0.7}) {
        CHECK(std::abs(lindeberg_mdep(m, n, eps).value - lindeberg_classic(y, n, eps).value) < 1e-12);
      }
    }
  }
}

TEST_CASE("lyapunov_ratio examples") {
  for (long n : {4L, 50L, 999L}) {
    CHECK(lyapunov_ratio(iid(), n, 4.0).value == doctest::Approx(1.0 / n).epsilon(1e-13));
  }
  // Two-scale α=0.3, r=4 against the oracle rows (m = 1).
  const int n = 7;
  const auto rows = oracle_ref::two_scale_rows(n, 0.3);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += oracle_ref::expect(rows, [i](const std::vector<double>& x) { return std::pow(x[i], 4); });
  }
  const double s2 = oracle_ref::var_sum(rows);
  CHECK(lyapunov_ratio(two_scale(0.3), n, 4.0).value == doctest::Approx(sum / (s2 * s2)).epsilon(1e-12));
  // Large n: ~ 2^{r-1} n^{1-rα}.
  const long big = 1L << 22;
  CHECK(lyapunov_ratio(two_scale(0.3), big, 4.0).value / (8.0 * std::pow(double(big), 1 - 1.2)) ==
        doctest::Approx(1.0).epsilon(0.05));
  CHECK(error_kind_of([] { lyapunov_ratio(iid(), 4, 2.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("orey_ratio examples") {
  CHECK(orey_ratio(two_scale(0.25), 16).value == doctest::Approx(9.0 / 1.5));
  for (long n : {1L, 10L, 1000L}) CHECK(orey_ratio(iid(), n).value == doctest::Approx(1.0));
  const auto br = block_repeat(DependenceSchedule::constant(3));
  const auto t = br.enumerate_outcomes(12);
  double sv = 0.0;
  for (long i = 1; i <= t.length; ++i) sv += t.covariance(i, i);
  CHECK(orey_ratio(br, 12).value == doctest::Approx(sv / t.row_sum_variance()).epsilon(1e-13));
  CHECK(orey_ratio(br, 12).value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rio_functional examples") {
  // |X| <= σ/m: the min picks its first branch.
  const auto ts = two_scale(0.25);
  const long n = 64;
  const double s2 = ts.exact_sigma2(n);
  double cubic = 0.0;
  for (const auto& b : ts.entry_laws(n)) cubic += b.count * b.law.abs_moment(3.0);
  CHECK(rio_functional(ts, n).value == doctest::Approx(cubic / std::pow(s2, 1.5)).epsilon(1e-13));
  CHECK(error_kind_of([] { rio_functional(iid(), 8); }) == ErrorKind::zero_dependence);
  const auto rep = evaluate_series(geometric_grid(6, 24), [](long k) { return rio_functional(two_scale(0.3), k); });
  CHECK(rep.verdict != Verdict::tends_to_zero);
  const auto rep4 = evaluate_series(geometric_grid(6, 24), [](long k) { return rio_functional(two_scale(0.4), k); });
  CHECK(rep4.verdict == Verdict::tends_to_zero);
}

TEST_CASE("condition ordering inequalities on every catalogued model") {
  for (const auto& model : catalogue()) {
    for (long n : geometric_grid(3, 16)) {
      const auto m = floored(model, n);
      const double rio = rio_functional(m, n).value;
      const double ly3 = lyapunov_ratio(m, n, 3.0).value;
      CHECK(rio <= ly3 * (1 + 1e-12));
      for (double eps : {0.05, 0.1, 0.5, 1.0, 2.0}) {
        const double ld = lindeberg_mdep(m, n, eps).value;
        CHECK(ld <= rio / std::min(eps, 1.0) * (1 + 1e-12) + 1e-300);
        for (double r : {2.5, 3.0, 4.0, 6.0}) {
          CHECK(ld <= std::pow(eps, 2 - r) * lyapunov_ratio(m, n, r).value * (1 + 1e-12) + 1e-300);
        }
      }
    }
  }
}

TEST_CASE("lindeberg functionals are non-increasing in epsilon") {
  for (const auto& model : catalogue()) {
    for (long n : {10L, 300L}) {
      const auto m = floored(model, n);
      double prev_c = INFINITY, prev_m = INFINITY;
      for (double eps : {0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 3.0}) {
        const double c = lindeberg_classic(m, n, eps).value;
        const double d = lindeberg_mdep(m, n, eps).value;
        CHECK(c <= prev_c);
        CHECK(d <= prev_m);
        prev_c = c;
        prev_m = d;
      }
    }
  }
}

TEST_CASE("functionals are scale invariant") {
  for (const auto& model : catalogue()) {
    const long n = 77;
    const auto a = floored(model, n);
    for (double c : {0.01, 3.7}) {
      const auto b = a.scaled(c);
      CHECK(lindeberg_classic(b, n, 0.3).value == doctest::Approx(lindeberg_classic(a, n, 0.3).value).epsilon(1e-10));
      CHECK(lindeberg_mdep(b, n, 0.3).value == doctest::Approx(lindeberg_mdep(a, n, 0.3).value).epsilon(1e-10));
      CHECK(lyapunov_ratio(b, n, 3.5).value == doctest::Approx(lyapunov_ratio(a, n, 3.5).value).epsilon(1e-10));
      CHECK(orey_ratio(b, n).value == doctest::Approx(orey_ratio(a, n).value).epsilon(1e-10));
      CHECK(rio_functional(b, n).value == doctest::Approx(rio_functional(a, n).value).epsilon(1e-10));
    }
  }
}

TEST_CASE("monte carlo estimates agree with exact values within 4 standard errors") {
  EvalOptions mc;
  mc.monte_carlo = true;
  mc.reps = 20000;
  mc.seed = 99;
  for (const auto& model : catalogue()) {
    const long n = 64;
    const auto m = floored(model, n);
    auto agree = [](const ConditionValue& exact, const ConditionValue& est) {
      CHECK(est.method == Method::monte_carlo);
      CHECK(std::abs(est.value - exact.value) <= 4.0 * est.mc_std_err + 1e-12);
    };
    agree(lindeberg_classic(m, n, 0.1), lindeberg_classic(m, n, 0.1, mc));
    agree(lindeberg_mdep(m, n, 0.1), lindeberg_mdep(m, n, 0.1, mc));
    agree(lyapunov_ratio(m, n, 3.0), lyapunov_ratio(m, n, 3.0, mc));
    agree(orey_ratio(m, n), orey_ratio(m, n, mc));
    agree(rio_functional(m, n), rio_functional(m, n, mc));
    // Constant |X| (Rademacher rows) gives an exactly zero standard error.
    if (!m.is_discrete()) CHECK(lyapunov_ratio(m, n, 3.0, mc).mc_std_err > 0.0);
  }
}

TEST_CASE("berk_check examples") {
  const double delta = 1.0;
  for (long n : {4L, 64L, 1000L}) {
    const auto v = berk_check(iid(), n, delta);
    REQUIRE(v.size() == 3);
    CHECK(v[0].value == doctest::Approx(std::pow(double(n), -(2 + delta) / 2)));
    CHECK(v[1].value == doctest::Approx(1.0 / n));
    CHECK(v[0].paper_eq == "berki");
    CHECK(v[2].paper_eq == "berkiv");
  }
  const auto grid = geometric_grid(8, 24);
  const auto tc = tail_coupled(DependenceSchedule::floor_power(0.25));
  for (double d : {1.0, 3.0}) {
    const auto rep = evaluate_series(grid, [&](long n) { return berk_check(tc, n, d)[2]; });
    const double expected = (2 + 2 / d) / 4 - 1;
    CHECK(std::abs(rep.loglog_slope - expected) < 0.05);
    CHECK((rep.verdict == Verdict::tends_to_zero) == (d > 2));
  }
  CHECK(assess_berk(iid(), grid, 1.0).variance_rate_positive_limit == false);
}

TEST_CASE("romano_wolf_check") {
  SUBCASE("γ = 0 with sup-moment and per-entry variance reduces to berk") {
    RomanoWolfInputs in{1.0, 0.0, presets::sup_moment(1.0), presets::per_entry_variance(), "sup", "per"};
    for (const auto& model : catalogue()) {
      for (long n : {20L, 500L}) {
        const auto rw = romano_wolf_check(model, n, in);
        const auto bk = berk_check(model, n, 1.0);
        REQUIRE(rw.size() == 5);
        CHECK(rw[0].value == doctest::Approx(bk[0].value).epsilon(1e-14));
        CHECK(rw[1].value == doctest::Approx(bk[1].value).epsilon(1e-14));
        CHECK(rw[0].params.at("Delta_n") == doctest::Approx(bk[0].value));
        CHECK(rw[1].params.at("L_n") == doctest::Approx(bk[1].value));
      }
    }
  }
  SUBCASE("RW6 matches its closed form m^{1+(1-γ)(1+2/δ)} / N") {
    const auto tc = tail_coupled(DependenceSchedule::floor_power(0.2));
    for (double gamma : {-0.5, 0.0, 0.5}) {
      const auto in = default_romano_wolf_inputs(1.0, gamma);
      for (long n : geometric_grid(6, 24)) {
        const double m = std::max(tc.dependence(n), 1L);
        const double expected = std::pow(m, 1 + (1 - gamma) * 3) / tc.length(n);
        CHECK(romano_wolf_check(tc, n, in)[3].value == doctest::Approx(expected).epsilon(1e-12));
      }
      // Far out, where ⌊n^β⌋ ≈ n^β, the slope approaches β(1+3(1-γ)) - 1.
      std::vector<long> far;
      for (int k = 40; k <= 60; k += 2) far.push_back(1L << k);
      const auto rep = evaluate_series(far, [&](long n) { return romano_wolf_check(tc, n, in)[3]; });
      CHECK(std::abs(rep.loglog_slope - (0.2 * (1 + (1 - gamma) * 3) - 1)) <= 0.02);
    }
  }
  SUBCASE("tail-coupled fails for every growing m_n") {
    for (double beta : {0.1, 0.2, 0.3, 0.45}) {
      const auto tc = tail_coupled(DependenceSchedule::floor_power(beta));
      for (double gamma : {-1.0, 0.0, 0.5, 0.9}) {
        const auto a = assess_romano_wolf(tc, geometric_grid(6, 24), default_romano_wolf_inputs(1.0, gamma));
        CHECK_FALSE(a.satisfied());
        CHECK_FALSE(a.block_variance_bounded);
      }
    }
  }
  SUBCASE("fixed-m moving average satisfies all of them") {
    const auto a = assess_romano_wolf(moving_average({1.0, 0.5}), geometric_grid(6, 24),
                                      default_romano_wolf_inputs(1.0, 0.0));
    CHECK(a.satisfied());
  }
  CHECK(error_kind_of([] { romano_wolf_check(iid(), 8, default_romano_wolf_inputs(1.0, 1.0)); }) ==
        ErrorKind::invalid_parameter);
}
