#include <doctest.h>

#include <omp.h>

#include "helpers.hpp"
#include "mdclt/conditions.hpp"
#include "mdclt/hall_heyde.hpp"
#include "mdclt/martingale.hpp"
#include "mdclt/monte_carlo.hpp"

using namespace th;

namespace {

// Run f under several thread counts and return each result.
template <typename F>
auto under_threads(F&& f) {
  const int saved = omp_get_max_threads();
  std::vector<decltype(f())> out;
  for (int t : {1, 2, 5}) {
    omp_set_num_threads(t);
    out.push_back(f());
  }
  omp_set_num_threads(saved);
  return out;
}

}  // namespace

TEST_CASE("simulation is bit-identical to the serial reference for any thread count") {
  for (const auto& m : catalogue()) {
    const auto serial = mdclt::montecarlo::simulate_normalized_sums_serial(m, 300, 400, 21).samples;
    for (const auto& par : under_threads([&] { return mdclt::montecarlo::simulate_normalized_sums(m, 300, 400, 21).samples; })) {
      CHECK(par == serial);
    }
  }
}

TEST_CASE("enumeration is bit-identical to the serial reference") {
  for (const auto& m : {two_scale(0.25), moving_average({1.0, 0.4}), block_repeat(DependenceSchedule::constant(2))}) {
    const auto serial = m.enumerate_outcomes_serial(7);
    for (const auto& par : under_threads([&] { return m.enumerate_outcomes(7); })) {
      CHECK(par.values == serial.values);
      CHECK(par.probs == serial.probs);
    }
  }
}

TEST_CASE("parallel reductions do not depend on the thread count") {
  const auto m = block_repeat(DependenceSchedule::floor_power(0.25), Innovation::normal);
  mdclt::conditions::EvalOptions mc;
  mc.monte_carlo = true;
  mc.reps = 1000;
  const auto vals = under_threads([&] { return mdclt::conditions::lindeberg_classic(m, 500, 0.1, mc).value; });
  CHECK(vals[0] == vals[1]);
  CHECK(vals[0] == vals[2]);
  const auto hh = under_threads([&] { return mdclt::oracle::hall_heyde_point(two_scale(0.3), 512, 300, 3).q_sd; });
  CHECK(hh[0] == hh[1]);
  CHECK(hh[0] == hh[2]);
  const auto sums = under_threads([&] { return mdclt::oracle::build_trace(two_scale(0.25), 6).sum_q(); });
  CHECK(sums[0] == sums[1]);
  CHECK(sums[0] == sums[2]);
}
