// Serial vs OpenMP timings for the three parallel kernels.
#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "mdclt/array_model.hpp"
#include "mdclt/conditions.hpp"
#include "mdclt/monte_carlo.hpp"

using namespace mdclt;

namespace {

double seconds(const std::function<void()>& f, int repeat = 3) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-34s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  models::ModelSpec ts;
  ts.family = models::Family::two_scale;
  const auto two_scale = models::ArrayModel::build(ts);

  models::ModelSpec br;
  br.family = models::Family::block_repeat;
  br.innovation = models::Innovation::normal;
  br.m_schedule = models::DependenceSchedule::floor_power(0.25);
  const auto block = models::ArrayModel::build(br);

  for (const auto* m : {&two_scale, &block}) {
    const long n = 1L << 12;
    const long reps = 4000;
    const double s = seconds([&] { (void)montecarlo::simulate_normalized_sums_serial(*m, n, reps, 7); });
    const double p = seconds([&] { (void)montecarlo::simulate_normalized_sums(*m, n, reps, 7); });
    char name[64];
    std::snprintf(name, sizeof name, "simulate %s n=2^12", std::string(models::to_string(m->family())).c_str());
    row(name, s, p);
  }

  {
    const long n = 9;
    const double s = seconds([&] { (void)two_scale.enumerate_outcomes_serial(n); });
    const double p = seconds([&] { (void)two_scale.enumerate_outcomes(n); });
    row("enumerate two-scale n=9", s, p);
  }

  {
    // Monte Carlo Lindeberg: one thread vs all threads on the same kernel.
    conditions::EvalOptions opts;
    opts.monte_carlo = true;
    opts.reps = 2000;
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double s = seconds([&] { (void)conditions::lindeberg_classic(block, 1L << 12, 0.1, opts); });
    omp_set_num_threads(threads);
    const double p = seconds([&] { (void)conditions::lindeberg_classic(block, 1L << 12, 0.1, opts); });
    row("MC lindeberg block-repeat n=2^12", s, p);
  }
  return 0;
}
