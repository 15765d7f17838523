#include "mdclt/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"
#include "mdclt/rng.hpp"

namespace mdclt::conditions {

using models::ArrayModel;
using models::EntryLaw;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::enumeration: return "enumeration";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

namespace {

double checked_sigma2(const ArrayModel& model, long n) {
  const double s2 = model.exact_sigma2(n);
  if (!(s2 > 0.0)) {
    throw Error(ErrorKind::degenerate_variance, model.describe() + " has sigma_n = 0 at n=" +
                                                    std::to_string(n));
  }
  return s2;
}

long checked_dependence(const ArrayModel& model, long n) {
  const long m = model.dependence(n);
  if (m == 0) {
    throw Error(ErrorKind::zero_dependence,
                "m_n = 0; substitute 1 via with_unit_dependence_floor()");
  }
  return m;
}

struct SumEstimate {
  double value = 0.0;
  Method method = Method::closed_form;
  double std_err = 0.0;
};

// Σ_i E[h(X_ni)] either exactly from the grouped entry laws or by sampling rows.
template <typename LawFn, typename PointFn>
SumEstimate sum_over_entries(const ArrayModel& model, long n, LawFn&& law_fn, PointFn&& point_fn,
                             const EvalOptions& opts) {
  if (!opts.monte_carlo) {
    CompensatedSum acc;
    Method method = Method::closed_form;
    for (const auto& block : model.entry_laws(n)) {
      acc.add(static_cast<double>(block.count) * law_fn(block.law));
      if (block.law.is_discrete()) method = Method::enumeration;
    }
    return {acc.value(), method, 0.0};
  }
  if (opts.reps < 2) throw Error(ErrorKind::invalid_parameter, "monte carlo needs reps >= 2");
  const long len = model.length(n);
  const long latents = model.latent_count(n);
  std::vector<double> totals(static_cast<std::size_t>(opts.reps));
#pragma omp parallel
  {
    std::vector<double> z(static_cast<std::size_t>(latents));
    std::vector<double> row(static_cast<std::size_t>(len));
#pragma omp for schedule(static)
    for (long r = 0; r < opts.reps; ++r) {
      RandomStream stream(opts.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r),
                          StreamPurpose::functional_estimation);
      model.sample_row_into(n, stream, z, row);
      CompensatedSum acc;
      for (double x : row) acc.add(point_fn(x));
      totals[static_cast<std::size_t>(r)] = acc.value();
    }
  }
  const double mean = compensated_sum(totals) / static_cast<double>(opts.reps);
  CompensatedSum ss;
  for (double t : totals) ss.add((t - mean) * (t - mean));
  const double var = ss.value() / static_cast<double>(opts.reps - 1);
  return {mean, Method::monte_carlo, std::sqrt(var / static_cast<double>(opts.reps))};
}

ConditionValue make_value(std::string id, std::string eq, long n, double prefactor,
                          const SumEstimate& s, std::map<std::string, double> params) {
  ConditionValue v;
  v.condition_id = std::move(id);
  v.paper_eq = std::move(eq);
  v.n = n;
  v.value = prefactor * s.value;
  v.method = s.method;
  v.mc_std_err = prefactor * s.std_err;
  v.params = std::move(params);
  return v;
}

}  // namespace

MomentEstimate tail_second_moment(const ArrayModel& model, long n, long i, double t,
                                  const EvalOptions& opts) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_parameter, "threshold t must be >= 0");
  const EntryLaw law = model.entry_law(n, i);
  if (!opts.monte_carlo) {
    return {law.tail_second_moment(t), law.is_discrete() ? Method::enumeration : Method::closed_form,
            0.0};
  }
  const long len = model.length(n);
  std::vector<double> draws(static_cast<std::size_t>(opts.reps));
#pragma omp parallel
  {
    std::vector<double> z(static_cast<std::size_t>(model.latent_count(n)));
    std::vector<double> row(static_cast<std::size_t>(len));
#pragma omp for schedule(static)
    for (long r = 0; r < opts.reps; ++r) {
      RandomStream stream(opts.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r),
                          StreamPurpose::functional_estimation);
      model.sample_row_into(n, stream, z, row);
      const double x = row[static_cast<std::size_t>(i - 1)];
      draws[static_cast<std::size_t>(r)] = std::abs(x) > t ? x * x : 0.0;
    }
  }
  const double mean = compensated_sum(draws) / static_cast<double>(opts.reps);
  CompensatedSum ss;
  for (double d : draws) ss.add((d - mean) * (d - mean));
  return {mean, Method::monte_carlo,
          std::sqrt(ss.value() / static_cast<double>(opts.reps - 1) / static_cast<double>(opts.reps))};
}

ConditionValue lindeberg_classic(const ArrayModel& model, long n, double eps,
                                 const EvalOptions& opts) {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_parameter, "epsilon must be > 0");
  const double s2 = checked_sigma2(model, n);
  const double t = eps * std::sqrt(s2);
  auto s = sum_over_entries(
      model, n, [t](const EntryLaw& law) { return law.tail_second_moment(t); },
      [t](double x) { return std::abs(x) > t ? x * x : 0.0; }, opts);
  return make_value("lindeberg-classic", "tmL", n, 1.0 / s2, s, {{"eps", eps}});
}

ConditionValue lindeberg_mdep(const ArrayModel& model, long n, double eps,
                              const EvalOptions& opts) {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_parameter, "epsilon must be > 0");
  const double s2 = checked_sigma2(model, n);
  const double m = static_cast<double>(checked_dependence(model, n));
  const double t = eps * std::sqrt(s2) / m;
  auto s = sum_over_entries(
      model, n, [t](const EntryLaw& law) { return law.tail_second_moment(t); },
      [t](double x) { return std::abs(x) > t ? x * x : 0.0; }, opts);
  return make_value("lindeberg-mdep", "tmnL", n, m / s2, s, {{"eps", eps}});
}

ConditionValue lyapunov_ratio(const ArrayModel& model, long n, double r, const EvalOptions& opts) {
  if (!(r > 2.0)) throw Error(ErrorKind::invalid_parameter, "Lyapunov exponent r must be > 2");
  const double s2 = checked_sigma2(model, n);
  const double m = static_cast<double>(std::max(model.dependence(n), 1L));
  auto s = sum_over_entries(
      model, n, [r](const EntryLaw& law) { return law.abs_moment(r); },
      [r](double x) { return std::pow(std::abs(x), r); }, opts);
  const double prefactor = std::pow(m, r - 1.0) / std::pow(s2, r / 2.0);
  return make_value("lyapunov", "lyap", n, prefactor, s, {{"r", r}});
}

ConditionValue orey_ratio(const ArrayModel& model, long n, const EvalOptions& opts) {
  const double s2 = checked_sigma2(model, n);
  auto s = sum_over_entries(
      model, n, [](const EntryLaw& law) { return law.variance(); },
      [](double x) { return x * x; }, opts);
  return make_value("orey", "cond+", n, 1.0 / s2, s, {});
}

ConditionValue rio_functional(const ArrayModel& model, long n, const EvalOptions& opts) {
  const double s2 = checked_sigma2(model, n);
  const double m = static_cast<double>(checked_dependence(model, n));
  const double c = m / std::sqrt(s2);
  auto s = sum_over_entries(
      model, n, [c](const EntryLaw& law) { return law.capped_cubic_moment(c); },
      [c](double x) { return x * x * std::min(c * std::abs(x), 1.0); }, opts);
  return make_value("rio", "rio", n, m / s2, s, {});
}

namespace {

std::pair<double, Method> sup_abs_moment(const ArrayModel& model, long n, double p) {
  double best = 0.0;
  Method method = Method::closed_form;
  for (const auto& block : model.entry_laws(n)) {
    best = std::max(best, block.law.abs_moment(p));
    if (block.law.is_discrete()) method = Method::enumeration;
  }
  return {best, method};
}

ConditionValue plain_value(std::string id, std::string eq, long n, double value, Method method,
                           std::map<std::string, double> params) {
  ConditionValue v;
  v.condition_id = std::move(id);
  v.paper_eq = std::move(eq);
  v.n = n;
  v.value = value;
  v.method = method;
  v.params = std::move(params);
  return v;
}

}  // namespace

std::vector<ConditionValue> berk_check(const ArrayModel& model, long n, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_parameter, "delta must be > 0");
  const double s2 = checked_sigma2(model, n);
  const double len = static_cast<double>(model.length(n));
  const double m = static_cast<double>(model.dependence(n));
  const auto [moment, method] = sup_abs_moment(model, n, 2.0 + delta);
  const std::map<std::string, double> params{{"delta", delta}};
  return {
      plain_value("berk-moment", "berki", n, moment, method, params),
      plain_value("berk-variance-rate", "berkiii", n, s2 / len, Method::closed_form, params),
      plain_value("berk-dependence-rate", "berkiv", n, std::pow(m, 2.0 + 2.0 / delta) / len,
                  Method::closed_form, params),
  };
}

namespace presets {

RateFn sup_moment(double delta) {
  return [delta](const ArrayModel& model, long n) {
    return sup_abs_moment(model, n, 2.0 + delta).first;
  };
}

RateFn variance_rate(double gamma) {
  return [gamma](const ArrayModel& model, long n) {
    const double m = static_cast<double>(std::max(model.dependence(n), 1L));
    return model.exact_sigma2(n) / (static_cast<double>(model.length(n)) * std::pow(m, gamma));
  };
}

RateFn per_entry_variance() {
  return [](const ArrayModel& model, long n) {
    return model.exact_sigma2(n) / static_cast<double>(model.length(n));
  };
}

}  // namespace presets

RomanoWolfInputs default_romano_wolf_inputs(double delta, double gamma) {
  return {delta, gamma, presets::sup_moment(delta), presets::variance_rate(gamma), "sup-moment",
          "variance-rate"};
}

std::vector<ConditionValue> romano_wolf_check(const ArrayModel& model, long n,
                                              const RomanoWolfInputs& in) {
  if (!(in.delta > 0.0)) throw Error(ErrorKind::invalid_parameter, "delta must be > 0");
  if (!(in.gamma >= -1.0 && in.gamma < 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "gamma must lie in [-1, 1)");
  }
  if (!in.moment_bound || !in.variance_floor) {
    throw Error(ErrorKind::invalid_parameter, "Romano-Wolf needs both Delta_n and L_n");
  }
  const double s2 = checked_sigma2(model, n);
  const long m_int = std::max(model.dependence(n), 1L);
  const double m = static_cast<double>(m_int);
  const double len = static_cast<double>(model.length(n));
  const double big_delta = in.moment_bound(model, n);
  const double floor_l = in.variance_floor(model, n);
  if (!(floor_l > 0.0)) throw Error(ErrorKind::invalid_parameter, "L_n must be positive");
  const auto [moment, method] = sup_abs_moment(model, n, 2.0 + in.delta);
  const std::map<std::string, double> params{
      {"delta", in.delta}, {"gamma", in.gamma}, {"Delta_n", big_delta}, {"L_n", floor_l}};
  const double block_var = model.max_window_variance(n, std::min<long>(m_int, model.length(n)));
  return {
      plain_value("romano-wolf-moment", "RW1", n, moment, method, params),
      plain_value("romano-wolf-variance", "RW3", n, s2 / (len * std::pow(m, in.gamma)),
                  Method::closed_form, params),
      plain_value("romano-wolf-ratio", "RW5", n, big_delta / std::pow(floor_l, (2.0 + in.delta) / 2.0),
                  Method::closed_form, params),
      plain_value("romano-wolf-dependence-rate", "RW6", n,
                  std::pow(m, 1.0 + (1.0 - in.gamma) * (1.0 + 2.0 / in.delta)) / len,
                  Method::closed_form, params),
      plain_value("romano-wolf-block-variance", "RW2,RW3,RW4", n,
                  block_var / (std::pow(m, 1.0 + in.gamma) * floor_l), Method::closed_form, params),
  };
}

}  // namespace mdclt::conditions
