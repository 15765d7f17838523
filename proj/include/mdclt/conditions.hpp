#ifndef MDCLT_CONDITIONS_HPP_
#define MDCLT_CONDITIONS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mdclt/array_model.hpp"

namespace mdclt::conditions {

enum class Method { closed_form, enumeration, monte_carlo };
std::string_view to_string(Method m);

/// One evaluation of a condition functional at one row index n.
struct ConditionValue {
  std::string condition_id;
  std::string paper_eq;
  long n = 0;
  double value = 0.0;
  Method method = Method::closed_form;
  double mc_std_err = 0.0;
  std::map<std::string, double> params;
};

struct MomentEstimate {
  double value = 0.0;
  Method method = Method::closed_form;
  double std_err = 0.0;
};

/// Exact evaluation by default. With monte_carlo set, Σ_i E[h(X_ni)] is
/// estimated from `reps` sampled rows (σ_n stays exact).
struct EvalOptions {
  bool monte_carlo = false;
  long reps = 4000;
  std::uint64_t seed = 20240601;
};

/// E[X_ni^2 1{|X_ni| > t}].
MomentEstimate tail_second_moment(const models::ArrayModel& model, long n, long i, double t,
                                  const EvalOptions& opts = {});

/// (1/σ_n²) Σ_i E[X_ni² 1{|X_ni| > ε σ_n}].
ConditionValue lindeberg_classic(const models::ArrayModel& model, long n, double eps,
                                 const EvalOptions& opts = {});

/// (m_n/σ_n²) Σ_i E[X_ni² 1{|X_ni| > ε σ_n / m_n}]. Rejects m_n = 0 with
/// zero_dependence; use ArrayModel::with_unit_dependence_floor().
ConditionValue lindeberg_mdep(const models::ArrayModel& model, long n, double eps,
                              const EvalOptions& opts = {});

/// (m_n^{r-1}/σ_n^r) Σ_i E|X_ni|^r with m_n replaced by max(m_n, 1).
ConditionValue lyapunov_ratio(const models::ArrayModel& model, long n, double r,
                              const EvalOptions& opts = {});

/// Σ_i Var X_ni / σ_n².
ConditionValue orey_ratio(const models::ArrayModel& model, long n, const EvalOptions& opts = {});

/// (m_n/σ_n²) Σ_i E[X_ni² min(m_n |X_ni| / σ_n, 1)]. Rejects m_n = 0.
ConditionValue rio_functional(const models::ArrayModel& model, long n,
                              const EvalOptions& opts = {});

/// (max_i E|X_ni|^{2+δ}, σ_n²/N_n, m_n^{2+2/δ}/N_n).
std::vector<ConditionValue> berk_check(const models::ArrayModel& model, long n, double delta);

using RateFn = std::function<double(const models::ArrayModel&, long)>;

/// Caller-supplied sequences Δ_n (moment bound) and L_n (variance floor).
struct RomanoWolfInputs {
  double delta = 1.0;
  double gamma = 0.0;
  RateFn moment_bound;
  RateFn variance_floor;
  std::string moment_bound_name = "custom";
  std::string variance_floor_name = "custom";
};

namespace presets {
/// Δ_n = max_i E|X_ni|^{2+δ}.
RateFn sup_moment(double delta);
/// L_n = σ_n² / (N_n m_n^γ), the largest floor RW3 admits.
RateFn variance_rate(double gamma);
/// L_n = σ_n² / N_n.
RateFn per_entry_variance();
}  // namespace presets

RomanoWolfInputs default_romano_wolf_inputs(double delta, double gamma);

/// Left-hand sides at n, in order:
///   rw1  max_i E|X_ni|^{2+δ}                (must be <= Δ_n)
///   rw3  σ_n² / (N_n m_n^γ)                  (must be >= L_n)
///   rw5  Δ_n / L_n^{(2+δ)/2}                (must stay bounded)
///   rw6  m_n^{1+(1−γ)(1+2/δ)} / N_n          (must tend to zero)
///   rw-block  max window variance over windows of length m_n,
///             divided by m_n^{1+γ} L_n        (must stay bounded)
/// The last entry is what the block-variance and moment-rate conditions
/// jointly force; with it the tail-coupled family fails whenever m_n → ∞.
/// m_n is replaced by max(m_n, 1).
std::vector<ConditionValue> romano_wolf_check(const models::ArrayModel& model, long n,
                                              const RomanoWolfInputs& inputs);

}  // namespace mdclt::conditions

#endif  // MDCLT_CONDITIONS_HPP_
