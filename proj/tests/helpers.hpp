#ifndef MDCLT_TESTS_HELPERS_HPP_
#define MDCLT_TESTS_HELPERS_HPP_

#include <doctest.h>

#include <vector>

#include "mdclt/array_model.hpp"
#include "mdclt/error.hpp"

namespace th {

using mdclt::models::ArrayModel;
using mdclt::models::DependenceSchedule;
using mdclt::models::Family;
using mdclt::models::Innovation;
using mdclt::models::ModelSpec;

inline ArrayModel iid(Innovation v = Innovation::rademacher) {
  ModelSpec s;
  s.family = Family::iid_baseline;
  s.innovation = v;
  return ArrayModel::build(s);
}

inline ArrayModel two_scale(double alpha) {
  ModelSpec s;
  s.family = Family::two_scale;
  s.alpha = alpha;
  return ArrayModel::build(s);
}

inline ArrayModel block_repeat(DependenceSchedule m, Innovation v = Innovation::rademacher,
                               double lead_share = 0.0) {
  ModelSpec s;
  s.family = Family::block_repeat;
  s.m_schedule = m;
  s.innovation = v;
  s.lead_share = lead_share;
  return ArrayModel::build(s);
}

inline ArrayModel tail_coupled(DependenceSchedule m) {
  ModelSpec s;
  s.family = Family::tail_coupled;
  s.m_schedule = m;
  return ArrayModel::build(s);
}

inline ArrayModel moving_average(std::vector<double> theta, Innovation v = Innovation::rademacher) {
  ModelSpec s;
  s.family = Family::moving_average;
  s.ma_coefficients = std::move(theta);
  s.innovation = v;
  return ArrayModel::build(s);
}

// Every catalogued family with a few parameter choices.
inline std::vector<ArrayModel> catalogue() {
  return {iid(),
          iid(Innovation::normal),
          two_scale(0.25),
          two_scale(0.4),
          block_repeat(DependenceSchedule::constant(2)),
          block_repeat(DependenceSchedule::floor_power(0.25), Innovation::normal),
          block_repeat(DependenceSchedule::floor_log(), Innovation::rademacher, 0.5),
          tail_coupled(DependenceSchedule::floor_power(0.25)),
          tail_coupled(DependenceSchedule::constant(3)),
          moving_average({1.0, 0.5}),
          moving_average({1.0, -0.3, 0.2}, Innovation::normal)};
}

template <typename F>
mdclt::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const mdclt::Error& e) {
    return e.kind();
  }
  FAIL("expected an mdclt::Error");
  return mdclt::ErrorKind::config;
}

}  // namespace th

#endif
