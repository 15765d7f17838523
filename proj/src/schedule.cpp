#include "mdclt/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdclt/error.hpp"

namespace mdclt::models {

DependenceSchedule DependenceSchedule::constant(long m) {
  if (m < 0) throw Error(ErrorKind::invalid_parameter, "m_schedule returned negative m");
  return {Kind::constant, m, 0.0};
}

DependenceSchedule DependenceSchedule::floor_power(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "floor-power exponent beta must lie in (0, 1)");
  }
  return {Kind::floor_power, 0, beta};
}

DependenceSchedule DependenceSchedule::floor_log() { return {Kind::floor_log, 0, 0.0}; }

long DependenceSchedule::at(long n) const {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "row index n must be >= 1");
  switch (kind_) {
    case Kind::constant:
      return m_;
    case Kind::floor_power: {
      // Nudge up so exact powers (e.g. 16^0.25) are not lost to rounding.
      const double v = std::pow(static_cast<double>(n), beta_);
      return std::max(1L, static_cast<long>(std::floor(v * (1.0 + 1e-12))));
    }
    case Kind::floor_log:
      return std::max(1L, static_cast<long>(std::floor(std::log(static_cast<double>(n)))));
  }
  return m_;
}

std::string DependenceSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "constant(" << m_ << ")"; break;
    case Kind::floor_power: os << "floor-power(" << beta_ << ")"; break;
    case Kind::floor_log: os << "floor-log"; break;
  }
  return os.str();
}

}  // namespace mdclt::models
