#ifndef MDCLT_SCHEDULE_HPP_
#define MDCLT_SCHEDULE_HPP_

#include <string>

namespace mdclt::models {

/// Dependence range n -> m_n.
class DependenceSchedule {
 public:
  enum class Kind { constant, floor_power, floor_log };

  static DependenceSchedule constant(long m);
  /// max(1, floor(n^beta)), beta in (0, 1).
  static DependenceSchedule floor_power(double beta);
  /// max(1, floor(ln n)).
  static DependenceSchedule floor_log();

  long at(long n) const;
  /// True when m_n grows without bound.
  bool grows() const { return kind_ != Kind::constant; }

  Kind kind() const { return kind_; }
  long constant_value() const { return m_; }
  double beta() const { return beta_; }

  std::string describe() const;

  friend bool operator==(const DependenceSchedule&, const DependenceSchedule&) = default;

 private:
  DependenceSchedule(Kind kind, long m, double beta) : kind_(kind), m_(m), beta_(beta) {}
  Kind kind_;
  long m_;
  double beta_;
};

}  // namespace mdclt::models

#endif  // MDCLT_SCHEDULE_HPP_
