#ifndef MDCLT_REPORT_IO_HPP_
#define MDCLT_REPORT_IO_HPP_

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "mdclt/conditions.hpp"
#include "mdclt/hall_heyde.hpp"
#include "mdclt/martingale.hpp"
#include "mdclt/monte_carlo.hpp"
#include "mdclt/verdict.hpp"

namespace mdclt::report {

using nlohmann::json;

/// Non-finite reals (slope -inf for identically vanishing series, NaN for
/// unfittable ones) serialize as null.
json number(double x);

json to_json(const conditions::ConditionValue& v);
json to_json(const conditions::ConditionReport& r);
json to_json(const conditions::BerkAssessment& a);
json to_json(const conditions::RomanoWolfAssessment& a);
json to_json(const montecarlo::ConvergenceReport& r);
json to_json(const oracle::CheckResult& c);
json to_json(const oracle::TraceSummary& s);
json to_json(const oracle::BoundsReport& b);
json to_json(const oracle::TruncationReport& t);
json to_json(const oracle::HallHeydeReport& h);

/// Header: condition_id,paper_eq,params,n,value,method,mc_std_err,loglog_slope,slope_std_err,verdict
void write_csv(std::span<const conditions::ConditionReport> reports, std::ostream& os);
/// Header: n,ks,reps,seed,mean,variance,moments_ok
void write_csv(const montecarlo::ConvergenceReport& r, std::ostream& os);

/// Shortest round-trip text for a double; "nan"/"inf" spelled out.
std::string format_number(double x);

}  // namespace mdclt::report

#endif  // MDCLT_REPORT_IO_HPP_
