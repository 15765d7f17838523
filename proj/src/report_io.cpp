#include "mdclt/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace mdclt::report {

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

json params_json(const std::map<std::string, double>& params) {
  json p = json::object();
  for (const auto& [k, v] : params) p[k] = number(v);
  return p;
}

std::string params_text(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_number(v);
  }
  return out;
}

json results_json(const std::vector<oracle::CheckResult>& results) {
  json a = json::array();
  for (const auto& r : results) a.push_back(to_json(r));
  return a;
}

}  // namespace

json to_json(const conditions::ConditionValue& v) {
  return {{"condition_id", v.condition_id},
          {"paper_eq", v.paper_eq},
          {"n", v.n},
          {"value", number(v.value)},
          {"method", std::string(conditions::to_string(v.method))},
          {"mc_std_err", number(v.mc_std_err)},
          {"params", params_json(v.params)}};
}

json to_json(const conditions::ConditionReport& r) {
  json grid = json::array();
  for (const auto& v : r.grid) {
    grid.push_back({{"n", v.n},
                    {"value", number(v.value)},
                    {"method", std::string(conditions::to_string(v.method))},
                    {"mc_std_err", number(v.mc_std_err)}});
  }
  return {{"condition_id", r.condition_id},
          {"paper_eq", r.paper_eq},
          {"params", params_json(r.params)},
          {"grid", grid},
          {"loglog_slope", number(r.loglog_slope)},
          {"slope_std_err", number(r.slope_std_err)},
          {"verdict", std::string(conditions::to_string(r.verdict))}};
}

json to_json(const conditions::BerkAssessment& a) {
  json reports = json::array();
  for (const auto& r : a.reports) reports.push_back(to_json(r));
  return {{"reports", reports},
          {"moment_bounded", a.moment_bounded},
          {"variance_rate_positive_limit", a.variance_rate_positive_limit},
          {"dependence_rate_vanishes", a.dependence_rate_vanishes},
          {"satisfied", a.satisfied()}};
}

json to_json(const conditions::RomanoWolfAssessment& a) {
  json reports = json::array();
  for (const auto& r : a.reports) reports.push_back(to_json(r));
  return {{"reports", reports},
          {"moment_bound_holds", a.moment_bound_holds},
          {"variance_floor_holds", a.variance_floor_holds},
          {"ratio_bounded", a.ratio_bounded},
          {"dependence_rate_vanishes", a.dependence_rate_vanishes},
          {"block_variance_bounded", a.block_variance_bounded},
          {"satisfied", a.satisfied()}};
}

json to_json(const montecarlo::ConvergenceReport& r) {
  json grid = json::array();
  for (const auto& p : r.grid) {
    grid.push_back({{"n", p.n},
                    {"ks", number(p.ks)},
                    {"reps", p.reps},
                    {"seed", p.seed},
                    {"mean", number(p.mean)},
                    {"variance", number(p.variance)},
                    {"moments_ok", p.moments_ok}});
  }
  return {{"grid", grid}, {"monotone_trend", r.monotone_trend}, {"final_ks", number(r.final_ks)}};
}

json to_json(const oracle::CheckResult& c) {
  json j = {{"name", c.name},
            {"paper_eq", c.paper_eq},
            {"passed", c.passed},
            {"max_error", number(c.max_error)},
            {"tolerance", number(c.tolerance)}};
  if (c.first_violation) {
    j["first_violation"] = {{"k", c.first_violation->k},
                            {"i", c.first_violation->i},
                            {"outcome", c.first_violation->outcome}};
  }
  return j;
}

json to_json(const oracle::TraceSummary& s) {
  json flags = json::object();
  for (const auto& [name, ok] : s.pass_flags) flags[name] = ok;
  return {{"n", s.n},
          {"sigma2", number(s.sigma2)},
          {"sum_q", number(s.sum_q)},
          {"varQ", number(s.var_q)},
          {"maxAbsDM", number(s.max_abs_dm)},
          {"pass_flags", flags}};
}

json to_json(const oracle::BoundsReport& b) {
  return {{"epsilon", number(b.epsilon)},
          {"var_q_ratio", number(b.var_q_ratio)},
          {"max_dm_ratio", number(b.max_dm_ratio)},
          {"passed", b.passed()},
          {"results", results_json(b.results)}};
}

json to_json(const oracle::TruncationReport& t) {
  return {{"n", t.n},
          {"epsilon", number(t.epsilon)},
          {"threshold", number(t.threshold)},
          {"tail_second_moment", number(t.tail_second_moment)},
          {"tail_bound", number(t.tail_bound)},
          {"max_abs_inner", number(t.max_abs_inner)},
          {"max_centering", number(t.max_centering)},
          {"passed", t.passed()},
          {"results", results_json(t.results)}};
}

json to_json(const oracle::HallHeydeReport& h) {
  json grid = json::array();
  for (const auto& p : h.grid) {
    grid.push_back({{"n", p.n},
                    {"reps", p.reps},
                    {"max_dm_median", number(p.max_dm_median)},
                    {"max_dm_q90", number(p.max_dm_q90)},
                    {"q_mean", number(p.q_mean)},
                    {"q_sd", number(p.q_sd)},
                    {"q_within_005", number(p.q_within_005)},
                    {"max_dm2_mean", number(p.max_dm2_mean)},
                    {"max_dm2_std_err", number(p.max_dm2_std_err)}});
  }
  return {{"grid", grid},
          {"max_increment", to_json(h.max_increment)},
          {"qv_spread", to_json(h.qv_spread)},
          {"max_square", to_json(h.max_square)},
          {"HH1", h.hh1},
          {"HH2", h.hh2},
          {"HH3", h.hh3}};
}

void write_csv(std::span<const conditions::ConditionReport> reports, std::ostream& os) {
  os << "condition_id,paper_eq,params,n,value,method,mc_std_err,loglog_slope,slope_std_err,verdict\n";
  for (const auto& r : reports) {
    for (const auto& v : r.grid) {
      os << r.condition_id << ",\"" << r.paper_eq << "\"," << params_text(r.params) << ',' << v.n
         << ',' << format_number(v.value) << ',' << conditions::to_string(v.method) << ','
         << format_number(v.mc_std_err) << ',' << format_number(r.loglog_slope) << ','
         << format_number(r.slope_std_err) << ',' << conditions::to_string(r.verdict) << '\n';
    }
  }
}

void write_csv(const montecarlo::ConvergenceReport& r, std::ostream& os) {
  os << "n,ks,reps,seed,mean,variance,moments_ok\n";
  for (const auto& p : r.grid) {
    os << p.n << ',' << format_number(p.ks) << ',' << p.reps << ',' << p.seed << ','
       << format_number(p.mean) << ',' << format_number(p.variance) << ','
       << (p.moments_ok ? "true" : "false") << '\n';
  }
}

}  // namespace mdclt::report
