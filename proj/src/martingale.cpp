#include "mdclt/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"
#include "mdclt/truncation.hpp"

namespace mdclt::oracle {

namespace {

// Walks outcomes in table order while tracking the cell index at every level.
class CellCursor {
 public:
  explicit CellCursor(const MartingaleTrace& trace)
      : trace_(trace), cells_(static_cast<std::size_t>(trace.length() + 1), 0) {}

  void advance_to(std::size_t outcome) {
    for (long k = 0; k <= trace_.length(); ++k) {
      const auto& start = trace_.level(k).start;
      auto& c = cells_[static_cast<std::size_t>(k)];
      while (outcome >= start[c + 1]) ++c;
    }
  }
  std::size_t operator[](long k) const { return cells_[static_cast<std::size_t>(k)]; }

 private:
  const MartingaleTrace& trace_;
  std::vector<std::size_t> cells_;
};

struct Tracker {
  CheckResult result;

  Tracker(std::string name, std::string eq, double tol) {
    result.name = std::move(name);
    result.paper_eq = std::move(eq);
    result.tolerance = tol;
  }
  void observe(double err, long k, long i, std::size_t o) {
    if (err > result.max_error || std::isnan(err)) result.max_error = err;
    if ((err > result.tolerance || std::isnan(err)) && !result.first_violation) {
      result.passed = false;
      result.first_violation = Violation{k, i, o};
    }
  }
};

}  // namespace

MartingaleTrace build_trace(const models::ArrayModel& model, long n) {
  MartingaleTrace t;
  t.table_ = model.enumerate_outcomes(n).canonical();
  t.n_ = n;
  t.length_ = t.table_.length;
  t.m_ = model.dependence(n);
  t.sigma2_ = model.exact_sigma2(n);
  const long len = t.length_;
  const std::size_t outcomes = t.table_.size();
  const auto ulen = static_cast<std::size_t>(len);

  // Position of the first coordinate where outcome o differs from o-1.
  std::vector<long> first_diff(outcomes, 0);
  for (std::size_t o = 1; o < outcomes; ++o) {
    const auto a = t.table_.row(o - 1);
    const auto b = t.table_.row(o);
    long d = 0;
    while (d < len && a[d] == b[d]) ++d;
    first_diff[o] = d;
  }

  t.levels_.resize(ulen + 1);
  for (long k = 0; k <= len; ++k) {
    auto& lv = t.levels_[static_cast<std::size_t>(k)];
    lv.start.push_back(0);
    for (std::size_t o = 1; o < outcomes; ++o) {
      if (first_diff[o] < k) lv.start.push_back(o);
    }
    lv.start.push_back(outcomes);
    const auto cells = static_cast<std::int64_t>(lv.cells());
    lv.w.assign(static_cast<std::size_t>(cells) * ulen, 0.0);
    lv.m.assign(static_cast<std::size_t>(cells), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t c = 0; c < cells; ++c) {
      const std::size_t lo = lv.start[static_cast<std::size_t>(c)];
      const std::size_t hi = lv.start[static_cast<std::size_t>(c) + 1];
      CompensatedSum mass;
      for (std::size_t o = lo; o < hi; ++o) mass.add(t.table_.probs[o]);
      CompensatedSum total;
      for (long i = 1; i <= len; ++i) {
        CompensatedSum acc;
        for (std::size_t o = lo; o < hi; ++o) acc.add(t.table_.probs[o] * t.table_.row(o)[i - 1]);
        const double wi = acc.value() / mass.value();
        lv.w[static_cast<std::size_t>(c) * ulen + static_cast<std::size_t>(i - 1)] = wi;
        total.add(wi);
      }
      lv.m[static_cast<std::size_t>(c)] = total.value();
    }
  }

  t.dm_.assign(outcomes * ulen, 0.0);
  t.qv_.assign(outcomes, 0.0);
  CellCursor cursor(t);
  for (std::size_t o = 0; o < outcomes; ++o) {
    cursor.advance_to(o);
    CompensatedSum qv;
    for (long k = 1; k <= len; ++k) {
      const double d = t.levels_[static_cast<std::size_t>(k)].m[cursor[k]] -
                       t.levels_[static_cast<std::size_t>(k - 1)].m[cursor[k - 1]];
      t.dm_[o * ulen + static_cast<std::size_t>(k - 1)] = d;
      qv.add(d * d);
    }
    t.qv_[o] = qv.value();
  }
  t.q_.assign(ulen, 0.0);
  for (long k = 1; k <= len; ++k) {
    CompensatedSum acc;
    for (std::size_t o = 0; o < outcomes; ++o) {
      const double d = t.dm(o, k);
      acc.add(t.table_.probs[o] * d * d);
    }
    t.q_[static_cast<std::size_t>(k - 1)] = acc.value();
  }
  return t;
}

std::size_t MartingaleTrace::cell_of(long k, std::size_t outcome) const {
  const auto& start = level(k).start;
  return static_cast<std::size_t>(std::upper_bound(start.begin(), start.end(), outcome) -
                                  start.begin()) -
         1;
}

double MartingaleTrace::sum_q() const { return compensated_sum(q_); }

double MartingaleTrace::mean_quadratic_variation() const {
  CompensatedSum acc;
  for (std::size_t o = 0; o < qv_.size(); ++o) acc.add(table_.probs[o] * qv_[o]);
  return acc.value();
}

double MartingaleTrace::variance_quadratic_variation() const {
  const double mu = mean_quadratic_variation();
  CompensatedSum acc;
  for (std::size_t o = 0; o < qv_.size(); ++o) {
    acc.add(table_.probs[o] * (qv_[o] - mu) * (qv_[o] - mu));
  }
  return acc.value();
}

double MartingaleTrace::max_abs_dm() const {
  double best = 0.0;
  for (double d : dm_) best = std::max(best, std::abs(d));
  return best;
}

std::optional<std::size_t> MartingaleTrace::find_outcome(std::span<const double> row) const {
  std::size_t lo = 0, hi = table_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto r = table_.row(mid);
    if (std::lexicographical_compare(r.begin(), r.end(), row.begin(), row.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < table_.size() && std::equal(row.begin(), row.end(), table_.row(lo).begin(), table_.row(lo).end())) {
    return lo;
  }
  return std::nullopt;
}

void MartingaleTrace::perturb_conditional_mean(long k, std::size_t cell, long i, double delta) {
  if (k < 0 || k > length_ || i < 1 || i > length_ || cell >= level(k).cells()) {
    throw Error(ErrorKind::index_out_of_range, "perturbation target outside the trace");
  }
  levels_[static_cast<std::size_t>(k)].w[cell * static_cast<std::size_t>(length_) +
                                         static_cast<std::size_t>(i - 1)] += delta;
}

std::vector<CheckResult> check_structure(const MartingaleTrace& trace) {
  const long len = trace.length();
  const long m = trace.dependence();
  const auto& table = trace.table();
  constexpr double tol = kIdentityTolerance;

  Tracker past("conditional-mean-of-past", "WX", tol);
  Tracker future("conditional-mean-of-far-future", "kab", tol);
  Tracker window("increment-window", "az1", tol);
  Tracker partial("partial-sum-form", "axel", tol);
  Tracker ends("martingale-endpoints", "tm6", tol);
  Tracker telescope("telescoping", "tm7", tol);
  Tracker fair("conditional-mean-zero-increments", "tm7", tol);
  Tracker energy("quadratic-variation-identity", "per", tol);

  CellCursor cursor(trace);
  for (std::size_t o = 0; o < table.size(); ++o) {
    cursor.advance_to(o);
    const auto row = table.row(o);
    CompensatedSum prefix;
    CompensatedSum dm_total;
    ends.observe(std::abs(trace.level(0).m[cursor[0]]), 0, 0, o);
    for (long k = 0; k <= len; ++k) {
      const std::size_t c = cursor[k];
      if (k > 0) prefix.add(row[k - 1]);
      for (long i = 1; i <= len; ++i) {
        const double wik = trace.w(k, c, i);
        if (i <= k) past.observe(std::abs(wik - row[i - 1]), k, i, o);
        if (i > k + m) future.observe(std::abs(wik), k, i, o);
      }
      CompensatedSum ahead;
      for (long i = k + 1; i <= std::min(k + m, len); ++i) ahead.add(trace.w(k, c, i));
      partial.observe(std::abs(trace.level(k).m[c] - (prefix.value() + ahead.value())), k, 0, o);
      if (k == 0) continue;
      CompensatedSum win;
      for (long i = k; i <= std::min(k + m, len); ++i) {
        win.add(trace.w(k, c, i) - trace.w(k - 1, cursor[k - 1], i));
      }
      window.observe(std::abs(trace.dm(o, k) - win.value()), k, 0, o);
      dm_total.add(trace.dm(o, k));
    }
    const double s = compensated_sum(row);
    ends.observe(std::abs(trace.level(len).m[cursor[len]] - s), len, 0, o);
    telescope.observe(std::abs(dm_total.value() - s), len, 0, o);
  }

  // E[ΔM_nk | F_{n,k-1}] = 0 cell by cell.
  for (long k = 1; k <= len; ++k) {
    const auto& parent = trace.level(k - 1);
    for (std::size_t c = 0; c < parent.cells(); ++c) {
      CompensatedSum mass, acc;
      for (std::size_t o = parent.start[c]; o < parent.start[c + 1]; ++o) {
        mass.add(table.probs[o]);
        acc.add(table.probs[o] * trace.dm(o, k));
      }
      fair.observe(std::abs(acc.value() / mass.value()), k, 0, parent.start[c]);
    }
  }
  energy.observe(std::abs(trace.sum_q() - trace.sigma2()), len, 0, 0);

  return {past.result,      future.result, window.result, partial.result,
          ends.result,      telescope.result, fair.result, energy.result};
}

void require_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (r.passed) continue;
    std::string msg = r.name + " (" + r.paper_eq + ") failed: error " + std::to_string(r.max_error);
    if (r.first_violation) {
      msg += " at k=" + std::to_string(r.first_violation->k) + ", i=" +
             std::to_string(r.first_violation->i) + ", outcome " +
             std::to_string(r.first_violation->outcome);
    }
    throw Error(ErrorKind::structural_violation, msg);
  }
}

bool BoundsReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

BoundsReport check_bounds(const MartingaleTrace& trace, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_parameter, "epsilon must be > 0");
  const long len = trace.length();
  const long m = std::max(trace.dependence(), 1L);
  const double per_entry = epsilon / static_cast<double>(m);
  const auto& table = trace.table();
  constexpr double rel = 1e-12;
  if (table.max_abs() > per_entry * (1.0 + rel)) {
    throw Error(ErrorKind::hypothesis_violation,
                "max |X_ni| = " + std::to_string(table.max_abs()) + " exceeds eps/m_n = " +
                    std::to_string(per_entry));
  }

  BoundsReport rep;
  rep.epsilon = epsilon;
  Tracker cond("conditional-mean-bound", "az0", per_entry * (1.0 + rel));
  Tracker incr("increment-bound", "paj2", 4.0 * epsilon * (1.0 + rel));
  Tracker gap("prefix-gap-bound", "paj12", 2.0 * epsilon * (1.0 + rel));
  Tracker gap2("extended-prefix-gap-bound", "paj12+", 4.0 * epsilon * (1.0 + rel));

  for (long k = 0; k <= len; ++k) {
    const auto& lv = trace.level(k);
    for (std::size_t c = 0; c < lv.cells(); ++c) {
      for (long i = 1; i <= len; ++i) cond.observe(std::abs(trace.w(k, c, i)), k, i, lv.start[c]);
    }
  }
  CellCursor cursor(trace);
  std::vector<double> prefix(static_cast<std::size_t>(len) + 1);
  for (std::size_t o = 0; o < table.size(); ++o) {
    cursor.advance_to(o);
    const auto row = table.row(o);
    CompensatedSum acc;
    prefix[0] = 0.0;
    for (long k = 1; k <= len; ++k) {
      acc.add(row[k - 1]);
      prefix[static_cast<std::size_t>(k)] = acc.value();
      incr.observe(std::abs(trace.dm(o, k)), k, 0, o);
    }
    auto tsum = [&](long j) { return prefix[static_cast<std::size_t>(std::min(j, len))]; };
    for (long k = 0; k <= len; ++k) {
      const double mk = trace.level(k).m[cursor[k]];
      gap.observe(std::abs(tsum(k + m) - mk), k, 0, o);
      gap2.observe(std::abs(2.0 * tsum(k + 2 * m) - tsum(k + m) - mk), k, 0, o);
    }
  }
  const double s2 = trace.sigma2();
  Tracker mean_q("quadratic-variation-mean", "per", kIdentityTolerance);
  mean_q.observe(std::abs(trace.mean_quadratic_variation() - s2), len, 0, 0);
  const double var_q = trace.variance_quadratic_variation();
  Tracker var_bound("quadratic-variation-variance-bound", "paj",
                    48.0 * epsilon * epsilon * s2 * (1.0 + rel));
  var_bound.observe(var_q, len, 0, 0);

  rep.var_q_ratio = var_q / (epsilon * epsilon * s2);
  rep.max_dm_ratio = trace.max_abs_dm() / epsilon;
  rep.results = {cond.result, incr.result, gap.result, gap2.result, mean_q.result, var_bound.result};
  return rep;
}

bool TruncationReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

TruncationReport check_truncation(const models::ArrayModel& model, long n, double epsilon) {
  const auto table = model.enumerate_outcomes(n);
  const auto split = models::truncated_model(model, n, epsilon);
  const auto [inner, outer] = split.split(table);
  const long len = table.length;
  const long raw_m = model.dependence(n);
  const long m = std::max(raw_m, 1L);

  TruncationReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.threshold = split.threshold;
  for (double mu : split.centering) rep.max_centering = std::max(rep.max_centering, std::abs(mu));

  Tracker pointwise("split-sums-to-row", "sw1", 1e-12);
  Tracker centred("split-means-vanish", "sw2", 1e-12);
  Tracker inner_bound("inner-part-bound", "sw1", 2.0 * split.threshold * (1.0 + 1e-12));
  Tracker dependence("split-arrays-m-dependent", "sw1", 1e-12);

  for (std::size_t o = 0; o < table.size(); ++o) {
    for (long i = 1; i <= len; ++i) {
      const double x = table.row(o)[i - 1];
      const double a = inner.row(o)[i - 1];
      const double b = outer.row(o)[i - 1];
      pointwise.observe(std::abs(a + b - x), 0, i, o);
      inner_bound.observe(std::abs(a), 0, i, o);
      rep.max_abs_inner = std::max(rep.max_abs_inner, std::abs(a));
    }
  }
  for (long i = 1; i <= len; ++i) {
    centred.observe(std::abs(inner.mean(i)), 0, i, 0);
    centred.observe(std::abs(outer.mean(i)), 0, i, 0);
    for (long j = i + raw_m + 1; j <= len; ++j) {
      dependence.observe(std::abs(inner.covariance(i, j)), j, i, 0);
      dependence.observe(std::abs(outer.covariance(i, j)), j, i, 0);
    }
  }

  rep.tail_second_moment = outer.row_sum_variance() + std::pow(outer.row_sum_mean(), 2);
  CompensatedSum tail;
  for (std::size_t o = 0; o < table.size(); ++o) {
    for (double x : table.row(o)) {
      if (std::abs(x) > split.threshold) tail.add(table.probs[o] * x * x);
    }
  }
  rep.tail_bound = static_cast<double>(2 * m + 1) * tail.value();
  Tracker ma4("tail-sum-second-moment-bound", "ma4", rep.tail_bound + 1e-12);
  ma4.observe(rep.tail_second_moment, 0, 0, 0);

  rep.results = {pointwise.result, centred.result, inner_bound.result, dependence.result, ma4.result};
  return rep;
}

TraceSummary summarize(const MartingaleTrace& trace, const std::vector<CheckResult>& structure,
                       const BoundsReport* bounds, const TruncationReport* truncation) {
  TraceSummary s;
  s.n = trace.n();
  s.sigma2 = trace.sigma2();
  s.sum_q = trace.sum_q();
  s.var_q = trace.variance_quadratic_variation();
  s.max_abs_dm = trace.max_abs_dm();
  for (const auto& r : structure) s.pass_flags.emplace_back(r.name, r.passed);
  if (bounds) {
    for (const auto& r : bounds->results) s.pass_flags.emplace_back(r.name, r.passed);
  }
  if (truncation) {
    for (const auto& r : truncation->results) s.pass_flags.emplace_back(r.name, r.passed);
  }
  return s;
}

void write_trace_csv(const MartingaleTrace& trace, std::ostream& os) {
  const long len = trace.length();
  if (len > 8) throw Error(ErrorKind::invalid_parameter, "full trace dumps are limited to N_n <= 8");
  os << "k,cell,prob,M";
  for (long i = 1; i <= len; ++i) os << ",W_" << i;
  os << '\n' << std::setprecision(17);
  for (long k = 0; k <= len; ++k) {
    const auto& lv = trace.level(k);
    for (std::size_t c = 0; c < lv.cells(); ++c) {
      CompensatedSum mass;
      for (std::size_t o = lv.start[c]; o < lv.start[c + 1]; ++o) mass.add(trace.table().probs[o]);
      os << k << ',' << c << ',' << mass.value() << ',' << lv.m[c];
      for (long i = 1; i <= len; ++i) os << ',' << trace.w(k, c, i);
      os << '\n';
    }
  }
}

}  // namespace mdclt::oracle
