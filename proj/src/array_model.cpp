#include "mdclt/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdclt/error.hpp"
#include "mdclt/numeric.hpp"

namespace mdclt::models {

namespace {

constexpr long kMaxRademacherMaOrder = 20;

double inv_sqrt(long n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::iid_baseline: return "iid-baseline";
    case Family::two_scale: return "two-scale";
    case Family::block_repeat: return "block-repeat";
    case Family::tail_coupled: return "tail-coupled";
    case Family::moving_average: return "moving-average";
  }
  return "unknown";
}

std::string_view to_string(Innovation v) {
  return v == Innovation::rademacher ? "rademacher" : "normal";
}

Family parse_family(std::string_view s) {
  for (auto f : {Family::iid_baseline, Family::two_scale, Family::block_repeat,
                 Family::tail_coupled, Family::moving_average}) {
    if (s == to_string(f)) return f;
  }
  if (s == "iid") return Family::iid_baseline;
  if (s == "ma") return Family::moving_average;
  throw Error(ErrorKind::invalid_parameter, "unknown family '" + std::string(s) + "'");
}

Innovation parse_innovation(std::string_view s) {
  if (s == "rademacher") return Innovation::rademacher;
  if (s == "normal" || s == "gaussian") return Innovation::normal;
  throw Error(ErrorKind::invalid_parameter, "unknown innovation '" + std::string(s) + "'");
}

ArrayModel ArrayModel::build(ModelSpec spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw Error(ErrorKind::invalid_parameter, "scale must be a positive finite number");
  }
  switch (spec.family) {
    case Family::iid_baseline:
      spec.m_schedule = DependenceSchedule::constant(0);
      break;
    case Family::two_scale:
      if (!(spec.alpha > 0.0 && spec.alpha < 0.5)) {
        throw Error(ErrorKind::invalid_parameter, "two-scale requires 0 < alpha < 1/2");
      }
      spec.m_schedule = DependenceSchedule::constant(1);
      break;
    case Family::block_repeat:
    case Family::tail_coupled:
      if (spec.m_schedule.kind() == DependenceSchedule::Kind::constant &&
          spec.m_schedule.constant_value() < 1) {
        throw Error(ErrorKind::invalid_parameter, std::string(to_string(spec.family)) +
                                                      " requires m_n >= 1");
      }
      if (spec.family == Family::block_repeat &&
          !(spec.lead_share >= 0.0 && spec.lead_share < 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "lead_share must lie in [0, 1)");
      }
      break;
    case Family::moving_average: {
      const auto& th = spec.ma_coefficients;
      if (th.empty() || std::none_of(th.begin(), th.end(), [](double t) { return t != 0.0; }) ||
          std::any_of(th.begin(), th.end(), [](double t) { return !std::isfinite(t); })) {
        throw Error(ErrorKind::invalid_parameter, "moving-average needs finite, not all zero coefficients");
      }
      const long q = static_cast<long>(th.size()) - 1;
      if (spec.innovation == Innovation::rademacher && q > kMaxRademacherMaOrder) {
        throw Error(ErrorKind::invalid_parameter, "Rademacher moving-average order above 20");
      }
      spec.m_schedule = DependenceSchedule::constant(q);
      break;
    }
  }
  if (spec.family != Family::block_repeat) {
    spec.lead_share = 0.0;
    spec.block_divisor.reset();
  }
  return ArrayModel(std::move(spec));
}

std::string ArrayModel::describe() const {
  std::ostringstream os;
  os << to_string(spec_.family) << '(';
  switch (spec_.family) {
    case Family::iid_baseline: os << "innovation=" << to_string(spec_.innovation); break;
    case Family::two_scale: os << "alpha=" << spec_.alpha; break;
    case Family::block_repeat:
      os << "innovation=" << to_string(spec_.innovation) << ", m=" << spec_.m_schedule.describe();
      if (spec_.lead_share > 0.0) os << ", lead_share=" << spec_.lead_share;
      break;
    case Family::tail_coupled: os << "m=" << spec_.m_schedule.describe(); break;
    case Family::moving_average:
      os << "innovation=" << to_string(spec_.innovation) << ", q=" << spec_.ma_coefficients.size() - 1;
      break;
  }
  if (spec_.scale != 1.0) os << ", scale=" << spec_.scale;
  os << ')';
  return os.str();
}

long ArrayModel::raw_dependence(long n) const { return spec_.m_schedule.at(n); }

long ArrayModel::dependence(long n) const {
  check_row(n);
  const long m = raw_dependence(n);
  return spec_.unit_dependence_floor ? std::max(m, 1L) : m;
}

long ArrayModel::block_count(long n) const {
  const long d = spec_.block_divisor ? spec_.block_divisor->at(n) : raw_dependence(n);
  return n / std::max(d, 1L);
}

void ArrayModel::check_row(long n) const {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "row index n must be >= 1");
  if (spec_.family == Family::block_repeat) {
    if (raw_dependence(n) < 1 || block_count(n) < 1) {
      throw Error(ErrorKind::invalid_parameter, "block-repeat needs 1 <= m_n <= n (at least one block)");
    }
  }
  if (spec_.family == Family::tail_coupled && raw_dependence(n) > n) {
    throw Error(ErrorKind::invalid_parameter, "tail-coupled needs m_n <= n");
  }
}

long ArrayModel::length(long n) const {
  check_row(n);
  switch (spec_.family) {
    case Family::block_repeat: return block_count(n) * raw_dependence(n);
    case Family::tail_coupled: return n + raw_dependence(n);
    default: return n;
  }
}

double ArrayModel::lead_variance(long n) const {
  const long blocks = block_count(n);
  if (spec_.lead_share <= 0.0 || blocks == 1) return 1.0;
  return spec_.lead_share * static_cast<double>(blocks - 1) / (1.0 - spec_.lead_share);
}

double ArrayModel::ma_autocov(long h) const {
  const auto& th = spec_.ma_coefficients;
  const long q = static_cast<long>(th.size()) - 1;
  if (h < 0) h = -h;
  if (h > q) return 0.0;
  CompensatedSum acc;
  for (long j = 0; j + h <= q; ++j) acc.add(th[j] * th[j + h]);
  return acc.value();
}

std::vector<LawBlock> ArrayModel::entry_laws(long n) const {
  const double c = spec_.scale;
  const long len = length(n);
  switch (spec_.family) {
    case Family::iid_baseline: {
      const double a = c * inv_sqrt(n);
      auto law = spec_.innovation == Innovation::rademacher ? EntryLaw::rademacher(a)
                                                            : EntryLaw::gaussian(a);
      return {{law, len}};
    }
    case Family::two_scale: {
      const double a = c * inv_sqrt(n);
      const double b = c * std::pow(static_cast<double>(n), -spec_.alpha);
      std::vector<double> pts;
      for (double xi : {-1.0, 1.0})
        for (double e1 : {-1.0, 1.0})
          for (double e0 : {-1.0, 1.0}) pts.push_back(a * xi + b * (e1 - e0));
      return {{EntryLaw::discrete(pts, std::vector<double>(8, 0.125)), len}};
    }
    case Family::block_repeat: {
      const long m = raw_dependence(n);
      const long blocks = block_count(n);
      const double a = c / static_cast<double>(m);
      auto base = spec_.innovation == Innovation::rademacher ? EntryLaw::rademacher(a)
                                                             : EntryLaw::gaussian(a);
      if (spec_.lead_share <= 0.0) return {{base, len}};
      std::vector<LawBlock> out{{EntryLaw::rademacher(a * std::sqrt(lead_variance(n))), m}};
      if (blocks > 1) out.push_back({base, (blocks - 1) * m});
      return out;
    }
    case Family::tail_coupled:
      return {{EntryLaw::gaussian(c), len}};
    case Family::moving_average: {
      const auto& th = spec_.ma_coefficients;
      const double a = c * inv_sqrt(n);
      if (spec_.innovation == Innovation::normal) {
        return {{EntryLaw::gaussian(a * std::sqrt(ma_autocov(0))), len}};
      }
      const std::size_t atoms = std::size_t{1} << th.size();
      std::vector<double> pts(atoms);
      for (std::size_t mask = 0; mask < atoms; ++mask) {
        CompensatedSum acc;
        for (std::size_t j = 0; j < th.size(); ++j) acc.add(((mask >> j) & 1u) ? th[j] : -th[j]);
        pts[mask] = a * acc.value();
      }
      return {{EntryLaw::discrete(pts, std::vector<double>(atoms, 1.0 / static_cast<double>(atoms))), len}};
    }
  }
  return {};
}

EntryLaw ArrayModel::entry_law(long n, long i) const {
  const long len = length(n);
  if (i < 1 || i > len) throw Error(ErrorKind::index_out_of_range, "entry index outside 1..N_n");
  auto blocks = entry_laws(n);
  long seen = 0;
  for (auto& b : blocks) {
    seen += b.count;
    if (i <= seen) return b.law;
  }
  return blocks.back().law;
}

double ArrayModel::exact_sigma2(long n) const {
  check_row(n);
  const double c2 = spec_.scale * spec_.scale;
  const double nd = static_cast<double>(n);
  switch (spec_.family) {
    case Family::iid_baseline:
      return c2;
    case Family::two_scale:
      return c2 * (1.0 + 2.0 * std::pow(nd, -2.0 * spec_.alpha));
    case Family::block_repeat: {
      const long blocks = block_count(n);
      if (spec_.lead_share <= 0.0) return c2 * static_cast<double>(blocks);
      return c2 * (static_cast<double>(blocks - 1) + lead_variance(n));
    }
    case Family::tail_coupled: {
      const double m = static_cast<double>(raw_dependence(n));
      return c2 * (nd + m * m);
    }
    case Family::moving_average: {
      const long q = static_cast<long>(spec_.ma_coefficients.size()) - 1;
      CompensatedSum acc;
      for (long h = -q; h <= q; ++h) {
        acc.add(static_cast<double>(std::max(0L, n - std::abs(h))) * ma_autocov(h));
      }
      return c2 * acc.value() / nd;
    }
  }
  return 0.0;
}

double ArrayModel::exact_cov(long n, long i, long j) const {
  const long len = length(n);
  if (i < 1 || i > len || j < 1 || j > len) {
    throw Error(ErrorKind::index_out_of_range, "covariance index outside 1..N_n");
  }
  const double c2 = spec_.scale * spec_.scale;
  const double nd = static_cast<double>(n);
  const long gap = std::abs(i - j);
  switch (spec_.family) {
    case Family::iid_baseline:
      return gap == 0 ? c2 / nd : 0.0;
    case Family::two_scale: {
      const double b2 = std::pow(nd, -2.0 * spec_.alpha);
      if (gap == 0) return c2 * (1.0 / nd + 2.0 * b2);
      return gap == 1 ? -c2 * b2 : 0.0;
    }
    case Family::block_repeat: {
      const long m = raw_dependence(n);
      const long bi = (i - 1) / m;
      if (bi != (j - 1) / m) return 0.0;
      const double var_y = (bi == 0 && spec_.lead_share > 0.0) ? lead_variance(n) : 1.0;
      return c2 * var_y / static_cast<double>(m * m);
    }
    case Family::tail_coupled:
      if (gap == 0) return c2;
      return (i > n && j > n) ? c2 : 0.0;
    case Family::moving_average:
      return c2 * ma_autocov(gap) / nd;
  }
  return 0.0;
}

double ArrayModel::max_window_variance(long n, long k) const {
  const long len = length(n);
  if (k < 1 || k > len) throw Error(ErrorKind::index_out_of_range, "window length outside 1..N_n");
  const double c2 = spec_.scale * spec_.scale;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  switch (spec_.family) {
    case Family::iid_baseline:
      return c2 * kd / nd;
    case Family::two_scale:
      // Interior η terms telescope; only the two boundary η survive.
      return c2 * (kd / nd + 2.0 * std::pow(nd, -2.0 * spec_.alpha));
    case Family::block_repeat: {
      const long m = raw_dependence(n);
      double best = 0.0;
      // Starts beyond the second block repeat an earlier overlap pattern.
      const long last_start = std::min(len - k + 1, 2 * m);
      for (long a = 1; a <= last_start; ++a) {
        CompensatedSum acc;
        for (long pos = a; pos < a + k;) {
          const long b = (pos - 1) / m;
          const long block_end = (b + 1) * m;
          const long overlap = std::min(block_end, a + k - 1) - pos + 1;
          const double var_y = (b == 0 && spec_.lead_share > 0.0) ? lead_variance(n) : 1.0;
          acc.add(static_cast<double>(overlap * overlap) * var_y);
          pos += overlap;
        }
        best = std::max(best, acc.value());
      }
      return c2 * best / static_cast<double>(m * m);
    }
    case Family::tail_coupled: {
      const long eta = std::min(raw_dependence(n), k);
      return c2 * (static_cast<double>(k - eta) + static_cast<double>(eta * eta));
    }
    case Family::moving_average: {
      const long q = static_cast<long>(spec_.ma_coefficients.size()) - 1;
      CompensatedSum acc;
      acc.add(kd * ma_autocov(0));
      for (long h = 1; h <= std::min(q, k - 1); ++h) {
        acc.add(2.0 * static_cast<double>(k - h) * ma_autocov(h));
      }
      return c2 * acc.value() / nd;
    }
  }
  return 0.0;
}

long ArrayModel::latent_count(long n) const {
  check_row(n);
  switch (spec_.family) {
    case Family::iid_baseline: return n;
    case Family::two_scale: return 2 * n + 1;
    case Family::block_repeat: return block_count(n);
    case Family::tail_coupled: return n + 1;
    case Family::moving_average: return n + static_cast<long>(spec_.ma_coefficients.size()) - 1;
  }
  return 0;
}

bool ArrayModel::is_discrete() const {
  switch (spec_.family) {
    case Family::two_scale: return true;
    case Family::tail_coupled: return false;
    default: return spec_.innovation == Innovation::rademacher;
  }
}

std::optional<std::uint64_t> ArrayModel::outcome_count(long n) const {
  if (!is_discrete()) return std::nullopt;
  const long latents = latent_count(n);
  if (latents >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << latents;
}

void ArrayModel::fill_latent_outcome(long n, std::uint64_t bits, std::span<double> latents) const {
  (void)n;
  for (std::size_t k = 0; k < latents.size(); ++k) latents[k] = ((bits >> k) & 1u) ? 1.0 : -1.0;
}

namespace {

void check_enumerable(const ArrayModel& model, long n) {
  const auto count = model.outcome_count(n);
  if (!count) {
    throw Error(ErrorKind::continuous_model, model.describe() + " has continuous entries");
  }
  if (*count > kEnumerationCap) {
    throw Error(ErrorKind::too_large, model.describe() + " at n=" + std::to_string(n) +
                                          " exceeds the 2^22 outcome cap");
  }
}

}  // namespace

OutcomeTable ArrayModel::enumerate_outcomes(long n) const {
  check_enumerable(*this, n);
  const long len = length(n);
  const long latents = latent_count(n);
  const auto count = static_cast<std::int64_t>(*outcome_count(n));
  OutcomeTable table;
  table.length = len;
  table.values.resize(static_cast<std::size_t>(count) * static_cast<std::size_t>(len));
  table.probs.assign(static_cast<std::size_t>(count), 1.0 / static_cast<double>(count));
#pragma omp parallel
  {
    std::vector<double> buf(static_cast<std::size_t>(latents));
#pragma omp for schedule(static)
    for (std::int64_t o = 0; o < count; ++o) {
      fill_latent_outcome(n, static_cast<std::uint64_t>(o), buf);
      realize(n, buf, {table.values.data() + o * len, static_cast<std::size_t>(len)});
    }
  }
  return table;
}

OutcomeTable ArrayModel::enumerate_outcomes_serial(long n) const {
  check_enumerable(*this, n);
  const long len = length(n);
  const auto count = *outcome_count(n);
  OutcomeTable table;
  table.length = len;
  table.values.resize(count * static_cast<std::size_t>(len));
  table.probs.assign(count, 1.0 / static_cast<double>(count));
  std::vector<double> buf(static_cast<std::size_t>(latent_count(n)));
  for (std::uint64_t o = 0; o < count; ++o) {
    fill_latent_outcome(n, o, buf);
    realize(n, buf, {table.values.data() + o * len, static_cast<std::size_t>(len)});
  }
  return table;
}

void ArrayModel::realize(long n, std::span<const double> latents, std::span<double> row) const {
  const double c = spec_.scale;
  const long len = length(n);
  if (static_cast<long>(latents.size()) != latent_count(n) || static_cast<long>(row.size()) != len) {
    throw Error(ErrorKind::invalid_parameter, "latent or row buffer has the wrong size");
  }
  switch (spec_.family) {
    case Family::iid_baseline: {
      const double a = c * inv_sqrt(n);
      for (long i = 0; i < len; ++i) row[i] = a * latents[i];
      break;
    }
    case Family::two_scale: {
      const double a = c * inv_sqrt(n);
      const double b = c * std::pow(static_cast<double>(n), -spec_.alpha);
      const auto eta = latents.subspan(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) row[i] = a * latents[i] + b * (eta[i + 1] - eta[i]);
      break;
    }
    case Family::block_repeat: {
      const long m = raw_dependence(n);
      const double a = c / static_cast<double>(m);
      const double lead = std::sqrt(lead_variance(n));
      for (long b = 0; b < static_cast<long>(latents.size()); ++b) {
        const double y = (b == 0 && spec_.lead_share > 0.0) ? lead * latents[0] : latents[b];
        std::fill_n(row.begin() + b * m, m, a * y);
      }
      break;
    }
    case Family::tail_coupled:
      for (long i = 0; i < n; ++i) row[i] = c * latents[i];
      std::fill(row.begin() + n, row.end(), c * latents[n]);
      break;
    case Family::moving_average: {
      const auto& th = spec_.ma_coefficients;
      const long q = static_cast<long>(th.size()) - 1;
      const double a = c * inv_sqrt(n);
      for (long i = 1; i <= n; ++i) {
        CompensatedSum acc;
        // ζ_t sits at latents[t + q - 1].
        for (long j = 0; j <= q; ++j) acc.add(th[j] * latents[i - j + q - 1]);
        row[i - 1] = a * acc.value();
      }
      break;
    }
  }
}

void ArrayModel::sample_row_into(long n, RandomStream& stream, std::span<double> latents,
                                 std::span<double> row) const {
  const bool rademacher_innovations = spec_.innovation == Innovation::rademacher;
  switch (spec_.family) {
    case Family::two_scale:
      for (double& z : latents) z = stream.rademacher();
      break;
    case Family::tail_coupled:
      for (double& z : latents) z = stream.normal();
      break;
    default:
      for (double& z : latents) z = rademacher_innovations ? stream.rademacher() : stream.normal();
      if (spec_.family == Family::block_repeat && spec_.lead_share > 0.0 && !rademacher_innovations) {
        // Lead innovation is always Rademacher; redraw slot 0 from the same stream.
        latents[0] = stream.rademacher();
      }
      break;
  }
  realize(n, latents, row);
}

RowSample ArrayModel::sample_row(long n, std::uint64_t seed, std::uint64_t replicate) const {
  RandomStream stream(seed, static_cast<std::uint64_t>(n), replicate);
  std::vector<double> latents(static_cast<std::size_t>(latent_count(n)));
  RowSample out{n, std::vector<double>(static_cast<std::size_t>(length(n)))};
  sample_row_into(n, stream, latents, out.values);
  return out;
}

bool ArrayModel::has_closed_form_lookahead() const {
  return spec_.family != Family::moving_average;
}

double ArrayModel::lookahead_mean(long n, std::span<const double> latents,
                                  std::span<const double> row, long k) const {
  const long len = length(n);
  if (k < 0 || k > len) throw Error(ErrorKind::index_out_of_range, "prefix length outside 0..N_n");
  if (k == 0 || k == len) return 0.0;
  switch (spec_.family) {
    case Family::iid_baseline:
      return 0.0;
    case Family::two_scale: {
      // X_nj reveals ξ_j and η_j − η_{j−1} (n >= 2). Once some increment is
      // nonzero the η path is pinned down; before that both signs are equally
      // likely and E(η_k | prefix) = 0.
      const auto eta = latents.subspan(static_cast<std::size_t>(n));
      bool pinned = false;
      for (long j = 1; j <= k && !pinned; ++j) pinned = eta[j] != eta[j - 1];
      if (!pinned) return 0.0;
      const double b = spec_.scale * std::pow(static_cast<double>(n), -spec_.alpha);
      return -b * eta[k];
    }
    case Family::block_repeat: {
      const long m = raw_dependence(n);
      const long block_end = ((k - 1) / m + 1) * m;
      return row[k - 1] * static_cast<double>(block_end - k);
    }
    case Family::tail_coupled:
      return k <= n ? 0.0 : row[k - 1] * static_cast<double>(len - k);
    case Family::moving_average:
      break;
  }
  throw Error(ErrorKind::unsupported_family,
              describe() + " has no closed-form conditional expectations");
}

void ArrayModel::lookahead_path(long n, std::span<const double> latents,
                                std::span<const double> row, std::span<double> out) const {
  const long len = length(n);
  if (out.size() != static_cast<std::size_t>(len + 1)) {
    throw Error(ErrorKind::invalid_parameter, "lookahead_path output must hold N_n + 1 values");
  }
  if (spec_.family != Family::two_scale) {
    for (long k = 0; k <= len; ++k) out[static_cast<std::size_t>(k)] = lookahead_mean(n, latents, row, k);
    return;
  }
  const auto eta = latents.subspan(static_cast<std::size_t>(n));
  const double b = spec_.scale * std::pow(static_cast<double>(n), -spec_.alpha);
  bool pinned = false;
  out[0] = 0.0;
  for (long k = 1; k <= len; ++k) {
    pinned = pinned || eta[k] != eta[k - 1];
    out[static_cast<std::size_t>(k)] = (k == len || !pinned) ? 0.0 : -b * eta[k];
  }
}

ArrayModel ArrayModel::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorKind::invalid_parameter, "scale factor must be positive");
  ModelSpec s = spec_;
  s.scale *= c;
  return ArrayModel(std::move(s));
}

ArrayModel ArrayModel::with_unit_dependence_floor() const {
  ModelSpec s = spec_;
  s.unit_dependence_floor = true;
  return ArrayModel(std::move(s));
}

ArrayModel ArrayModel::block_innovations() const {
  if (spec_.family != Family::block_repeat) {
    throw Error(ErrorKind::invalid_parameter, "block_innovations needs a block-repeat model");
  }
  ModelSpec s = spec_;
  s.block_divisor = spec_.block_divisor.value_or(spec_.m_schedule);
  s.m_schedule = DependenceSchedule::constant(1);
  return ArrayModel(std::move(s));
}

}  // namespace mdclt::models
