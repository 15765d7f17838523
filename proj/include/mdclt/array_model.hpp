#ifndef MDCLT_ARRAY_MODEL_HPP_
#define MDCLT_ARRAY_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdclt/entry_law.hpp"
#include "mdclt/outcome_table.hpp"
#include "mdclt/rng.hpp"
#include "mdclt/schedule.hpp"

namespace mdclt::models {

enum class Family { iid_baseline, two_scale, block_repeat, tail_coupled, moving_average };
enum class Innovation { rademacher, normal };

std::string_view to_string(Family f);
std::string_view to_string(Innovation v);
Family parse_family(std::string_view s);
Innovation parse_innovation(std::string_view s);

/// Exhaustive enumeration is refused beyond this many latent outcomes.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;

/// Declarative description of an array family.
///
/// Families and their rows (c = scale):
///  - iid-baseline:   N_n = n, m_n = 0, X_ni = c ζ_i / √n.
///  - two-scale:      N_n = n, m_n = 1, X_ni = c (n^{-1/2} ξ_i + n^{-α}(η_i − η_{i−1})),
///                    ξ, η Rademacher; latents ordered ξ_1..ξ_n, η_0..η_n.
///  - block-repeat:   J_n = ⌊n / d_n⌋ blocks (d_n = block_divisor or m_n),
///                    N_n = J_n m_n, X_ni = c Y_{⌈i/m_n⌉} / m_n, Y_j unit variance.
///                    With lead_share > 0 the first Y is Rademacher carrying that
///                    share of Var S_n.
///  - tail-coupled:   N_n = n + m_n, X_ni = c ξ_i (i ≤ n), c η (i > n), ξ, η ~ N(0,1);
///                    latents ξ_1..ξ_n, η.
///  - moving-average: N_n = n, m_n = q, X_ni = c/√n Σ_j θ_j ζ_{i−j},
///                    latents ζ_{1−q}..ζ_n.
struct ModelSpec {
  Family family = Family::iid_baseline;
  double alpha = 0.25;
  Innovation innovation = Innovation::rademacher;
  DependenceSchedule m_schedule = DependenceSchedule::constant(0);
  std::vector<double> ma_coefficients{1.0};
  double lead_share = 0.0;
  double scale = 1.0;
  std::optional<DependenceSchedule> block_divisor;
  /// Substitute max(m_n, 1) for m_n (0-dependent rows are also 1-dependent).
  bool unit_dependence_floor = false;
};

struct LawBlock {
  EntryLaw law;
  long count = 0;
};

struct RowSample {
  long n = 0;
  std::vector<double> values;
};

/// An m_n-dependent triangular array family. Immutable after construction.
class ArrayModel {
 public:
  /// Validates parameters; throws Error(invalid_parameter) on bad input.
  static ArrayModel build(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  std::string describe() const;

  long length(long n) const;
  long dependence(long n) const;

  /// Marginal laws of X_n1..X_nN grouped by identical law; counts sum to N_n.
  std::vector<LawBlock> entry_laws(long n) const;
  /// Law of X_ni, 1-based.
  EntryLaw entry_law(long n, long i) const;

  double exact_sigma2(long n) const;
  double exact_cov(long n, long i, long j) const;
  /// max over a of Var(X_na + ... + X_n,a+k-1), windows inside 1..N_n.
  double max_window_variance(long n, long k) const;

  long latent_count(long n) const;
  bool is_discrete() const;
  /// Number of equally likely latent configurations, or nullopt if continuous.
  std::optional<std::uint64_t> outcome_count(long n) const;

  /// Parallel over outcomes; bit-identical to enumerate_outcomes_serial.
  OutcomeTable enumerate_outcomes(long n) const;
  OutcomeTable enumerate_outcomes_serial(long n) const;

  RowSample sample_row(long n, std::uint64_t seed, std::uint64_t replicate) const;
  /// Draw latents from `stream` then realize the row. Spans sized by
  /// latent_count(n) and length(n).
  void sample_row_into(long n, RandomStream& stream, std::span<double> latents,
                       std::span<double> row) const;
  /// Deterministic map from latent variables to the row.
  void realize(long n, std::span<const double> latents, std::span<double> row) const;

  /// Σ_{i=k+1}^{k+m_n} E(X_ni | X_n1..X_nk) for a realized row, 0 <= k <= N_n.
  /// Available for iid-baseline, two-scale, block-repeat and tail-coupled;
  /// throws Error(unsupported_family) otherwise.
  double lookahead_mean(long n, std::span<const double> latents, std::span<const double> row,
                        long k) const;
  bool has_closed_form_lookahead() const;
  /// lookahead_mean for every k = 0..N_n at once, O(N_n); out sized N_n + 1.
  void lookahead_path(long n, std::span<const double> latents, std::span<const double> row,
                      std::span<double> out) const;

  ArrayModel scaled(double c) const;
  ArrayModel with_unit_dependence_floor() const;
  /// Block-repeat only: the independent array (Y_nj) behind the repeated blocks.
  ArrayModel block_innovations() const;

 private:
  explicit ArrayModel(ModelSpec spec) : spec_(std::move(spec)) {}

  void check_row(long n) const;
  long block_count(long n) const;
  long raw_dependence(long n) const;
  double lead_variance(long n) const;
  double ma_autocov(long h) const;
  void fill_latent_outcome(long n, std::uint64_t bits, std::span<double> latents) const;

  ModelSpec spec_;
};

}  // namespace mdclt::models

#endif  // MDCLT_ARRAY_MODEL_HPP_
