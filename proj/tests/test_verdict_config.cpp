#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "mdclt/conditions.hpp"
#include "mdclt/model_config.hpp"
#include "mdclt/verdict.hpp"

using namespace th;
using namespace mdclt::conditions;
using mdclt::ErrorKind;

namespace {

std::vector<ConditionValue> series(const std::vector<long>& ns, const std::function<double(long)>& f) {
  std::vector<ConditionValue> out;
  for (long n : ns) {
    ConditionValue v;
    v.condition_id = "test";
    v.n = n;
    v.value = f(n);
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("asymptotic verdict rules") {
  const auto grid = geometric_grid(6, 14);
  auto constant = asymptotic_verdict(series(grid, [](long) { return 3.0; }));
  CHECK(constant.verdict == Verdict::bounded);
  CHECK(constant.loglog_slope == doctest::Approx(0.0));
  auto up = asymptotic_verdict(series(grid, [](long n) { return std::pow(double(n), 0.5); }));
  CHECK(up.verdict == Verdict::diverges);
  CHECK(up.loglog_slope == doctest::Approx(0.5));
  auto down = asymptotic_verdict(series(grid, [](long n) { return 2.0 / n; }));
  CHECK(down.verdict == Verdict::tends_to_zero);
  auto zero_tail = asymptotic_verdict(series(grid, [](long n) { return n < 1000 ? 1.0 : 0.0; }));
  CHECK(zero_tail.verdict == Verdict::tends_to_zero);
  CHECK(std::isinf(zero_tail.loglog_slope));
  auto zero_head = asymptotic_verdict(series(grid, [](long n) { return n < 1000 ? 0.0 : 1.0; }));
  CHECK(zero_head.verdict == Verdict::inconclusive);
  // Noisy flat series: large standard error, no trend.
  auto noisy = asymptotic_verdict(series(grid, [](long n) { return (n % 2048 == 0 || n == 64) ? 10.0 : 0.1; }));
  CHECK(noisy.verdict == Verdict::inconclusive);

  CHECK(error_kind_of([&] { asymptotic_verdict(series({1, 2, 3}, [](long) { return 1.0; })); }) ==
        ErrorKind::insufficient_grid);
  CHECK(error_kind_of([&] { asymptotic_verdict(series({1, 2, 2, 3}, [](long) { return 1.0; })); }) ==
        ErrorKind::insufficient_grid);
}

TEST_CASE("verdicts on the paper's two-scale example") {
  const auto grid = geometric_grid(6, 14);
  const auto orey = evaluate_series(grid, [](long n) { return orey_ratio(two_scale(0.25), n); });
  CHECK(orey.verdict == Verdict::diverges);
  CHECK(std::abs(orey.loglog_slope - 0.5) < 0.05);
  const auto ly = evaluate_series(grid, [](long n) { return lyapunov_ratio(two_scale(0.3), n, 4.0); });
  CHECK(ly.verdict == Verdict::tends_to_zero);
  CHECK(std::abs(ly.loglog_slope + 0.2) < 0.05);
}

TEST_CASE("model config round trip") {
  using namespace mdclt::models;
  for (const auto& m : catalogue()) {
    const auto kv = to_key_values(m.spec());
    std::stringstream ss;
    write_key_values(ss, kv);
    const auto back = model_spec_from(parse_key_values(ss));
    const auto rebuilt = ArrayModel::build(back);
    CHECK(rebuilt.describe() == m.describe());
    for (long n : {5L, 40L}) CHECK(rebuilt.exact_sigma2(n) == m.exact_sigma2(n));
  }
}

TEST_CASE("config errors name the field") {
  using namespace mdclt::models;
  auto message = [](const std::string& text) -> std::string {
    try {
      std::istringstream in(text);
      ArrayModel::build(model_spec_from(parse_key_values(in)));
    } catch (const mdclt::Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("family = two-scale\nalpha = abc\n").find("'alpha'") != std::string::npos);
  CHECK(message("family = nope\n").find("'family'") != std::string::npos);
  CHECK(message("alpha = 0.2\n").find("'family'") != std::string::npos);
  CHECK(message("family = block-repeat\nm_schedule = floor-power\n").find("'beta'") != std::string::npos);
  CHECK(message("family = two-scale\nthis line is bad\n").find("line 2") != std::string::npos);
  const auto kv = parse_inline_model("moving-average; coefficients=1,0.5; innovation=normal");
  CHECK(kv.at("family") == "moving-average");
  CHECK(model_spec_from(kv).ma_coefficients == std::vector<double>{1.0, 0.5});
}
