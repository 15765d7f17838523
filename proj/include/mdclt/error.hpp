#ifndef MDCLT_ERROR_HPP_
#define MDCLT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdclt {

enum class ErrorKind {
  invalid_parameter,
  index_out_of_range,
  unsupported_model,
  too_large,
  continuous_model,
  degenerate_variance,
  zero_dependence,
  insufficient_grid,
  structural_violation,
  hypothesis_violation,
  bound_violation,
  unsupported_family,
  config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::continuous_model: return "continuous-model";
    case ErrorKind::degenerate_variance: return "degenerate-variance";
    case ErrorKind::zero_dependence: return "zero-dependence";
    case ErrorKind::insufficient_grid: return "insufficient-grid";
    case ErrorKind::structural_violation: return "structural-violation";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::bound_violation: return "bound-violation";
    case ErrorKind::unsupported_family: return "unsupported-family";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace mdclt

#endif  // MDCLT_ERROR_HPP_
