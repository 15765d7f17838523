#ifndef MDCLT_MODEL_CONFIG_HPP_
#define MDCLT_MODEL_CONFIG_HPP_

#include <iosfwd>
#include <map>
#include <string>

#include "mdclt/array_model.hpp"

namespace mdclt::models {

/// Flat key-value configuration: one `key = value` per line, `#` comments.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::string& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

/// Model keys: family, alpha, beta, m, m_schedule (constant|floor-power|floor-log),
/// innovation, coefficients (comma list), lead_share, scale. Unknown keys are
/// left for the caller.
ModelSpec model_spec_from(const KeyValues& kv);
KeyValues to_key_values(const ModelSpec& spec);

/// Inline form "family" or "family;key=value;key=value".
KeyValues parse_inline_model(const std::string& text);

}  // namespace mdclt::models

#endif  // MDCLT_MODEL_CONFIG_HPP_
