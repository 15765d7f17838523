#include "mdclt/model_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mdclt/error.hpp"

namespace mdclt::models {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::config, "field '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

long parse_long(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::config, "field '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Re-tag library errors with the config field that caused them.
template <typename F>
auto with_field(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, "field '" + key + "': " + e.what());
  }
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::config, "line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  return parse_key_values(in);
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

ModelSpec model_spec_from(const KeyValues& kv) {
  if (!kv.contains("family")) throw Error(ErrorKind::config, "field 'family' is required");
  ModelSpec spec;
  spec.family = with_field("family", [&] { return parse_family(kv.at("family")); });
  if (kv.contains("alpha")) spec.alpha = parse_double(kv, "alpha");
  if (kv.contains("innovation")) {
    spec.innovation = with_field("innovation", [&] { return parse_innovation(kv.at("innovation")); });
  }
  if (kv.contains("lead_share")) spec.lead_share = parse_double(kv, "lead_share");
  if (kv.contains("scale")) spec.scale = parse_double(kv, "scale");

  std::string schedule = kv.contains("m_schedule") ? kv.at("m_schedule") : "";
  if (schedule.empty()) schedule = kv.contains("beta") ? "floor-power" : "constant";
  spec.m_schedule = with_field("m_schedule", [&] {
    if (schedule == "constant") {
      return DependenceSchedule::constant(kv.contains("m") ? parse_long(kv, "m") : 1);
    }
    if (schedule == "floor-power") {
      if (!kv.contains("beta")) throw Error(ErrorKind::config, "field 'beta' is required for floor-power");
      return DependenceSchedule::floor_power(parse_double(kv, "beta"));
    }
    if (schedule == "floor-log") return DependenceSchedule::floor_log();
    throw Error(ErrorKind::config, "field 'm_schedule': unknown schedule '" + schedule + "'");
  });

  if (kv.contains("coefficients")) {
    spec.ma_coefficients.clear();
    std::stringstream ss(kv.at("coefficients"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      KeyValues one{{"coefficients", trim(item)}};
      spec.ma_coefficients.push_back(parse_double(one, "coefficients"));
    }
  }
  return spec;
}

KeyValues to_key_values(const ModelSpec& spec) {
  KeyValues kv;
  kv["family"] = std::string(to_string(spec.family));
  switch (spec.family) {
    case Family::two_scale:
      kv["alpha"] = format_double(spec.alpha);
      break;
    case Family::block_repeat:
    case Family::tail_coupled:
      switch (spec.m_schedule.kind()) {
        case DependenceSchedule::Kind::constant:
          kv["m_schedule"] = "constant";
          kv["m"] = std::to_string(spec.m_schedule.constant_value());
          break;
        case DependenceSchedule::Kind::floor_power:
          kv["m_schedule"] = "floor-power";
          kv["beta"] = format_double(spec.m_schedule.beta());
          break;
        case DependenceSchedule::Kind::floor_log:
          kv["m_schedule"] = "floor-log";
          break;
      }
      if (spec.family == Family::block_repeat) {
        kv["innovation"] = std::string(to_string(spec.innovation));
        if (spec.lead_share > 0.0) kv["lead_share"] = format_double(spec.lead_share);
      }
      break;
    case Family::moving_average: {
      std::string list;
      for (double t : spec.ma_coefficients) list += (list.empty() ? "" : ",") + format_double(t);
      kv["coefficients"] = list;
      kv["innovation"] = std::string(to_string(spec.innovation));
      break;
    }
    case Family::iid_baseline:
      kv["innovation"] = std::string(to_string(spec.innovation));
      break;
  }
  if (spec.scale != 1.0) kv["scale"] = format_double(spec.scale);
  return kv;
}

KeyValues parse_inline_model(const std::string& text) {
  KeyValues kv;
  std::stringstream ss(text);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (first && eq == std::string::npos) {
      kv["family"] = item;
    } else if (eq == std::string::npos) {
      throw Error(ErrorKind::config, "--model: expected key=value, got '" + item + "'");
    } else {
      kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    first = false;
  }
  return kv;
}

}  // namespace mdclt::models
