#include "mdclt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mdclt/conditions.hpp"
#include "mdclt/error.hpp"
#include "mdclt/hall_heyde.hpp"
#include "mdclt/martingale.hpp"
#include "mdclt/monte_carlo.hpp"
#include "mdclt/report_io.hpp"
#include "mdclt/verdict.hpp"

namespace mdclt::cli {

using models::ArrayModel;
using models::KeyValues;
using report::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::conditions: return "conditions";
    case Command::clt: return "clt";
    case Command::oracle: return "oracle";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

std::string_view to_string(Format f) { return f == Format::json ? "json" : "csv"; }

namespace {

const std::vector<std::string> kModelKeys{"family",      "alpha",        "beta",
                                          "m",           "m_schedule",   "innovation",
                                          "coefficients", "lead_share",  "scale"};

const std::vector<std::string> kRunKeys{"cmd",   "n_grid",       "reps",    "seed",
                                        "eps",   "r",            "out",     "format",
                                        "delta", "gamma",        "ks_threshold",
                                        "hh_reps", "plot_data"};

template <typename T>
T parse_number(std::string_view text, const std::string& field) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorKind::config, "field '" + field + "': '" + std::string(text) + "' is not valid");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    out.push_back(parse_number<double>(item, field));
  }
  if (out.empty()) throw Error(ErrorKind::config, "field '" + field + "' is empty");
  return out;
}

long parse_grid_point(std::string_view s, bool& power) {
  power = s.size() > 2 && s.substr(0, 2) == "2^";
  if (power) {
    const long k = parse_number<long>(s.substr(2), "n_grid");
    if (k < 0 || k > 40) throw Error(ErrorKind::config, "field 'n_grid': exponent out of range");
    return 1L << k;
  }
  return parse_number<long>(s, "n_grid");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json model_json(const models::ModelSpec& spec) {
  json j = json::object();
  for (const auto& [k, v] : models::to_key_values(spec)) j[k] = v;
  return j;
}

std::vector<double> checked_eps(const RunConfig& cfg) {
  for (double e : cfg.eps) {
    if (!(e > 0.0)) throw Error(ErrorKind::config, "field 'eps': values must be > 0");
  }
  return cfg.eps;
}

ArrayModel build_model(const RunConfig& cfg) {
  if (!cfg.model_given) throw Error(ErrorKind::config, "field 'family': a model is required");
  try {
    return ArrayModel::build(cfg.model);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_parameter) throw Error(ErrorKind::config, e.what());
    throw;
  }
}

// Floors m_n = 0 to 1 where a functional needs m_n >= 1.
ArrayModel mdep_view(const ArrayModel& model, long n) {
  return model.dependence(n) == 0 ? model.with_unit_dependence_floor() : model;
}

struct ConditionSet {
  std::vector<conditions::ConditionReport> reports;
  conditions::BerkAssessment berk;
  conditions::RomanoWolfAssessment romano_wolf;
  bool unit_floor = false;
};

ConditionSet evaluate_conditions(const ArrayModel& model, std::span<const long> grid,
                                 const RunConfig& cfg, bool with_innovations) {
  namespace c = conditions;
  ConditionSet set;
  set.unit_floor = std::any_of(grid.begin(), grid.end(), [&](long n) { return model.dependence(n) == 0; });
  for (double e : checked_eps(cfg)) {
    set.reports.push_back(c::evaluate_series(grid, [&](long n) { return c::lindeberg_classic(model, n, e); }));
  }
  for (double e : cfg.eps) {
    set.reports.push_back(c::evaluate_series(
        grid, [&](long n) { return c::lindeberg_mdep(mdep_view(model, n), n, e); }));
  }
  if (with_innovations && model.family() == models::Family::block_repeat) {
    const ArrayModel y = model.block_innovations();
    for (double e : cfg.eps) {
      auto rep = c::evaluate_series(grid, [&](long n) { return c::lindeberg_classic(y, n, e); });
      rep.condition_id = "lindeberg-classic-innovations";
      for (auto& v : rep.grid) v.condition_id = rep.condition_id;
      set.reports.push_back(std::move(rep));
    }
  }
  for (double r : cfg.r) {
    set.reports.push_back(c::evaluate_series(grid, [&](long n) { return c::lyapunov_ratio(model, n, r); }));
  }
  set.reports.push_back(c::evaluate_series(grid, [&](long n) { return c::orey_ratio(model, n); }));
  set.reports.push_back(
      c::evaluate_series(grid, [&](long n) { return c::rio_functional(mdep_view(model, n), n); }));
  set.berk = c::assess_berk(model, grid, cfg.delta);
  set.romano_wolf = c::assess_romano_wolf(model, grid, c::default_romano_wolf_inputs(cfg.delta, cfg.gamma));
  return set;
}

std::string param_label(const conditions::ConditionReport& r) {
  std::string out = r.condition_id;
  if (r.params.empty()) return out;
  out += '[';
  bool first = true;
  for (const auto& [k, v] : r.params) {
    out += (first ? "" : ",") + k + '=' + report::format_number(v);
    first = false;
  }
  return out + ']';
}

}  // namespace

const std::vector<std::string>& run_keys() { return kRunKeys; }

std::vector<long> parse_grid(std::string_view text) {
  std::vector<long> out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      bool power = false;
      out.push_back(parse_grid_point(item, power));
      continue;
    }
    bool p1 = false, p2 = false;
    const long a = parse_grid_point(std::string_view(item).substr(0, dots), p1);
    const long b = parse_grid_point(std::string_view(item).substr(dots + 2), p2);
    if (p1 != p2 || b < a) throw Error(ErrorKind::config, "field 'n_grid': bad range '" + item + "'");
    if (p1) {
      for (long n = a; n <= b; n *= 2) out.push_back(n);
    } else {
      for (long n = a; n <= b; ++n) out.push_back(n);
    }
  }
  if (out.empty()) throw Error(ErrorKind::config, "field 'n_grid' is empty");
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] < 1) throw Error(ErrorKind::config, "field 'n_grid': n must be >= 1");
    if (j > 0 && out[j] <= out[j - 1]) {
      throw Error(ErrorKind::config, "field 'n_grid': values must be strictly increasing");
    }
  }
  return out;
}

RunConfig config_from(const KeyValues& kv) {
  RunConfig cfg;
  KeyValues model_kv;
  for (const auto& [k, v] : kv) {
    if (std::find(kModelKeys.begin(), kModelKeys.end(), k) != kModelKeys.end()) {
      model_kv[k] = v;
    } else if (std::find(kRunKeys.begin(), kRunKeys.end(), k) == kRunKeys.end()) {
      throw Error(ErrorKind::config, "field '" + k + "': unknown key");
    }
  }
  if (!model_kv.empty()) {
    cfg.model = models::model_spec_from(model_kv);
    cfg.model_given = true;
  }
  if (kv.contains("cmd")) {
    const std::string& c = kv.at("cmd");
    if (c == "conditions") cfg.command = Command::conditions;
    else if (c == "clt") cfg.command = Command::clt;
    else if (c == "oracle") cfg.command = Command::oracle;
    else if (c == "sweep") cfg.command = Command::sweep;
    else throw Error(ErrorKind::config, "field 'cmd': unknown command '" + c + "'");
  }
  if (kv.contains("n_grid")) cfg.grid = parse_grid(kv.at("n_grid"));
  if (kv.contains("reps")) {
    cfg.reps = parse_number<long>(kv.at("reps"), "reps");
    if (cfg.reps < 100) throw Error(ErrorKind::config, "field 'reps': must be >= 100");
  }
  if (kv.contains("seed")) cfg.seed = parse_number<std::uint64_t>(kv.at("seed"), "seed");
  if (kv.contains("eps")) cfg.eps = parse_list(kv.at("eps"), "eps");
  if (kv.contains("r")) cfg.r = parse_list(kv.at("r"), "r");
  for (double r : cfg.r) {
    if (!(r > 2.0)) throw Error(ErrorKind::config, "field 'r': exponents must be > 2");
  }
  if (kv.contains("delta")) cfg.delta = parse_number<double>(kv.at("delta"), "delta");
  if (kv.contains("gamma")) cfg.gamma = parse_number<double>(kv.at("gamma"), "gamma");
  if (!(cfg.delta > 0.0)) throw Error(ErrorKind::config, "field 'delta': must be > 0");
  if (!(cfg.gamma >= -1.0 && cfg.gamma < 1.0)) throw Error(ErrorKind::config, "field 'gamma': must lie in [-1, 1)");
  if (kv.contains("ks_threshold")) cfg.ks_threshold = parse_number<double>(kv.at("ks_threshold"), "ks_threshold");
  if (kv.contains("hh_reps")) {
    cfg.hh_reps = parse_number<long>(kv.at("hh_reps"), "hh_reps");
    if (cfg.hh_reps != 0 && cfg.hh_reps < 2) throw Error(ErrorKind::config, "field 'hh_reps': must be 0 or >= 2");
  }
  if (kv.contains("plot_data")) cfg.plot_data = kv.at("plot_data");
  if (kv.contains("out")) cfg.out = kv.at("out");
  if (kv.contains("format")) {
    const std::string& f = kv.at("format");
    if (f == "json") cfg.format = Format::json;
    else if (f == "csv") cfg.format = Format::csv;
    else throw Error(ErrorKind::config, "field 'format': expected json or csv, got '" + f + "'");
  }
  return cfg;
}

std::vector<long> effective_grid(const RunConfig& cfg) {
  if (!cfg.grid.empty()) return cfg.grid;
  switch (cfg.command) {
    case Command::conditions: return conditions::geometric_grid(6, 14);
    case Command::clt: return conditions::geometric_grid(8, 14);
    case Command::oracle: return {4, 6, 8};
    case Command::sweep: return conditions::geometric_grid(6, 24);
  }
  return {};
}

CommandResult run_conditions(const RunConfig& cfg) {
  const ArrayModel model = build_model(cfg);
  const auto grid = effective_grid(cfg);
  if (grid.size() < 4) throw Error(ErrorKind::config, "field 'n_grid': conditions need >= 4 grid points");
  const auto set = evaluate_conditions(model, grid, cfg, true);

  CommandResult res;
  if (cfg.format == Format::csv) {
    std::ostringstream os;
    std::vector<conditions::ConditionReport> all = set.reports;
    all.insert(all.end(), set.berk.reports.begin(), set.berk.reports.end());
    all.insert(all.end(), set.romano_wolf.reports.begin(), set.romano_wolf.reports.end());
    report::write_csv(all, os);
    res.output = os.str();
    return res;
  }
  json reports = json::array();
  for (const auto& r : set.reports) reports.push_back(report::to_json(r));
  json doc = {{"command", "conditions"},
              {"model", model_json(model.spec())},
              {"model_description", model.describe()},
              {"grid", grid},
              {"unit_dependence_floor", set.unit_floor},
              {"reports", reports},
              {"berk", report::to_json(set.berk)},
              {"romano_wolf", report::to_json(set.romano_wolf)}};
  res.output = dump(doc);
  return res;
}

CommandResult run_clt(const RunConfig& cfg) {
  const ArrayModel model = build_model(cfg);
  const auto grid = effective_grid(cfg);
  const auto conv = montecarlo::convergence_sweep(model, grid, cfg.reps, cfg.seed);
  const bool passed = conv.final_ks <= cfg.ks_threshold;

  if (!cfg.plot_data.empty()) {
    std::ofstream os(cfg.plot_data);
    if (!os) throw Error(ErrorKind::config, "field 'plot_data': cannot write '" + cfg.plot_data + "'");
    montecarlo::write_plot_data(montecarlo::simulate_normalized_sums(model, grid.back(), cfg.reps, cfg.seed), os);
  }
  CommandResult res;
  res.exit_code = passed ? 0 : 1;
  if (cfg.format == Format::csv) {
    std::ostringstream os;
    report::write_csv(conv, os);
    res.output = os.str();
    return res;
  }
  json doc = {{"command", "clt"},
              {"model", model_json(model.spec())},
              {"model_description", model.describe()},
              {"ks_threshold", cfg.ks_threshold},
              {"kolmogorov_band_99", montecarlo::kolmogorov_band_99(cfg.reps)},
              {"convergence", report::to_json(conv)},
              {"passed", passed}};
  if (cfg.hh_reps > 0) {
    doc["hall_heyde"] = report::to_json(oracle::check_hh_hypotheses(model, grid, cfg.hh_reps, cfg.seed));
  }
  res.output = dump(doc);
  return res;
}

CommandResult run_oracle(const RunConfig& cfg) {
  const ArrayModel model = build_model(cfg);
  const auto grid = effective_grid(cfg);
  const auto eps = checked_eps(cfg);
  bool all_passed = true;
  json entries = json::array();
  std::ostringstream csv;
  csv << "n,section,epsilon,check,paper_eq,passed,max_error,tolerance\n";
  auto csv_rows = [&](long n, const char* section, double e, const std::vector<oracle::CheckResult>& rs) {
    for (const auto& r : rs) {
      csv << n << ',' << section << ',' << report::format_number(e) << ',' << r.name << ','
          << r.paper_eq << ',' << (r.passed ? "true" : "false") << ','
          << report::format_number(r.max_error) << ',' << report::format_number(r.tolerance) << '\n';
    }
  };

  for (long n : grid) {
    const auto trace = oracle::build_trace(model, n);
    const auto structure = oracle::check_structure(trace);
    // Bounds are homogeneous in the row scale, so checking them at the
    // smallest admissible ε equals rescaling the row to |X| <= ε/m_n.
    const double eps_b = static_cast<double>(std::max(trace.dependence(), 1L)) * trace.table().max_abs();
    const auto bounds = oracle::check_bounds(trace, eps_b);
    std::vector<oracle::TruncationReport> truncs;
    for (double e : eps) truncs.push_back(oracle::check_truncation(model, n, e));

    bool ok = bounds.passed();
    for (const auto& r : structure) ok = ok && r.passed;
    for (const auto& t : truncs) ok = ok && t.passed();
    all_passed = all_passed && ok;

    json structure_json = json::array();
    for (const auto& r : structure) structure_json.push_back(report::to_json(r));
    json trunc_json = json::array();
    for (const auto& t : truncs) trunc_json.push_back(report::to_json(t));
    entries.push_back({{"n", n},
                       {"summary", report::to_json(oracle::summarize(trace, structure, &bounds, nullptr))},
                       {"structure", structure_json},
                       {"bounds", report::to_json(bounds)},
                       {"truncation", trunc_json},
                       {"passed", ok}});
    csv_rows(n, "structure", 0.0, structure);
    csv_rows(n, "bounds", eps_b, bounds.results);
    for (const auto& t : truncs) csv_rows(n, "truncation", t.epsilon, t.results);
  }
  CommandResult res;
  res.exit_code = all_passed ? 0 : 1;
  if (cfg.format == Format::csv) {
    res.output = csv.str();
    return res;
  }
  json doc = {{"command", "oracle"},
              {"model", model_json(model.spec())},
              {"model_description", model.describe()},
              {"grid", grid},
              {"traces", entries},
              {"passed", all_passed}};
  res.output = dump(doc);
  return res;
}

namespace {

struct SweepRow {
  std::string label;
  models::ModelSpec spec;
};

std::vector<SweepRow> sweep_catalogue() {
  using models::DependenceSchedule;
  using models::Family;
  std::vector<SweepRow> rows;
  {
    models::ModelSpec s;
    s.family = Family::iid_baseline;
    rows.push_back({"iid-baseline", s});
  }
  {
    models::ModelSpec s;
    s.family = Family::two_scale;
    s.alpha = 0.25;
    rows.push_back({"two-scale", s});
  }
  {
    models::ModelSpec s;
    s.family = Family::block_repeat;
    s.innovation = models::Innovation::normal;
    s.m_schedule = DependenceSchedule::floor_power(0.25);
    rows.push_back({"block-repeat", s});
  }
  {
    models::ModelSpec s;
    s.family = Family::tail_coupled;
    s.m_schedule = DependenceSchedule::floor_power(0.2);
    rows.push_back({"tail-coupled", s});
  }
  {
    models::ModelSpec s;
    s.family = Family::moving_average;
    s.ma_coefficients = {1.0, 0.5};
    rows.push_back({"moving-average", s});
  }
  return rows;
}

}  // namespace

CommandResult run_sweep(const RunConfig& cfg) {
  auto rows = sweep_catalogue();
  if (cfg.model_given) rows.push_back({"custom", cfg.model});
  const auto grid = effective_grid(cfg);
  if (grid.size() < 4) throw Error(ErrorKind::config, "field 'n_grid': sweep needs >= 4 grid points");
  using conditions::Verdict;

  json rows_json = json::array();
  std::ostringstream csv;
  csv << "model,column,paper_eq,verdict,passed\n";
  for (const auto& row : rows) {
    const ArrayModel model = ArrayModel::build(row.spec);
    const auto set = evaluate_conditions(model, grid, cfg, false);
    json cols = json::array();
    auto add = [&](const std::string& column, const std::string& eq, const std::string& verdict, bool passed) {
      cols.push_back({{"column", column}, {"paper_eq", eq}, {"verdict", verdict}, {"passed", passed}});
      csv << row.label << ',' << column << ",\"" << eq << "\"," << verdict << ','
          << (passed ? "true" : "false") << '\n';
    };
    for (const auto& r : set.reports) {
      const bool passed = r.condition_id == "orey"
                              ? (r.verdict == Verdict::bounded || r.verdict == Verdict::tends_to_zero)
                              : r.verdict == Verdict::tends_to_zero;
      add(param_label(r), r.paper_eq, std::string(conditions::to_string(r.verdict)), passed);
    }
    add("berk[delta=" + report::format_number(cfg.delta) + "]", "berki,berkiii,berkiv",
        set.berk.satisfied() ? "satisfied" : "violated", set.berk.satisfied());
    add("romano-wolf[delta=" + report::format_number(cfg.delta) + ",gamma=" +
            report::format_number(cfg.gamma) + "]",
        "RW1,RW3,RW5,RW6", set.romano_wolf.satisfied() ? "satisfied" : "violated",
        set.romano_wolf.satisfied());
    rows_json.push_back({{"label", row.label},
                         {"model", model_json(model.spec())},
                         {"model_description", model.describe()},
                         {"columns", cols}});
  }
  CommandResult res;
  if (cfg.format == Format::csv) {
    res.output = csv.str();
    return res;
  }
  json doc = {{"command", "sweep"}, {"grid", grid}, {"rows", rows_json}};
  res.output = dump(doc);
  return res;
}

CommandResult run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::conditions: return run_conditions(cfg);
    case Command::clt: return run_clt(cfg);
    case Command::oracle: return run_oracle(cfg);
    case Command::sweep: return run_sweep(cfg);
  }
  throw Error(ErrorKind::config, "unknown command");
}

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::structural_violation:
    case ErrorKind::hypothesis_violation:
    case ErrorKind::bound_violation:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"m-dependent triangular-array CLT laboratory"};
  std::string model, config, cmd, grid, reps, seed, eps, r, out_path, format;
  app.add_option("--model", model, "inline model, e.g. \"two-scale;alpha=0.25\"");
  app.add_option("--config", config, "key = value config file");
  app.add_option("--cmd", cmd, "conditions | clt | oracle | sweep");
  app.add_option("--n-grid", grid, "e.g. 2^6..2^14 or 4,6,8");
  app.add_option("--reps", reps, "Monte Carlo replicates");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--eps", eps, "comma-separated epsilon list");
  app.add_option("--r", r, "comma-separated Lyapunov exponents");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "json | csv");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    KeyValues kv = config.empty() ? KeyValues{} : models::read_key_values(config);
    if (!model.empty()) {
      for (const auto& k : kModelKeys) kv.erase(k);
      for (const auto& [k, v] : models::parse_inline_model(model)) kv[k] = v;
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"cmd", &cmd}, {"n_grid", &grid}, {"reps", &reps},   {"seed", &seed},
        {"eps", &eps}, {"r", &r},         {"out", &out_path}, {"format", &format}};
    for (const auto& [key, value] : flags) {
      if (!value->empty()) kv[key] = *value;
    }
    if (!kv.contains("cmd")) throw Error(ErrorKind::config, "field 'cmd': a command is required");
    const RunConfig cfg = config_from(kv);
    const CommandResult res = run(cfg);
    if (cfg.out.empty()) {
      out << res.output;
    } else {
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os) throw Error(ErrorKind::config, "field 'out': cannot write '" + cfg.out + "'");
      os << res.output;
    }
    return res.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace mdclt::cli
