#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "mdclt/cli.hpp"

#ifndef MDCLT_BINARY
#error "MDCLT_BINARY must name the CLI executable"
#endif

using namespace mdclt::cli;
using mdclt::ErrorKind;
using th::error_kind_of;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation call(std::vector<std::string> args) {
  args.insert(args.begin(), "mdclt");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary and captures stdout.
Invocation spawn(const std::string& args) {
  const std::string cmd = std::string(MDCLT_BINARY) + " " + args + " 2>/dev/null";
  Invocation inv;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) inv.out.append(buf.data(), got);
  const int status = pclose(p);
  inv.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return inv;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("parse_grid forms") {
  CHECK(parse_grid("2^3..2^6") == std::vector<long>{8, 16, 32, 64});
  CHECK(parse_grid("4..7") == std::vector<long>{4, 5, 6, 7});
  CHECK(parse_grid("64, 128,1000") == std::vector<long>{64, 128, 1000});
  CHECK(error_kind_of([] { parse_grid("8,4"); }) == ErrorKind::config);
  CHECK(error_kind_of([] { parse_grid("2^x..2^4"); }) == ErrorKind::config);
  CHECK(error_kind_of([] { parse_grid(""); }) == ErrorKind::config);
}

TEST_CASE("config_from defaults and errors name the field") {
  mdclt::models::KeyValues kv{{"family", "two-scale"}, {"alpha", "0.25"}, {"cmd", "clt"}};
  const auto cfg = config_from(kv);
  CHECK(cfg.command == Command::clt);
  CHECK(cfg.reps == 10000);
  CHECK(cfg.model_given);
  CHECK(effective_grid(cfg) == parse_grid("2^8..2^14"));
  for (const auto& [key, bad] : std::vector<std::pair<std::string, std::string>>{
           {"reps", "many"}, {"seed", "-3x"}, {"eps", "0.5,abc"}, {"format", "xml"}, {"cmd", "plot"},
           {"n_grid", "9,3"}, {"colour", "blue"}}) {
    auto broken = kv;
    broken[key] = bad;
    try {
      config_from(broken);
      FAIL("accepted " << key << " = " << bad);
    } catch (const mdclt::Error& e) {
      CHECK(e.kind() == ErrorKind::config);
      CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
    }
  }
}

TEST_CASE("flag precedence over the config file") {
  const auto path = temp_file("mdclt_precedence.cfg",
                              "family = iid\ncmd = conditions\nn_grid = 2^4..2^7\nformat = json\n");
  const auto from_file = call({"--config", path.string()});
  REQUIRE(from_file.code == 0);
  CHECK(nlohmann::json::parse(from_file.out)["grid"].size() == 4);
  const auto overridden = call({"--config", path.string(), "--n-grid", "16,32,64,128", "--format", "csv"});
  REQUIRE(overridden.code == 0);
  CHECK(overridden.out.rfind("condition_id,paper_eq,", 0) == 0);
  // --model replaces every model key of the file.
  const auto remodel = call({"--config", path.string(), "--model", "two-scale;alpha=0.3"});
  REQUIRE(remodel.code == 0);
  CHECK(nlohmann::json::parse(remodel.out)["model"]["family"] == "two-scale");
}

TEST_CASE("exit codes") {
  CHECK(call({"--model", "iid", "--cmd", "conditions", "--n-grid", "2^4..2^7"}).code == 0);
  CHECK(call({"--model", "iid", "--cmd", "oracle", "--n-grid", "4,6"}).code == 0);
  // Dominant lead block: the sums never become normal.
  const auto bad = call({"--model", "block-repeat;m=1;lead_share=0.9", "--cmd", "clt", "--n-grid",
                         "2^6..2^9", "--reps", "2000"});
  CHECK(bad.code == 1);
  const auto missing = call({"--model", "iid"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cmd") != std::string::npos);
  const auto typo = call({"--model", "two-scale;alfa=0.3", "--cmd", "conditions"});
  CHECK(typo.code == 2);
  CHECK(typo.err.find("'alfa'") != std::string::npos);
  const auto badval = call({"--model", "two-scale;alpha=0.7", "--cmd", "conditions"});
  CHECK(badval.code == 2);
  CHECK(badval.err.find("alpha") != std::string::npos);
  CHECK(call({"--model", "tail-coupled;beta=0.25", "--cmd", "oracle"}).code == 2);
  CHECK(call({"--model", "iid", "--cmd", "conditions", "--bogus"}).code == 2);
}

TEST_CASE("a malformed config file names the offending field") {
  const auto path = temp_file("mdclt_bad.cfg", "family = block-repeat\nm = two\ncmd = conditions\n");
  const auto inv = call({"--config", path.string()});
  CHECK(inv.code == 2);
  CHECK(inv.err.find("'m'") != std::string::npos);
}

TEST_CASE("the binary prints exactly what the library returns") {
  struct Case {
    std::string args;
    mdclt::models::KeyValues kv;
  };
  const std::vector<Case> cases{
      {"--model 'two-scale;alpha=0.25' --cmd conditions --n-grid 2^6..2^10",
       {{"family", "two-scale"}, {"alpha", "0.25"}, {"cmd", "conditions"}, {"n_grid", "2^6..2^10"}}},
      {"--model 'two-scale;alpha=0.25' --cmd conditions --n-grid 2^6..2^10 --format csv",
       {{"family", "two-scale"}, {"alpha", "0.25"}, {"cmd", "conditions"}, {"n_grid", "2^6..2^10"},
        {"format", "csv"}}},
      {"--model 'moving-average;coefficients=1,0.5' --cmd clt --n-grid 2^6..2^9 --reps 1000 --seed 9",
       {{"family", "moving-average"}, {"coefficients", "1,0.5"}, {"cmd", "clt"}, {"n_grid", "2^6..2^9"},
        {"reps", "1000"}, {"seed", "9"}}},
      {"--model 'block-repeat;m=2' --cmd oracle --n-grid 4,6",
       {{"family", "block-repeat"}, {"m", "2"}, {"cmd", "oracle"}, {"n_grid", "4,6"}}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const auto lib = run(config_from(c.kv));
    const auto bin = spawn(c.args);
    CHECK(bin.code == lib.exit_code);
    CHECK(bin.out == lib.output);
  }
}

TEST_CASE("--out writes the same bytes as stdout") {
  const auto path = std::filesystem::temp_directory_path() / "mdclt_out.json";
  const std::vector<std::string> base{"--model", "iid", "--cmd", "conditions", "--n-grid", "2^4..2^8"};
  auto with_out = base;
  with_out.insert(with_out.end(), {"--out", path.string()});
  REQUIRE(call(with_out).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == call(base).out);
}

TEST_CASE("json schema of each command") {
  using nlohmann::json;
  const auto c = json::parse(call({"--model", "two-scale;alpha=0.25", "--cmd", "conditions", "--n-grid",
                                   "2^6..2^10"}).out);
  REQUIRE(c.contains("reports"));
  for (const auto& r : c["reports"]) {
    CHECK(r.contains("condition_id"));
    CHECK(r.contains("verdict"));
    CHECK(r["grid"].size() == 5);
  }
  const auto o = json::parse(call({"--model", "iid", "--cmd", "oracle", "--n-grid", "4,5"}).out);
  CHECK(o.dump().find("sum_q") != std::string::npos);
  const auto s = call({"--model", "iid", "--cmd", "sweep", "--n-grid", "2^6..2^10", "--format", "csv"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("model,column,paper_eq,verdict,passed\n", 0) == 0);
  CHECK(s.out.find("custom,") != std::string::npos);
}
