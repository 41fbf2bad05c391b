#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hardpair/cli.hpp"

using namespace hardpair;
using nlohmann::json;

namespace {

const std::string kConfigs = HARDPAIR_CONFIG_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hardpair");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "hardpair_cli_tests";
  std::filesystem::create_directories(p);
  return p;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::filesystem::path p = temp_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (char c : row) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  const Run none = run_cli({});
  CHECK(none.code == kExitUsage);
  CHECK(none.err.find("Subcommands") != std::string::npos);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

TEST_CASE("geometry prints one record") {
  const Run r = run_cli({"geometry", "--body", kConfigs + "/ellipse_body.json", "--theta", "0", "--thetabar", "0",
                         "--psi", "0"});
  REQUIRE(r.code == kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  const json j = json::parse(r.out);
  CHECK(j["d"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(j["identities"]["normal_direction"].get<double>() < 1e-8);
  CHECK(j.contains("config_hash"));
}

TEST_CASE("scatter") {
  const Run r = run_cli({"scatter", "--config", kConfigs + "/scatter_disk.json", "--V", "1,0,-1,0,0,0"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  const std::vector<double> v = j["V_post"].get<std::vector<double>>();
  CHECK(v[0] == doctest::Approx(-1.0));
  CHECK(v[2] == doctest::Approx(1.0));
  CHECK(j["residuals"]["ledger_jump"].get<double>() < 1e-12);

  CHECK(run_cli({"scatter", "--config", kConfigs + "/scatter_disk.json", "--V", "-1,0,1,0,0,0"}).code ==
        kExitValidation);
  CHECK(run_cli({"scatter", "--config", kConfigs + "/scatter_disk.json", "--V", "1,0,x,0,0,0"}).code ==
        kExitValidation);
  CHECK(run_cli({"scatter", "--config", kConfigs + "/scatter_disk.json", "--V", "1,0"}).code == kExitValidation);
  const Run oval = run_cli({"scatter", "--config", kConfigs + "/scatter_oval.json", "--V", "-1,0,1,0,0,0"});
  REQUIRE(oval.code == kExitOk);
  const json jo = json::parse(oval.out);
  CHECK(jo["residuals"]["ledger_jump"].get<double>() < 1e-10);
  CHECK(jo["residuals"]["determinant"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("malformed configs exit 2 with the field named") {
  const std::string bad_body = write_temp("bad_body.json", R"({"body":{"kind":"ellipse","a":1.0,"b":2.0}})");
  const Run r1 = run_cli({"scatter", "--config", bad_body, "--V", "1,0,-1,0,0,0"});
  CHECK(r1.code == kExitValidation);
  CHECK(r1.err.find("body") != std::string::npos);

  const std::string bad_family =
      write_temp("bad_family.json", R"({"body":{"kind":"disk","r":1},"family":{"family":"op"}})");
  const Run r2 = run_cli({"scatter", "--config", bad_family, "--V", "1,0,-1,0,0,0"});
  CHECK(r2.code == kExitValidation);
  CHECK(r2.err.find("family.line_field") != std::string::npos);

  const std::string unknown = write_temp("unknown.json", R"({"body":{"kind":"disk","r":1},"colour":"red"})");
  const Run r3 = run_cli({"simulate", "--config", unknown});
  CHECK(r3.code == kExitValidation);
  CHECK(r3.err.find("config.colour") != std::string::npos);

  const std::string short_x = write_temp(
      "short_x.json", R"({"body":{"kind":"disk","r":1},"initial":{"X":[0,0,4,0],"V":[0,0,0,0,0,0]}})");
  const Run r4 = run_cli({"simulate", "--config", short_x});
  CHECK(r4.code == kExitValidation);
  CHECK(r4.err.find("initial.X") != std::string::npos);

  const std::string not_json = write_temp("not_json.json", "{ body: ");
  CHECK(run_cli({"simulate", "--config", not_json}).code == kExitValidation);
  CHECK(run_cli({"simulate", "--config", (temp_dir() / "missing.json").string()}).code == kExitValidation);

  const std::string overlap = write_temp(
      "overlap.json", R"({"body":{"kind":"disk","r":1},"initial":{"X":[0,0,1,0,0,0],"V":[1,0,0,0,0,0]}})");
  CHECK(run_cli({"simulate", "--config", overlap}).code == kExitValidation);
}

TEST_CASE("simulate writes deterministic JSONL") {
  const std::string a = (temp_dir() / "a.jsonl").string(), b = (temp_dir() / "b.jsonl").string();
  REQUIRE(run_cli({"simulate", "--config", kConfigs + "/simulate_ellipse.json", "--out", a, "--quiet"}).code ==
          kExitOk);
  REQUIRE(run_cli({"simulate", "--config", kConfigs + "/simulate_ellipse.json", "--out", b}).code == kExitOk);
  const std::string ta = slurp(a);
  CHECK(ta == slurp(b));

  std::istringstream lines(ta);
  std::string line, hash;
  int n = 0, events = 0;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    CHECK(j["X"].size() == 6);
    CHECK(j["V"].size() == 6);
    CHECK(j.contains("t"));
    CHECK(j.contains("ledger"));
    if (hash.empty()) hash = j["config_hash"];
    CHECK(j["config_hash"] == hash);
    if (j["event"].get<bool>()) ++events;
    ++n;
  }
  CHECK(n > 80);
  CHECK(events >= 1);

  // A seed override changes the hash.
  const Run seeded = run_cli({"simulate", "--config", kConfigs + "/simulate_ellipse.json", "--seed", "9"});
  REQUIRE(seeded.code == kExitOk);
  CHECK(json::parse(seeded.out.substr(0, seeded.out.find('\n')))["config_hash"] != hash);
}

TEST_CASE("nonuniq report and CSV") {
  const std::string csv = (temp_dir() / "finals.csv").string();
  const Run r = run_cli({"nonuniq", "--config", kConfigs + "/nonuniq.json", "--csv", csv, "--quiet"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["runs"].size() == 6);
  CHECK(j["all_conserve"].get<bool>());
  CHECK(j["all_distinct"].get<bool>());
  CHECK(j["max_conservation_residual"].get<double>() < 1e-9);
  std::istringstream rows(slurp(csv));
  std::string row;
  int n = 0;
  while (std::getline(rows, row)) ++n;
  CHECK(n == 7);
}

TEST_CASE("invariants table") {
  const std::string cfg = write_temp("inv.json", R"({"body":{"kind":"ellipse","a":2,"b":1},"samples":300,"seed":4})");
  const Run r = run_cli({"invariants", "--config", cfg, "--quiet"});
  REQUIRE(r.code == kExitOk);
  std::istringstream rows(r.out);
  std::string row;
  std::getline(rows, row);
  CHECK(row == "candidate,family,residual,samples,seed,config_hash");
  int n = 0;
  while (std::getline(rows, row)) {
    ++n;
    const std::vector<std::string> cells = split_csv(row);
    REQUIRE(cells.size() == 6);
    if (cells[0] == "w") continue;
    CHECK(std::stod(cells[2]) < 1e-9);
  }
  CHECK(n == 3 * 7);
  CHECK(run_cli({"invariants", "--config", cfg, "--quiet"}).out == r.out);
}
