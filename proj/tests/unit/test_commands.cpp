#include <filesystem>
#include <fstream>
#include <sstream>

#include "crange/commands.hpp"
#include "crange/report.hpp"
#include "test_support.hpp"

using namespace crange;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("crange_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

RunConfig quick(const std::string& symbols, const fs::path& out) {
  RunConfig c;
  c.symbols_source = symbols;
  c.symbols_text = symbols;
  c.out_dir = out.string();
  for (const char* kv : {"samples=100000", "gc_samples=256", "probes=false"}) apply_override(c, kv);
  return c;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("overrides") {
  RunConfig c;
  apply_override(c, "eps_i=0.2");
  apply_override(c, "c_grid=0.25,0.5");
  apply_override(c, "hardy_stein_constant=1");
  CHECK(c.criteria.eps_i == 0.2);
  CHECK(c.criteria.c_grid == std::vector<double>{0.25, 0.5});
  CHECK(c.verify.hardy_stein_constant == 1.0);
  CHECK(c.overrides.size() == 3);
  CHECK_THROWS_AS(apply_override(c, "nonsense=1"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "eps_i"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "gc_samples=0"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "probes=maybe"), ParseError);
  for (const auto& key : override_keys()) CHECK_FALSE(key.empty());
}

TEST_CASE("config echo includes defaults") {
  RunConfig c;
  c.depth = 8;
  const auto echo = c.echo();
  CHECK(echo["schema_version"] == kReportSchemaVersion);
  CHECK(echo["symbols_source"] == "default corpus");
  CHECK(echo["criteria"]["gc_depth"] == 8);
  CHECK(echo["criteria"]["eps_ii"] == 0.05);
  CHECK(echo["verify"]["hardy_stein_constant"] == "p^2/2");
}

TEST_CASE("analyze writes one report per symbol and exponent") {
  const auto out = scratch("analyze");
  RunConfig c = quick("identity; z2: poly 0 0 1; psi: moebius 0.5; affine 0.5; affine 0.5 0.5", out);
  std::ostringstream log, err;
  CHECK(cmd_analyze(c, log, err) == kExitOk);
  int reports = 0;
  for (const auto& e : fs::directory_iterator(out)) reports += e.path().extension() == ".json";
  CHECK(reports == 5);
  const std::string csv = slurp(out / "summary.csv");
  CHECK(count_lines(csv) == 6);
  const char* want[] = {"Closed", "Closed", "Closed", "NotClosed", "NotClosed"};
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  CHECK(line == summary_csv_header());
  for (const char* w : want) {
    std::getline(rows, line);
    CHECK(line.substr(line.rfind(',') + 1) == w);
    CHECK(line.find(",true,") != std::string::npos);
  }
  const auto doc = nlohmann::json::parse(slurp(out / "002_psi_p2.json"));
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["config"]["criteria"]["kernel_depth"] == 12);
  CHECK(doc["config"]["criteria"]["measure_samples"] == 100000);
  CHECK(doc["curves"]["kernel"].size() == 1 + 12 * 16);
}

TEST_CASE("analyze exit codes") {
  const auto out = scratch("analyze_bad");
  std::ostringstream log, err;
  RunConfig empty = quick("# nothing here", out);
  CHECK(cmd_analyze(empty, log, err) == kExitUsage);
  RunConfig bad = quick("identity\nspline 3", out);
  CHECK(cmd_analyze(bad, log, err) == kExitUsage);
  CHECK(err.str().find("line 2") != std::string::npos);
  RunConfig badp = quick("identity", out);
  badp.ps = {-1.0};
  CHECK(cmd_analyze(badp, log, err) == kExitUsage);
}

TEST_CASE("analyze is byte-identical across runs") {
  const auto a = scratch("det");
  std::ostringstream log, err;
  RunConfig c = quick("b: blaschke 1 0 0.5 0,-0.4; affine 0.8", a);
  c.ps = {1.0, 4.0};
  REQUIRE(cmd_analyze(c, log, err) == kExitOk);
  std::vector<std::string> first;
  for (const auto& e : fs::directory_iterator(a)) first.push_back(e.path().filename().string());
  std::sort(first.begin(), first.end());
  std::vector<std::string> contents;
  for (const auto& f : first) contents.push_back(slurp(a / f));
  fs::remove_all(a);
  REQUIRE(cmd_analyze(c, log, err) == kExitOk);
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(slurp(a / first[i]) == contents[i]);
}

TEST_CASE("verify passes, flags a corrupted constant and skips gated windows") {
  const auto out = scratch("verify");
  RunConfig c = quick("identity; moebius 0.5", out);
  for (const char* kv : {"verify_ps=1,2", "pb2_samples=100000", "disk_radial=256", "disk_angular=1024",
                         "circle_nodes=4096"}) {
    apply_override(c, kv);
  }
  std::ostringstream log, err;
  CHECK(cmd_verify(c, log, err) == kExitOk);
  const std::string table = slurp(out / "verify.csv");
  CHECK(table.find(",fail,") == std::string::npos);
  CHECK(table.find("pb1,moebius 0.5 h=2^-4") != std::string::npos);
  CHECK(table.find(",skip,") != std::string::npos);

  apply_override(c, "hardy_stein_constant=1");
  std::ostringstream log2, err2;
  CHECK(cmd_verify(c, log2, err2) == kExitFailure);
  CHECK(err2.str().find("worst offender: norm-agreement") != std::string::npos);
  CHECK(err2.str().find("lhs = ") != std::string::npos);
  CHECK(err2.str().find("rhs = ") != std::string::npos);
}

TEST_CASE("sweep over a symbol parameter") {
  const auto out = scratch("sweep");
  RunConfig c = quick("affine {x}", out);
  c.sweep_values = {0.5, 0.7, 0.9};
  std::ostringstream csv, err;
  CHECK(cmd_sweep(c, csv, err) == kExitOk);
  CHECK(count_lines(csv.str()) == 4);
  CHECK(slurp(out / "sweep.csv") == csv.str());

  RunConfig none = quick("affine 0.5", out);
  none.sweep_values = {0.5};
  CHECK(cmd_sweep(none, csv, err) == kExitUsage);
}

TEST_CASE("single-point sweep matches analyze") {
  const auto out = scratch("sweep1");
  RunConfig c = quick("affine {x}", out);
  c.sweep_values = {0.8};
  std::ostringstream csv, err;
  REQUIRE(cmd_sweep(c, csv, err) == kExitOk);
  RunConfig a = quick("affine 0.8", scratch("sweep1_analyze"));
  std::ostringstream log;
  REQUIRE(cmd_analyze(a, log, err) == kExitOk);
  const std::string summary = slurp(fs::path(a.out_dir) / "summary.csv");
  const std::string row = summary.substr(summary.find('\n') + 1);
  const std::string sweep_row = csv.str().substr(csv.str().find('\n') + 1);
  CHECK(sweep_row == "0.8," + row);
}

TEST_CASE("sweep over p keeps the verdicts") {
  const auto out = scratch("sweep_p");
  RunConfig c = quick("poly 0 0 1", out);
  c.sweep_param = "p";
  c.sweep_values = {0.5, 1, 2, 4};
  std::ostringstream csv, err;
  CHECK(cmd_sweep(c, csv, err) == kExitOk);
  std::istringstream rows(csv.str());
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "Closed");
    ++n;
  }
  CHECK(n == 4);
}
