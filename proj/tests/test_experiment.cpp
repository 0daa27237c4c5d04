#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "geomc/config.hpp"
#include "geomc/errors.hpp"
#include "geomc/experiment.hpp"
#include "geomc/io.hpp"

using namespace geomc;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "geomc_tests" / "runs";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig preset(const std::string& name, const std::vector<std::string>& overrides) {
  json doc = preset_document(name);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

}  // namespace

TEST_CASE("figure4 runs at three linear terms") {
  const auto dir = scratch_dir();
  for (const char* c1 : {"0", "40", "80"}) {
    const std::string out = (dir / (std::string("figure4_c") + c1)).string();
    const auto outcome = execute_experiment(
        preset("figure4", {std::string("model.c=[") + c1 + ",0,0,0,0]", "output=" + out}));
    REQUIRE(outcome.traces.size() == 1);
    const TraceFile trace = read_trace(outcome.traces[0]);
    CHECK(trace.trace.size() == 200);
    CHECK(trace.columns[4] == "x5");
    for (const auto& x : trace.trace.samples) CHECK(std::abs(x.norm() - 1.0) < 1e-9);
    CHECK(outcome.summary["config"]["model"]["c"][0] == std::stod(c1));
    CHECK(std::filesystem::exists(outcome.summary_path));
  }
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = scratch_dir();
  for (const char* name : {"figure4", "figure5"}) {
    const std::string a = (dir / (std::string(name) + "_a")).string();
    const std::string b = (dir / (std::string(name) + "_b")).string();
    const auto first = execute_experiment(preset(name, {"output=" + a, "n_samples=50"}));
    const auto second = execute_experiment(preset(name, {"output=" + b, "n_samples=50"}));
    CHECK(read_file(first.traces[0]) == read_file(second.traces[0]));
  }
}

TEST_CASE("bench grid has one cell per sampler and alpha") {
  const std::string out = (scratch_dir() / "bench").string();
  const auto outcome = execute_experiment(preset("table1", {"output=" + out, "n_samples=200"}));
  CHECK(outcome.traces.size() == 16);
  const json& grid = outcome.summary["grid"];
  REQUIRE(grid.size() == 16);
  for (const auto& cell : grid) {
    CHECK(cell.contains("alpha"));
    CHECK(cell.contains("sampler"));
    CHECK(cell["report"].contains("ess_percent"));
    CHECK(cell["report"].contains("ess_per_second"));
  }
  CHECK(std::filesystem::exists(out + "_spherical-hmc_a0p5.csv"));
}

TEST_CASE("summary echoes the resolved config") {
  const std::string out = (scratch_dir() / "echo").string();
  const auto cfg = preset("volleyball", {"output=" + out, "n_samples=100"});
  const auto outcome = execute_experiment(cfg);
  CHECK(parse_config(outcome.summary["config"]) == cfg);
  const json on_disk = json::parse(read_file(outcome.summary_path));
  CHECK(on_disk["config"]["burn_in"] == 10);
  for (const auto& x : read_trace(outcome.traces[0]).trace.samples) {
    CHECK(std::abs(x.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("eigenmodel traces carry the Lambda diagonal") {
  const std::string out = (scratch_dir() / "eigen").string();
  const auto outcome = execute_experiment(preset("eigenmodel", {"output=" + out, "n_samples=20"}));
  const TraceFile trace = read_trace(outcome.traces[0]);
  CHECK(trace.columns.size() == 20 * 3 + 3 + 1);
  CHECK(outcome.summary.contains("planted_log_posterior"));
}

TEST_CASE("errors map to exit codes") {
  std::ostringstream err;
  auto cfg = preset("volleyball", {"output=" + (scratch_dir() / "missing").string()});
  cfg.dataset = "/nonexistent/matches.txt";
  CHECK(run_experiment(cfg, err) != 0);
  CHECK(json::parse(err.str()).contains("message"));
}

TEST_CASE("cli exit status") {
  const auto dir = scratch_dir();
  const auto bad = dir / "bad.json";
  json doc = preset_document("figure4");
  doc["experiment"] = "ising";
  std::ofstream(bad) << doc.dump();
  const std::string cli = GEOMC_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " 2>/dev/null >/dev/null").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status(cli + " run " + bad.string()) == 2);
  CHECK(status(cli + " validate " + bad.string()) == 2);
  CHECK(status(cli + " preset nope") == 2);
  CHECK(status(cli + " frobnicate") == 2);
  CHECK(status(cli + " presets") == 0);
  CHECK(status(cli + " preset figure4 --print -o n_samples=30") == 0);
  CHECK(status(cli + " preset figure4 -o n_samples=20 -o output=" + (dir / "cli_run").string()) == 0);
  CHECK(std::filesystem::exists(dir / "cli_run.csv"));
}
