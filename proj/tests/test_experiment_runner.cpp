#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sigmaevo/experiment_runner.hpp"

using namespace sigmaevo;
using nlohmann::json;

namespace {
const OutputFile* find_file(const RunOutcome& r, const std::string& name) {
  for (const auto& f : r.files)
    if (f.name == name) return &f;
  return nullptr;
}
}  // namespace

TEST_CASE("pcrit run") {
  const auto r = run_subcommand(Subcommand::pcrit, R"({"sigma": 2, "n": 1})");
  CHECK(r.exit_code == exit_ok);
  const auto s = json::parse(r.summary);
  CHECK(s.at("status") == "ok");
  CHECK(s.at("results").at("p_crit").get<double>() == 5.0);
  const auto m = json::parse(r.manifest);
  CHECK(m.at("version") == library_version());
  CHECK(m.at("config").at("sigma") == 2.0);
  CHECK(m.at("config").at("m") == 1.0);
}

TEST_CASE("eigen run is deterministic for a fixed seed") {
  const std::string cfg = R"({"sigma": 1.5, "xi_count": 200, "random_checks": 20})";
  const auto a = run_subcommand(Subcommand::eigen, cfg, 11);
  const auto b = run_subcommand(Subcommand::eigen, cfg, 11);
  CHECK(a.exit_code == exit_ok);
  CHECK(a.summary == b.summary);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i].text == b.files[i].text);

  const auto* csv = find_file(a, "eigen.csv");
  REQUIRE(csv != nullptr);
  std::istringstream in(csv->text);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("xi_mag,", 0) == 0);
  double prev = -1.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const double xi = std::stod(line.substr(0, line.find(',')));
    CHECK(xi > prev);
    prev = xi;
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("exit codes") {
  const auto bad = run_subcommand(Subcommand::eigen, R"({"sigma": 0.5, "nope": 1})");
  CHECK(bad.exit_code == exit_config);
  const auto s = json::parse(bad.summary);
  CHECK(s.at("status") == "error");
  CHECK(s.at("error").at("issues").size() == 2);

  CHECK(run_subcommand(Subcommand::eigen, "{").exit_code == exit_config);

  // no (c, C) pair with C <= 1 exists, so the scan itself fails
  const auto numeric = run_subcommand(Subcommand::pointwise, R"({"sigma": 2, "C_cap": 1})");
  CHECK(numeric.exit_code == exit_numeric);
  CHECK(json::parse(numeric.summary).at("error").at("kind") == "numeric");

  const auto failed = run_subcommand(Subcommand::linear_decay, R"({"sigma": 1, "tolerance": 1e-9})");
  CHECK(failed.exit_code == exit_check_failed);
  CHECK(json::parse(failed.summary).at("status") == "checks-failed");
}

TEST_CASE("outputs land on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "sigmaevo_runner_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto r = run_subcommand(Subcommand::admissible, R"({"sigma": 2, "n": 1, "p": 6})");
  CHECK(r.exit_code == exit_ok);
  write_outcome(r, dir);
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  for (const auto& name : json::parse(r.manifest).at("outputs")) CHECK(std::filesystem::exists(dir / name.get<std::string>()));
  std::filesystem::remove_all(dir);
}
