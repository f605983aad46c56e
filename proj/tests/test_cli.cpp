#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "foel/cli.hpp"
#include "foel/tl_diagrams.hpp"
#include "json.hpp"

using namespace foel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "foel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "foel_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("gap prints the closed-form value") {
  const auto r = run_cli({"gap", "--L", "4", "--delta", "1.0"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "0.292893218813\n");
}

TEST_CASE("gap comparison over lengths") {
  const auto r = run_cli({"gap", "--L-max", "12", "--delta", "1,1.5", "--format", "json"});
  CHECK(r.code == cli::kOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == true);
  CHECK(doc["rows"].size() == 22);
}

TEST_CASE("scan emits the full grid as CSV") {
  const auto r = run_cli({"scan", "--L-max", "8", "--delta", "1.0", "--method", "both", "--format", "csv"});
  CHECK(r.code == cli::kOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "L,n,delta,energy,dim,method");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  int expected = 0;
  for (int length = 2; length <= 8; ++length) expected += length / 2 + 1;
  CHECK(rows == expected);
  CHECK(r.out.find("4,2,1,0.633974596216,2,both\n") != std::string::npos);
}

TEST_CASE("scan JSON report") {
  const auto r = run_cli({"scan", "--L-max", "6", "--delta", "1,3", "--format", "json"});
  CHECK(r.code == cli::kOk);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* key : {"verdict", "margins", "violations", "tolerances", "versions"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["verdict"] == true);
  CHECK(doc["violations"].empty());
  CHECK(doc["margins"].contains("3"));
}

TEST_CASE("output files are written atomically and deterministically") {
  const fs::path dir = scratch_dir();
  const fs::path first = dir / "first.json";
  const fs::path second = dir / "second.json";
  const std::vector<std::string> base{"scan", "--L-max", "9", "--delta", "1,1.5", "--format", "json"};
  auto a = base;
  a.insert(a.end(), {"--output", first.string()});
  auto b = base;
  b.insert(b.end(), {"--output", second.string()});
  CHECK(run_cli(a).code == cli::kOk);
  CHECK(run_cli(b).code == cli::kOk);
  CHECK(slurp(first) == slurp(second));
  CHECK_FALSE(fs::exists(first.string() + ".tmp"));
  CHECK(run_cli(a).out.empty());
  fs::remove(first);
  fs::remove(second);
}

TEST_CASE("matrix dump re-parses exactly") {
  for (const char* delta : {"1", "1.25", "3"}) {
    const auto r = run_cli({"sector", "--L", "8", "--n", "3", "--delta", delta, "--dump-matrix"});
    CHECK(r.code == cli::kOk);
    CHECK(matrix_from_csv(r.out) == sector_matrix(8, 3, std::stod(delta)).entries);
  }
  const auto h = run_cli({"sector", "--L", "3", "--n", "1", "--dump-hamiltonian"});
  CHECK(h.code == cli::kOk);
  CHECK(h.out.rfind("1 1 0.5\n", 0) == 0);
}

TEST_CASE("diagram listing") {
  const auto r = run_cli({"diagrams", "--L", "4", "--n", "2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "(1,2)(3,4)\n(1,4)(2,3)\n");
}

TEST_CASE("tree reports") {
  const fs::path file = scratch_dir() / "star3.json";
  std::ofstream(file) << R"({"vertices": 4, "edges": [[0,1],[0,2],[0,3]], "root": 0})";
  const auto r = run_cli({"tree", "--edges", file.string()});
  CHECK(r.code == cli::kOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == true);
  CHECK(doc["trees"][0]["energies"]["1"].get<double>() == doctest::Approx(0.5));

  const auto all = run_cli({"tree", "--all", "6"});
  CHECK(all.code == cli::kOk);
  CHECK(nlohmann::json::parse(all.out)["trees"].size() == 1 + 1 + 2 + 3 + 6);

  std::ofstream(file) << R"({"vertices": 4, "edges": [[0,1],[2,3]]})";
  CHECK(run_cli({"tree", "--edges", file.string()}).code == cli::kInvalidInput);
  fs::remove(file);
}

TEST_CASE("Lieb-Mattis command") {
  for (const char* model : {"af-chain", "fm-chain"}) {
    const auto r = run_cli({"lieb-mattis", "--model", model, "--L", "6"});
    CHECK(r.code == cli::kOk);
    CHECK(nlohmann::json::parse(r.out)["verdict"] == true);
  }
  CHECK(run_cli({"lieb-mattis", "--model", "cross", "--a-sites", "3", "--b-sites", "2"}).code == cli::kOk);
  CHECK(run_cli({"lieb-mattis", "--model", "ring"}).code == cli::kInvalidInput);
}

TEST_CASE("invalid input maps to exit code 2") {
  CHECK(run_cli({"scan", "--bogus"}).code == cli::kInvalidInput);
  CHECK(run_cli({"scan", "--delta", "0.5"}).code == cli::kInvalidInput);
  CHECK(run_cli({"scan", "--L-max", "11", "--method", "oracle"}).code == cli::kInvalidInput);
  CHECK(run_cli({"scan", "--method", "lanczos"}).code == cli::kInvalidInput);
  CHECK(run_cli({"sector", "--L", "4", "--n", "3"}).code == cli::kInvalidInput);
  CHECK(run_cli({"frobnicate"}).code == cli::kInvalidInput);
  const auto r = run_cli({"gap", "--L", "x"});
  CHECK(r.code == cli::kInvalidInput);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("defaults and help") {
  const auto d = run_cli({"--defaults"});
  CHECK(d.code == cli::kOk);
  const auto doc = nlohmann::json::parse(d.out);
  CHECK(doc["strictness_tolerance"].get<double>() == 1e-8);
  CHECK(doc["delta_grid"].size() == 6);
  const auto h = run_cli({"--help"});
  CHECK(h.code == cli::kOk);
  CHECK(h.out.find("scan") != std::string::npos);
  CHECK(run_cli({"scan", "--help"}).out.find("--L-max") != std::string::npos);
}

TEST_CASE("configuration parsing") {
  std::ostringstream sink;
  const char* argv[] = {"foel", "scan", "--L-max", "7", "--delta", "1", "--delta", "2.5", "--n-max", "2"};
  const auto config = cli::parse_command_line(10, argv, sink);
  REQUIRE(config.has_value());
  CHECK(config->command == cli::Command::kScan);
  CHECK(config->max_length == 7);
  CHECK(config->deltas == std::vector<double>{1.0, 2.5});
  CHECK(config->max_spin_deviation == 2);
}
