#ifndef FOEL_CLI_HPP
#define FOEL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "foel/experiments.hpp"

namespace foel::cli {

enum class Command { kScan, kGap, kSector, kTree, kDiagrams, kLiebMattis, kDefaults };
enum class Format { kCsv, kJson };

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kInvalidInput = 2,
  kSolverFailure = 3,
};

struct RunConfig {
  Command command = Command::kScan;
  int max_length = 8;
  std::optional<int> length;  // gap / sector / diagrams
  std::optional<int> spin_deviation;
  std::vector<double> deltas{1.0};
  std::optional<int> max_spin_deviation;
  Method method = Method::kBoth;
  std::string output;  // empty: standard output
  Format format = Format::kCsv;
  double strictness_tolerance = kStrictnessTolerance;
  double inequality_tolerance = 1e-10;
  double gap_tolerance = 1e-10;
  int threads = 0;

  // sector
  bool dump_matrix = false;
  bool dump_hamiltonian = false;
  // tree
  std::string edges_path;
  std::optional<int> all_trees_up_to;
  // lieb-mattis
  std::string model = "af-chain";
  int sites = 4;
  int a_sites = 2;
  int b_sites = 1;
};

// Throws InputError on malformed or unknown arguments. Returns nullopt after
// printing help to `out`.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

// Executes the command; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_command_line + run with exit-code mapping. Reads the optional
// THREADS environment variable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Defaults as JSON text.
std::string defaults_json();

// Writes to `path.tmp` and renames over `path`.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace foel::cli

#endif  // FOEL_CLI_HPP
