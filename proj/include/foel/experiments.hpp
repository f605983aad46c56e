#ifndef FOEL_EXPERIMENTS_HPP
#define FOEL_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foel/hilbert.hpp"
#include "foel/lattice.hpp"

namespace foel {

// Pipelines for E(L, n): the diagram basis (Perron root of A_{L,n}) or the
// orthonormal highest-weight compression.
enum class Method { kDiagram, kOracle, kBoth };

std::string to_string(Method method);
Method method_from_string(const std::string& name);  // "diagram", "oracle", "both"

inline constexpr int kOracleMaxLength = 10;
inline constexpr int kDiagramMaxLength = 16;
inline constexpr int kDiagramFullGridMaxLength = 14;  // beyond this n <= 4 only
inline constexpr double kStrictnessTolerance = 1e-8;
inline constexpr double kPipelineAgreement = 1e-9;

inline const std::vector<double>& default_delta_grid() {
  static const std::vector<double> grid{1.0, 1.25, 1.5, 2.0, 3.0, 5.0};
  return grid;
}

struct EnergyEntry {
  double energy = 0.0;
  std::int64_t dimension = 0;
  Method method = Method::kDiagram;
};

/// E(L, n) for one anisotropy, keyed by (L, n).
struct EnergyTable {
  double delta = 1.0;
  std::map<std::pair<int, int>, EnergyEntry> entries;

  std::optional<double> energy(int length, int spin_deviation) const;
  // Absorbs entries of `other` (same delta); existing keys are kept.
  void merge(const EnergyTable& other);
  std::vector<int> lengths() const;
  // min_{r >= n} E(L, r) over the entries present for L.
  std::optional<double> lower_hull(int length, int spin_deviation) const;
};

struct EnergyTableRequest {
  int min_length = 2;
  int max_length = 8;
  std::optional<int> max_spin_deviation;
  Method method = Method::kBoth;
  int threads = 0;  // 0: hardware concurrency
};

/// Throws InvalidSizeError when a pipeline limit is exceeded and
/// ConsistencyError when the two pipelines disagree by more than 1e-9.
/// Solver errors are rethrown annotated with (L, n).
EnergyTable energy_table(const EnergyTableRequest& request, double delta);
EnergyTable energy_table(int max_length, double delta, Method method);

// Smallest eigenvalue of A_{L,n} by the Perron shift.
double diagram_energy(int length, int spin_deviation, double delta);

struct Violation {
  int length = 0;
  int spin_deviation = 0;
  double margin = 0.0;
  std::string description;
};

struct FoelReport {
  double delta = 1.0;
  int length = 0;
  bool ordered = true;
  std::vector<double> margins;  // E(L, n+1) - E(L, n)
  std::vector<Violation> violations;
};

std::vector<FoelReport> check_foel(const EnergyTable& table, double tolerance = kStrictnessTolerance);
bool foel_verdict(const std::vector<FoelReport>& reports);

struct MonotonicityStep {
  int length = 0;  // compares L and L+1
  int spin_deviation = 0;
  double margin = 0.0;  // E(L, n) - E(L+1, n)
};

struct MonotonicityReport {
  double delta = 1.0;
  double tolerance = kStrictnessTolerance;
  bool verdict = true;
  std::vector<MonotonicityStep> steps;
  std::vector<Violation> violations;
};

// Strict decrease in L for n >= 1; n = 0 entries must equal zero (1e-10).
MonotonicityReport check_volume_monotonicity(const EnergyTable& table,
                                             double tolerance = kStrictnessTolerance);

struct InequalityStep {
  int length = 0;  // checks E(L+1, n) against row L
  int spin_deviation = 0;
  double lhs = 0.0;
  double rhs = 0.0;  // min over the defined members of {E(L, n), E(L, n-1)}
};

struct InequalityReport {
  double delta = 1.0;
  double tolerance = 1e-10;
  bool verdict = true;
  std::vector<InequalityStep> steps;
  std::vector<Violation> violations;
};

// E(L+1, n) >= min{E(L, n), E(L, n-1)} - tolerance, undefined terms skipped.
InequalityReport check_kn_inequality(const EnergyTable& table, double tolerance = 1e-10);

struct GapRow {
  int length = 0;
  double computed = 0.0;
  double formula = 0.0;
};

struct GapReport {
  double delta = 1.0;
  std::vector<GapRow> rows;
  double max_deviation = 0.0;
};

// 1 - cos(pi/L)/Delta.
double gap_formula(int length, double delta);

// E(L, 1) from the tridiagonal A_{L,1} against the closed form, L = 2..L_max.
GapReport check_gap_formula(int max_length, double delta);

struct TreeFoelReport {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::map<int, double> energies;  // n -> E(L, n), n >= 0
  double level_one_margin = 0.0;   // min_{n>=2} E(L, n) - E(L, 1); +inf if none
  bool level_one_unique_minimum = true;
  double half_fiedler = 0.0;
  double fiedler_deviation = 0.0;  // |E(L, 1) - fiedler/2|
  bool verdict = true;
};

inline constexpr int kTreeMaxVertices = 10;

/// XXX ferromagnet on a tree: E(L, n) for every n by exact diagonalization
/// with Casimir labelling; checks that n = 1 is the unique minimum over
/// n >= 1 and that E(L, 1) equals half the Fiedler value.
TreeFoelReport tree_foel_level1(const TreeGraph& tree, double tolerance = kStrictnessTolerance);

struct TreeGrowthReport {
  std::vector<int> sizes;
  std::vector<double> level_one_energies;
  std::vector<double> margins;  // E(L, 1) - E(L+1, 1)
  std::vector<bool> strict;     // margin > 1e-10
  bool nonincreasing = true;
  bool strictly_decreasing = true;
};

/// Throws InputError unless each tree is a leaf extension of the previous one.
TreeGrowthReport tree_gap_monotonicity(const std::vector<TreeGraph>& growth_sequence);

/// The matrix of H_T in the one-bracket states |x> - |parent(x)> (x != root),
/// rows and columns ordered like line_graph(tree).tree_edges, computed from
/// the Hilbert-space action, next to I - adjacency(line graph)/2.
struct TreeBracketComparison {
  Eigen::MatrixXd hilbert_matrix;
  Eigen::MatrixXd line_graph_matrix;
  double max_entry_difference = 0.0;
  int positive_off_diagonal_count = 0;
  double spectrum_difference = 0.0;  // max |lambda_k - mu_k|, sorted
};

TreeBracketComparison tree_bracket_comparison(const TreeGraph& tree);

/// Spin-1/2 Heisenberg model sum J_xy S_x . S_y with a bipartition.
struct LiebMattisModel {
  int sites = 0;
  std::vector<Coupling> couplings;
  std::vector<bool> in_a;  // true: sublattice A

  // 2 * |S_A - S_B|.
  int twice_reference_spin() const;

  static LiebMattisModel antiferromagnetic_chain(int sites);
  static LiebMattisModel ferromagnetic_chain(int sites);
  // J = +1 between every A and B site, 0 within the sublattices.
  static LiebMattisModel cross_coupled(int a_sites, int b_sites);
};

// Throws ModelError on a sign-pattern violation or a reducible coupling graph.
void validate(const LiebMattisModel& model);

struct LiebMattisReport {
  int twice_reference_spin = 0;
  std::map<int, double> lowest_energy;  // 2S -> E(S)
  bool increasing_above = true;         // E(S+1) > E(S) for S >= reference
  bool minimum_at_reference = true;     // E(S) > E(reference) for S < reference
  std::vector<std::string> violations;
  bool verdict = true;
};

LiebMattisReport lieb_mattis_scan(const LiebMattisModel& model, double tolerance = kStrictnessTolerance);

// Total spin of the lowest state in each sector M >= 0 (keys 2M, values 2S).
std::map<int, int> ground_spin_per_sector(const LiebMattisModel& model);

}  // namespace foel

#endif  // FOEL_EXPERIMENTS_HPP
