#ifndef FOEL_TL_DIAGRAMS_HPP
#define FOEL_TL_DIAGRAMS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foel/hilbert.hpp"

namespace foel {

/// Noncrossing pairing of n arcs over L ordered sites in which no arc spans
/// an unpaired site. Sites are 0-based internally; to_string() prints the
/// 1-based form "(1,2)(3,4)".
class ArcDiagram {
 public:
  static constexpr int kUnpaired = -1;

  // Throws ParameterError if the arcs do not form a valid diagram.
  static ArcDiagram from_arcs(int length, const std::vector<std::pair<int, int>>& arcs);
  static ArcDiagram empty(int length);

  int length() const noexcept { return static_cast<int>(partner_.size()); }
  int arc_count() const noexcept { return arc_count_; }
  int partner(int site) const { return partner_.at(site); }
  bool is_paired(int site) const { return partner_.at(site) != kUnpaired; }
  const std::vector<int>& partners() const noexcept { return partner_; }

  // Arcs (i, j) with i < j, sorted.
  std::vector<std::pair<int, int>> arcs() const;
  std::string to_string() const;

  // Checks every structural invariant; used by property tests.
  static bool is_valid_partner_array(const std::vector<int>& partner);

  bool operator==(const ArcDiagram&) const = default;
  // Canonical order: lexicographic on the sorted arc list.
  bool operator<(const ArcDiagram& other) const { return arcs() < other.arcs(); }

 private:
  ArcDiagram(std::vector<int> partner, int arc_count)
      : partner_(std::move(partner)), arc_count_(arc_count) {}

  std::vector<int> partner_;
  int arc_count_ = 0;
};

// All diagrams of n arcs on L sites in canonical order.
std::vector<ArcDiagram> enumerate_diagrams(int length, int arc_count);

// Same arcs on L+1 sites with the new last site unpaired.
ArcDiagram embed(const ArcDiagram& diagram);

// Index of each (L, n) diagram's embedding within enumerate_diagrams(L+1, n).
std::vector<int> embedding_index_map(int length, int arc_count);

struct DiagramTerm {
  double coefficient = 0.0;
  ArcDiagram result;
};

/// h_{b,b+1} phi_alpha in the diagram basis (bond b joins sites b and b+1,
/// 0-based). Returns nullopt when both sites are unpaired; (+1, alpha) when
/// alpha contains the arc (b, b+1); otherwise (-1/(2 Delta), beta) where beta
/// caps sites b, b+1 and joins their former partners.
///
/// In Temperley-Lieb terms U_b = -(q + 1/q) h_b with U_b^2 = -(q + 1/q) U_b;
/// the loop weight is absorbed here so that coefficients stay at h level.
std::optional<DiagramTerm> h_action(int bond, const ArcDiagram& diagram, double delta);

/// Matrix A_{L,n} of the chain Hamiltonian in the generalized Hulthen basis,
/// columns indexed by enumerate_diagrams(L, n).
struct SectorMatrix {
  int length = 0;
  int arc_count = 0;
  double delta = 1.0;
  std::vector<ArcDiagram> diagrams;
  Eigen::MatrixXd entries;
};

SectorMatrix sector_matrix(int length, int arc_count, double delta);

// Full-space bracket vector phi_alpha.
Eigen::VectorXd hulthen_vector(const ArcDiagram& diagram, const AnisotropyParam& aniso);
// phi_alpha in sector_basis_by_down(L, n) coordinates.
Eigen::VectorXd hulthen_sector_vector(const ArcDiagram& diagram, const AnisotropyParam& aniso);

/// Overlaps <phi_alpha, phi_beta>. Throws IndependenceViolationError unless
/// positive definite.
Eigen::MatrixXd gram_matrix(int length, int arc_count, const AnisotropyParam& aniso);

// Dense CSV with 17 significant digits, one row per line.
std::string to_csv(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

}  // namespace foel

#endif  // FOEL_TL_DIAGRAMS_HPP
