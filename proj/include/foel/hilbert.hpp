#ifndef FOEL_HILBERT_HPP
#define FOEL_HILBERT_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "foel/lattice.hpp"

namespace foel {

// Size limits for operator assembly.
struct SizeLimits {
  int full_space_max = 14;
  int sector_max = 20;
};

/// Anisotropy Delta >= 1 together with its deformation parameter
/// q = Delta - sqrt(Delta^2 - 1) in (0, 1].
struct AnisotropyParam {
  double delta = 1.0;
  double q = 1.0;

  // Throws ParameterError for delta < 1 or non-finite delta.
  static AnisotropyParam from_delta(double delta);
  static AnisotropyParam isotropic() { return {1.0, 1.0}; }
};

/// Basis state of L spins-1/2 as a bitmask. Site 0 is the most significant
/// bit; a set bit is a down spin, so the all-up state has mask 0 and the
/// two-site order is (++, +-, -+, --).
class SpinConfiguration {
 public:
  SpinConfiguration(int length, std::uint32_t mask) : length_(length), mask_(mask) {}

  int length() const noexcept { return length_; }
  std::uint32_t mask() const noexcept { return mask_; }
  bool is_down(int site) const noexcept { return (mask_ >> bit(site)) & 1u; }
  int down_count() const noexcept { return __builtin_popcount(mask_); }
  // Twice the magnetization, an integer.
  int twice_magnetization() const noexcept { return length_ - 2 * down_count(); }
  std::string to_string() const;  // e.g. "+-+"

  bool operator==(const SpinConfiguration&) const = default;

 private:
  int bit(int site) const noexcept { return length_ - 1 - site; }
  int length_;
  std::uint32_t mask_;
};

constexpr std::uint32_t site_bit(int length, int site) { return 1u << (length - 1 - site); }

/// Real operator on the 2^L space (or a sector of it).
struct SparseOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  bool symmetric = false;

  Eigen::Index dimension() const { return matrix.rows(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

// "row col value" per line, row-major, 17 significant digits.
std::string to_triplet_text(const SparseOperator& op);

/// Two-site interaction h in the basis (++, +-, -+, --): the rank-one
/// projector onto q^{-1/2}|+-> - q^{1/2}|-+>.
Eigen::Matrix4d interaction_matrix(const AnisotropyParam& aniso);

/// Open XXZ chain sum_x h_{x,x+1} including the kink boundary fields.
SparseOperator build_xxz_chain_hamiltonian(int length, const AnisotropyParam& aniso,
                                           const SizeLimits& limits = {});

/// XXX ferromagnet sum over tree edges of (1/4 - S_x . S_y).
SparseOperator build_xxx_graph_hamiltonian(const TreeGraph& tree, const SizeLimits& limits = {});

struct Coupling {
  int x = 0;
  int y = 0;
  double strength = 0.0;
};

/// sum_{pairs} J_{xy} S_x . S_y on the full space.
SparseOperator build_exchange_hamiltonian(int length, const std::vector<Coupling>& couplings,
                                          const SizeLimits& limits = {});

/// Classical total-spin Casimir (sum_x S_x)^2, eigenvalues S(S+1).
SparseOperator build_total_spin_casimir(int length, const SizeLimits& limits = {});

// Magnetization is passed as twice its value to keep it integral.
// Throws SectorError unless |2M| <= L and 2M = L (mod 2).
int down_count_for(int length, int twice_magnetization);

std::vector<SpinConfiguration> sector_basis(int length, double magnetization);
std::vector<SpinConfiguration> sector_basis_by_down(int length, int down_count);

std::uint64_t binomial(int n, int k);

/// Block of `op` on sector_basis(L, M). Throws SymmetryViolationError if any
/// entry couples the sector to the outside above 1e-12.
Eigen::MatrixXd restrict_to_sector(const SparseOperator& op, int length, double magnetization);

/// XXZ Hamiltonian assembled directly on a magnetization sector (up to
/// SizeLimits::sector_max sites), indexed like sector_basis_by_down.
SparseOperator build_xxz_sector_hamiltonian(int length, int down_count, const AnisotropyParam& aniso,
                                            const SizeLimits& limits = {});

/// Exchange Hamiltonian assembled directly on a magnetization sector.
SparseOperator build_exchange_sector_hamiltonian(int length, int down_count,
                                                 const std::vector<Coupling>& couplings,
                                                 const SizeLimits& limits = {});

// Nearest-neighbour couplings of the tree with J = -1 plus the constant 1/4
// per edge is H_T; this returns the couplings only.
std::vector<Coupling> tree_couplings(const TreeGraph& tree, double strength);

// Embeds sector coordinates into the full 2^L space.
Eigen::VectorXd sector_to_full(const Eigen::VectorXd& sector_vector, int length, int down_count);

}  // namespace foel

#endif  // FOEL_HILBERT_HPP
