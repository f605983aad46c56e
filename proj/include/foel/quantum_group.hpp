#ifndef FOEL_QUANTUM_GROUP_HPP
#define FOEL_QUANTUM_GROUP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "foel/hilbert.hpp"

namespace foel {

// Same as AnisotropyParam::from_delta; round trip (q + 1/q)/2 == delta.
AnisotropyParam q_from_delta(double delta);

// S+_q = sum_x q^{2 sum_{y<x} S3_y} S+_x on the full space. This orientation
// commutes with the chain Hamiltonian (kink field +f on |+-> ).
SparseOperator build_raising(int length, const AnisotropyParam& aniso, const SizeLimits& limits = {});
// S-_q = sum_x q^{-2 sum_{y>x} S3_y} S-_x on the full space.
SparseOperator build_lowering(int length, const AnisotropyParam& aniso, const SizeLimits& limits = {});

// S+_q as a map from the sector with `down_count` down spins to the sector
// with one fewer, in sector_basis_by_down coordinates.
Eigen::MatrixXd raising_sector_block(int length, int down_count, const AnisotropyParam& aniso);

// binomial(L, n) - binomial(L, n-1). Throws SectorError for n outside 0..L/2.
std::int64_t sector_multiplicity(int length, int spin_deviation);

/// Orthonormal basis of ker(S+_q) in the M = L/2 - n sector.
struct HighestWeightBasis {
  int length = 0;
  int spin_deviation = 0;
  // Columns are sector coordinates (sector_basis_by_down(L, n) order).
  Eigen::MatrixXd sector_vectors;

  Eigen::Index count() const { return sector_vectors.cols(); }
  Eigen::MatrixXd full_space() const;
};

inline constexpr double kKernelThreshold = 1e-9;

/// Kernel by singular-value thresholding at 1e-9. Throws ConsistencyError
/// if the kernel dimension differs from sector_multiplicity.
HighestWeightBasis highest_weight_basis(int length, int spin_deviation, const AnisotropyParam& aniso,
                                        const SizeLimits& limits = {});

// Symmetric compression K^T H K of the chain Hamiltonian onto the kernel.
Eigen::MatrixXd compressed_hamiltonian(const HighestWeightBasis& basis, const AnisotropyParam& aniso);

// Ascending eigenvalues of the compression (the spectrum of H on spin L/2-n).
Eigen::VectorXd sector_spectrum_oracle(int length, int spin_deviation, const AnisotropyParam& aniso,
                                       const SizeLimits& limits = {});

// Smallest of the above; the reference value of E(L, n).
double sector_energy_oracle(int length, int spin_deviation, const AnisotropyParam& aniso,
                            const SizeLimits& limits = {});

/// An energy level with its total spin (stored doubled).
struct SpinLevel {
  double energy = 0.0;
  int twice_spin = 0;
};

/// Labels the eigenvalues of a symmetric block by total spin using the
/// classical Casimir restricted to each (near-)degenerate eigenspace.
/// Both matrices must act on the same SU(2)-invariant space.
std::vector<SpinLevel> spin_resolved_levels(const Eigen::MatrixXd& hamiltonian,
                                            const Eigen::MatrixXd& casimir,
                                            double degeneracy_tolerance = 1e-8);

// Lowest energy for each total spin (key: twice the spin), computed from
// the smallest-|M| sector of an SU(2)-invariant exchange Hamiltonian plus a
// constant shift.
std::map<int, double> lowest_energy_per_spin(int length, const std::vector<Coupling>& couplings,
                                             double constant_shift = 0.0,
                                             const SizeLimits& limits = {});

}  // namespace foel

#endif  // FOEL_QUANTUM_GROUP_HPP
