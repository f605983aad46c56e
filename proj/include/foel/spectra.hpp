#ifndef FOEL_SPECTRA_HPP
#define FOEL_SPECTRA_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "foel/lattice.hpp"

namespace foel {

using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

inline constexpr Eigen::Index kSymmetricDenseMax = 4096;
inline constexpr Eigen::Index kGeneralDenseMax = 512;
inline constexpr Eigen::Index kInverseIterationMax = 6000;

/// Ascending eigenvalues. The general path rejects imaginary parts above
/// 1e-8 with ComplexSpectrumError.
Eigen::VectorXd dense_spectrum(const MatrixRef& matrix, bool symmetric);

struct PerronOptions {
  double relative_tolerance = 1e-13;
  double residual_tolerance = 1e-10;
  long max_iterations = 200000;
  // Defaults to the all-ones vector; must be entrywise positive.
  std::optional<Eigen::VectorXd> start;
  // On stagnation: refine by shifted inverse iteration, then fall back to
  // dense_spectrum when the size permits.
  bool inverse_refinement = true;
  bool dense_fallback = true;
};

/// Smallest eigenvalue via the Perron root of C*1 - A.
struct PerronResult {
  double smallest_eigenvalue = 0.0;
  double spectral_radius_of_shift = 0.0;  // rho(C*1 - A)
  double shift = 0.0;                     // C = max diagonal entry
  long iterations = 0;
  double residual = 0.0;
  bool used_inverse_iteration = false;  // power phase stalled, refined by shifted inverse iteration
  bool used_dense_fallback = false;
  Eigen::VectorXd perron_vector;  // empty after a dense fallback
};

/// Power iteration on M = C*1 - A for A with non-positive off-diagonals.
/// Throws PreconditionError on a positive off-diagonal entry and
/// ConvergenceError (carrying the last residual) if neither the iteration
/// nor the dense fallback succeeds.
PerronResult smallest_eigenvalue_perron(const MatrixRef& matrix, const PerronOptions& options = {});

struct LemmaSecondVerdict {
  bool preconditions_hold = true;
  std::vector<std::string> diagnostics;
  double smallest_a = 0.0;
  double smallest_b = 0.0;
  double margin = 0.0;  // smallest_a - smallest_b
  bool inequality_holds = false;  // smallest_b <= smallest_a + 1e-12
  bool strict = false;            // margin > 1e-12
  // B irreducible and coupling some mapped index to an unmapped one.
  bool strictness_condition = false;
};

/// Compares inf spec B with inf spec A where A is indexed into B through
/// `index_map` (A's index k corresponds to B's index index_map[k]).
/// Precondition failures are reported as diagnostics, not thrown.
LemmaSecondVerdict lemma_second_check(const MatrixRef& a, const MatrixRef& b,
                                      const std::vector<int>& index_map);

// Whether the directed graph of nonzero off-diagonal entries is strongly connected.
bool is_irreducible(const MatrixRef& matrix, double zero_tolerance = 0.0);

Eigen::MatrixXd laplacian(const MatrixRef& adjacency);

// Second-smallest Laplacian eigenvalue. Throws InputError if disconnected.
double fiedler_value(const MatrixRef& adjacency);
double fiedler_value(const TreeGraph& tree);

// Adjacency matrix of a tree.
Eigen::MatrixXd adjacency_matrix(const TreeGraph& tree);

}  // namespace foel

#endif  // FOEL_SPECTRA_HPP
