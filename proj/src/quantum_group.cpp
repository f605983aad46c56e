#include "foel/quantum_group.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "foel/errors.hpp"

namespace foel {

namespace {

// (#up - #down) over sites [begin, end), i.e. 2 * sum S3.
int twice_partial_magnetization(std::uint32_t mask, int length, int begin, int end) {
  int total = 0;
  for (int y = begin; y < end; ++y) total += (mask & site_bit(length, y)) ? -1 : 1;
  return total;
}

void check_length(int length, const SizeLimits& limits) {
  if (length < 1 || length > limits.full_space_max) {
    throw InvalidSizeError("full-space size L=" + std::to_string(length) + " out of range");
  }
}

std::vector<std::uint32_t> masks_of(int length, int down) {
  std::vector<std::uint32_t> masks;
  for (const auto& c : sector_basis_by_down(length, down)) masks.push_back(c.mask());
  return masks;
}

}  // namespace

AnisotropyParam q_from_delta(double delta) { return AnisotropyParam::from_delta(delta); }

SparseOperator build_raising(int length, const AnisotropyParam& aniso, const SizeLimits& limits) {
  check_length(length, limits);
  const std::uint32_t dim = 1u << length;
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::uint32_t mask = 0; mask < dim; ++mask) {
    for (int x = 0; x < length; ++x) {
      const std::uint32_t bit = site_bit(length, x);
      if (!(mask & bit)) continue;
      const double factor = std::pow(aniso.q, twice_partial_magnetization(mask, length, 0, x));
      triplets.emplace_back(static_cast<int>(mask ^ bit), static_cast<int>(mask), factor);
    }
  }
  SparseOperator op;
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.symmetric = false;
  return op;
}

SparseOperator build_lowering(int length, const AnisotropyParam& aniso, const SizeLimits& limits) {
  check_length(length, limits);
  const std::uint32_t dim = 1u << length;
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::uint32_t mask = 0; mask < dim; ++mask) {
    for (int x = 0; x < length; ++x) {
      const std::uint32_t bit = site_bit(length, x);
      if (mask & bit) continue;
      const double factor = std::pow(aniso.q, -twice_partial_magnetization(mask, length, x + 1, length));
      triplets.emplace_back(static_cast<int>(mask | bit), static_cast<int>(mask), factor);
    }
  }
  SparseOperator op;
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.symmetric = false;
  return op;
}

Eigen::MatrixXd raising_sector_block(int length, int down_count, const AnisotropyParam& aniso) {
  if (down_count < 0 || down_count > length) throw SectorError("down count out of range");
  const auto cols = masks_of(length, down_count);
  if (down_count == 0) return Eigen::MatrixXd::Zero(0, static_cast<Eigen::Index>(cols.size()));
  const auto rows = masks_of(length, down_count - 1);
  std::vector<int> lookup(std::size_t{1} << length, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) lookup[rows[i]] = static_cast<int>(i);

  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const std::uint32_t mask = cols[c];
    for (int x = 0; x < length; ++x) {
      const std::uint32_t bit = site_bit(length, x);
      if (!(mask & bit)) continue;
      block(lookup[mask ^ bit], static_cast<Eigen::Index>(c)) +=
          std::pow(aniso.q, twice_partial_magnetization(mask, length, 0, x));
    }
  }
  return block;
}

std::int64_t sector_multiplicity(int length, int spin_deviation) {
  if (length < 1 || spin_deviation < 0 || 2 * spin_deviation > length) {
    throw SectorError("spin deviation " + std::to_string(spin_deviation) + " out of range for L=" +
                      std::to_string(length));
  }
  return static_cast<std::int64_t>(binomial(length, spin_deviation)) -
         static_cast<std::int64_t>(binomial(length, spin_deviation - 1));
}

Eigen::MatrixXd HighestWeightBasis::full_space() const {
  Eigen::MatrixXd out(Eigen::Index{1} << length, count());
  for (Eigen::Index k = 0; k < count(); ++k) {
    out.col(k) = sector_to_full(sector_vectors.col(k), length, spin_deviation);
  }
  return out;
}

HighestWeightBasis highest_weight_basis(int length, int spin_deviation, const AnisotropyParam& aniso,
                                        const SizeLimits& limits) {
  check_length(length, limits);
  const std::int64_t expected = sector_multiplicity(length, spin_deviation);

  HighestWeightBasis basis;
  basis.length = length;
  basis.spin_deviation = spin_deviation;
  if (spin_deviation == 0) {
    basis.sector_vectors = Eigen::MatrixXd::Identity(1, 1);
    return basis;
  }
  const Eigen::MatrixXd block = raising_sector_block(length, spin_deviation, aniso);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > kKernelThreshold) ++rank;
  const Eigen::Index kernel = block.cols() - rank;
  if (kernel != expected) {
    throw ConsistencyError("raising-operator kernel has dimension " + std::to_string(kernel) +
                           ", expected " + std::to_string(expected) + " for L=" +
                           std::to_string(length) + ", n=" + std::to_string(spin_deviation));
  }
  basis.sector_vectors = svd.matrixV().rightCols(kernel);
  return basis;
}

Eigen::MatrixXd compressed_hamiltonian(const HighestWeightBasis& basis, const AnisotropyParam& aniso) {
  const SparseOperator h =
      build_xxz_sector_hamiltonian(basis.length, basis.spin_deviation, aniso);
  Eigen::MatrixXd hk = h.matrix * basis.sector_vectors;
  Eigen::MatrixXd compressed = basis.sector_vectors.transpose() * hk;
  return 0.5 * (compressed + compressed.transpose());
}

Eigen::VectorXd sector_spectrum_oracle(int length, int spin_deviation, const AnisotropyParam& aniso,
                                       const SizeLimits& limits) {
  const auto basis = highest_weight_basis(length, spin_deviation, aniso, limits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(compressed_hamiltonian(basis, aniso),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double sector_energy_oracle(int length, int spin_deviation, const AnisotropyParam& aniso,
                            const SizeLimits& limits) {
  return sector_spectrum_oracle(length, spin_deviation, aniso, limits).minCoeff();
}

std::vector<SpinLevel> spin_resolved_levels(const Eigen::MatrixXd& hamiltonian,
                                            const Eigen::MatrixXd& casimir,
                                            double degeneracy_tolerance) {
  if (hamiltonian.rows() != casimir.rows() || hamiltonian.cols() != casimir.cols()) {
    throw InvalidSizeError("Hamiltonian and Casimir blocks differ in size");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  const auto& energies = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  std::vector<SpinLevel> levels;
  Eigen::Index start = 0;
  const Eigen::Index n = energies.size();
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && energies(end) - energies(end - 1) <= degeneracy_tolerance) ++end;
    const Eigen::MatrixXd space = vectors.middleCols(start, end - start);
    Eigen::MatrixXd c = space.transpose() * casimir * space;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cs(0.5 * (c + c.transpose()));
    const Eigen::MatrixXd rotated = space * cs.eigenvectors();
    for (Eigen::Index k = 0; k < cs.eigenvalues().size(); ++k) {
      const double value = std::max(0.0, cs.eigenvalues()(k));
      const double twice_spin = std::sqrt(1.0 + 4.0 * value) - 1.0;
      const double rounded = std::round(twice_spin);
      if (std::abs(twice_spin - rounded) > 1e-6) {
        throw ConsistencyError("Casimir eigenvalue " + std::to_string(value) +
                               " is not of the form S(S+1)");
      }
      const Eigen::VectorXd w = rotated.col(k);
      levels.push_back({w.dot(hamiltonian * w), static_cast<int>(rounded)});
    }
    start = end;
  }
  return levels;
}

std::map<int, double> lowest_energy_per_spin(int length, const std::vector<Coupling>& couplings,
                                             double constant_shift, const SizeLimits& limits) {
  if (length < 1 || length > limits.full_space_max) {
    throw InvalidSizeError("spin labelling size L=" + std::to_string(length) + " out of range");
  }
  const int down = length / 2;
  Eigen::MatrixXd h = build_exchange_sector_hamiltonian(length, down, couplings, limits).dense();
  h.diagonal().array() += constant_shift;

  std::vector<Coupling> all_pairs;
  for (int x = 0; x < length; ++x) {
    for (int y = x + 1; y < length; ++y) all_pairs.push_back({x, y, 2.0});
  }
  Eigen::MatrixXd casimir = build_exchange_sector_hamiltonian(length, down, all_pairs, limits).dense();
  casimir.diagonal().array() += 0.75 * length;

  std::map<int, double> lowest;
  for (const auto& level : spin_resolved_levels(h, casimir)) {
    auto [it, inserted] = lowest.emplace(level.twice_spin, level.energy);
    if (!inserted) it->second = std::min(it->second, level.energy);
  }
  return lowest;
}

}  // namespace foel
