#include "foel/hilbert.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "foel/errors.hpp"

namespace foel {

namespace {

struct BondTerm {
  int x;
  int y;
  Eigen::Matrix4d local;
};

// S_x . S_y in the two-site basis (++, +-, -+, --).
Eigen::Matrix4d exchange_matrix() {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(3, 3) = 0.25;
  m(1, 1) = m(2, 2) = -0.25;
  m(1, 2) = m(2, 1) = 0.5;
  return m;
}

void check_full_size(int length, const SizeLimits& limits) {
  if (length < 1 || length > limits.full_space_max) {
    throw InvalidSizeError("full-space size L=" + std::to_string(length) + " outside 1.." +
                           std::to_string(limits.full_space_max));
  }
}

void check_sector_size(int length, const SizeLimits& limits) {
  if (length < 1 || length > limits.sector_max) {
    throw InvalidSizeError("sector size L=" + std::to_string(length) + " outside 1.." +
                           std::to_string(limits.sector_max));
  }
}

std::vector<std::uint32_t> masks_with_down(int length, int down) {
  std::vector<std::uint32_t> masks;
  const std::uint32_t end = 1u << length;
  for (std::uint32_t m = 0; m < end; ++m) {
    if (__builtin_popcount(m) == down) masks.push_back(m);
  }
  return masks;
}

// Applies a sum of two-site terms. `domain` lists column states; `index_of`
// maps a mask to its row index, or -1 if it is outside the target space.
template <typename IndexOf>
SparseOperator assemble(int length, const std::vector<BondTerm>& terms,
                        const std::vector<std::uint32_t>& domain, Eigen::Index rows,
                        IndexOf index_of, double constant = 0.0) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(domain.size() * (terms.size() + 1));
  for (std::size_t col = 0; col < domain.size(); ++col) {
    const std::uint32_t mask = domain[col];
    if (constant != 0.0) triplets.emplace_back(static_cast<int>(col), static_cast<int>(col), constant);
    for (const auto& term : terms) {
      const std::uint32_t bx = site_bit(length, term.x);
      const std::uint32_t by = site_bit(length, term.y);
      const int local_in = 2 * ((mask & bx) ? 1 : 0) + ((mask & by) ? 1 : 0);
      const std::uint32_t rest = mask & ~(bx | by);
      for (int local_out = 0; local_out < 4; ++local_out) {
        const double value = term.local(local_out, local_in);
        if (value == 0.0) continue;
        std::uint32_t out = rest;
        if (local_out & 2) out |= bx;
        if (local_out & 1) out |= by;
        const long row = index_of(out);
        if (row < 0) throw SymmetryViolationError("term leaves the target space");
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
      }
    }
  }
  SparseOperator op;
  op.matrix.resize(rows, static_cast<Eigen::Index>(domain.size()));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.prune(0.0);
  op.symmetric = true;
  return op;
}

SparseOperator assemble_full(int length, const std::vector<BondTerm>& terms, double constant = 0.0) {
  const std::uint32_t dim = 1u << length;
  std::vector<std::uint32_t> domain(dim);
  for (std::uint32_t m = 0; m < dim; ++m) domain[m] = m;
  return assemble(length, terms, domain, dim, [](std::uint32_t m) { return static_cast<long>(m); },
                  constant);
}

SparseOperator assemble_sector(int length, int down, const std::vector<BondTerm>& terms,
                               double constant = 0.0) {
  const auto masks = masks_with_down(length, down);
  std::vector<int> lookup(std::size_t{1} << length, -1);
  for (std::size_t i = 0; i < masks.size(); ++i) lookup[masks[i]] = static_cast<int>(i);
  return assemble(length, terms, masks, static_cast<Eigen::Index>(masks.size()),
                  [&](std::uint32_t m) { return static_cast<long>(lookup[m]); }, constant);
}

std::vector<BondTerm> chain_terms(int length, const AnisotropyParam& aniso) {
  const Eigen::Matrix4d h = interaction_matrix(aniso);
  std::vector<BondTerm> terms;
  for (int x = 0; x + 1 < length; ++x) terms.push_back({x, x + 1, h});
  return terms;
}

std::vector<BondTerm> exchange_terms(int length, const std::vector<Coupling>& couplings) {
  const Eigen::Matrix4d ex = exchange_matrix();
  std::vector<BondTerm> terms;
  for (const auto& c : couplings) {
    if (c.x < 0 || c.y < 0 || c.x >= length || c.y >= length || c.x == c.y) {
      throw ParameterError("coupling references invalid site pair (" + std::to_string(c.x) + "," +
                           std::to_string(c.y) + ")");
    }
    terms.push_back({c.x, c.y, c.strength * ex});
  }
  return terms;
}

std::vector<BondTerm> tree_terms(const TreeGraph& tree) {
  const Eigen::Matrix4d h = interaction_matrix(AnisotropyParam::isotropic());
  std::vector<BondTerm> terms;
  for (const auto& e : tree.edges()) terms.push_back({e.u, e.v, h});
  return terms;
}

}  // namespace

AnisotropyParam AnisotropyParam::from_delta(double delta) {
  if (!std::isfinite(delta) || delta < 1.0) {
    throw ParameterError("anisotropy must be finite and >= 1, got " + std::to_string(delta));
  }
  // 1/(Delta + sqrt(Delta^2-1)) equals Delta - sqrt(Delta^2-1) without cancellation.
  const double root = std::sqrt((delta - 1.0) * (delta + 1.0));
  return {delta, 1.0 / (delta + root)};
}

std::string SpinConfiguration::to_string() const {
  std::string s(length_, '+');
  for (int site = 0; site < length_; ++site) {
    if (is_down(site)) s[site] = '-';
  }
  return s;
}

std::string to_triplet_text(const SparseOperator& op) {
  std::ostringstream out;
  char buffer[96];
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.matrix, r); it; ++it) {
      std::snprintf(buffer, sizeof buffer, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << buffer;
    }
  }
  return out.str();
}

Eigen::Matrix4d interaction_matrix(const AnisotropyParam& aniso) {
  if (!(aniso.delta >= 1.0) || !std::isfinite(aniso.delta)) {
    throw ParameterError("anisotropy must be finite and >= 1");
  }
  constexpr double j = 0.5;
  const double inv_delta = 1.0 / aniso.delta;
  const double field = j * std::sqrt(1.0 - inv_delta * inv_delta);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  // j^2 - S3 S3 is 0 on aligned pairs and 1/2 on anti-aligned ones; the
  // kink field j sqrt(1-Delta^-2)(S3 x 1 - 1 x S3) is +-field on them.
  h(1, 1) = 2 * j * j + field;
  h(2, 2) = 2 * j * j - field;
  h(1, 2) = h(2, 1) = -0.5 * inv_delta;
  return h;
}

SparseOperator build_xxz_chain_hamiltonian(int length, const AnisotropyParam& aniso,
                                           const SizeLimits& limits) {
  if (length < 2) throw InvalidSizeError("chain needs at least 2 sites");
  check_full_size(length, limits);
  return assemble_full(length, chain_terms(length, aniso));
}

SparseOperator build_xxx_graph_hamiltonian(const TreeGraph& tree, const SizeLimits& limits) {
  check_full_size(tree.vertex_count(), limits);
  return assemble_full(tree.vertex_count(), tree_terms(tree));
}

SparseOperator build_exchange_hamiltonian(int length, const std::vector<Coupling>& couplings,
                                          const SizeLimits& limits) {
  check_full_size(length, limits);
  return assemble_full(length, exchange_terms(length, couplings));
}

SparseOperator build_total_spin_casimir(int length, const SizeLimits& limits) {
  check_full_size(length, limits);
  std::vector<Coupling> all_pairs;
  for (int x = 0; x < length; ++x) {
    for (int y = x + 1; y < length; ++y) all_pairs.push_back({x, y, 2.0});
  }
  return assemble_full(length, exchange_terms(length, all_pairs), 0.75 * length);
}

int down_count_for(int length, int twice_magnetization) {
  if (length < 1) throw SectorError("sector needs at least one site");
  if (std::abs(twice_magnetization) > length || (length - twice_magnetization) % 2 != 0) {
    throw SectorError("magnetization " + std::to_string(twice_magnetization) + "/2 invalid for L=" +
                      std::to_string(length));
  }
  return (length - twice_magnetization) / 2;
}

namespace {
int twice_of(double magnetization) {
  const double twice = 2.0 * magnetization;
  const double rounded = std::round(twice);
  if (!std::isfinite(twice) || std::abs(twice - rounded) > 1e-12) {
    throw SectorError("magnetization must be a half-integer");
  }
  return static_cast<int>(rounded);
}
}  // namespace

std::vector<SpinConfiguration> sector_basis_by_down(int length, int down_count) {
  if (length < 1 || length > 31) throw SectorError("sector length out of range");
  if (down_count < 0 || down_count > length) throw SectorError("down count out of range");
  std::vector<SpinConfiguration> basis;
  for (auto m : masks_with_down(length, down_count)) basis.emplace_back(length, m);
  return basis;
}

std::vector<SpinConfiguration> sector_basis(int length, double magnetization) {
  return sector_basis_by_down(length, down_count_for(length, twice_of(magnetization)));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

Eigen::MatrixXd restrict_to_sector(const SparseOperator& op, int length, double magnetization) {
  const int down = down_count_for(length, twice_of(magnetization));
  if (op.dimension() != (Eigen::Index{1} << length) || op.matrix.cols() != op.dimension()) {
    throw InvalidSizeError("operator dimension does not match 2^L");
  }
  const auto masks = masks_with_down(length, down);
  std::vector<int> lookup(std::size_t{1} << length, -1);
  for (std::size_t i = 0; i < masks.size(); ++i) lookup[masks[i]] = static_cast<int>(i);

  const auto n = static_cast<Eigen::Index>(masks.size());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.matrix, r); it; ++it) {
      const int ri = lookup[it.row()];
      const int ci = lookup[it.col()];
      if (ri >= 0 && ci >= 0) {
        block(ri, ci) = it.value();
      } else if ((ri >= 0) != (ci >= 0) && std::abs(it.value()) > 1e-12) {
        throw SymmetryViolationError("operator couples magnetization sector to its complement at (" +
                                     std::to_string(it.row()) + "," + std::to_string(it.col()) + ")");
      }
    }
  }
  return block;
}

SparseOperator build_xxz_sector_hamiltonian(int length, int down_count, const AnisotropyParam& aniso,
                                            const SizeLimits& limits) {
  if (length < 2) throw InvalidSizeError("chain needs at least 2 sites");
  check_sector_size(length, limits);
  if (down_count < 0 || down_count > length) throw SectorError("down count out of range");
  return assemble_sector(length, down_count, chain_terms(length, aniso));
}

SparseOperator build_exchange_sector_hamiltonian(int length, int down_count,
                                                 const std::vector<Coupling>& couplings,
                                                 const SizeLimits& limits) {
  check_sector_size(length, limits);
  if (down_count < 0 || down_count > length) throw SectorError("down count out of range");
  return assemble_sector(length, down_count, exchange_terms(length, couplings));
}

std::vector<Coupling> tree_couplings(const TreeGraph& tree, double strength) {
  std::vector<Coupling> out;
  for (const auto& e : tree.edges()) out.push_back({e.u, e.v, strength});
  return out;
}

Eigen::VectorXd sector_to_full(const Eigen::VectorXd& sector_vector, int length, int down_count) {
  const auto masks = masks_with_down(length, down_count);
  if (static_cast<std::size_t>(sector_vector.size()) != masks.size()) {
    throw InvalidSizeError("sector vector has wrong dimension");
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(Eigen::Index{1} << length);
  for (std::size_t i = 0; i < masks.size(); ++i) full(masks[i]) = sector_vector(static_cast<Eigen::Index>(i));
  return full;
}

}  // namespace foel
