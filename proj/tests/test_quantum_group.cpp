#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "foel/errors.hpp"
#include "foel/quantum_group.hpp"

using namespace foel;

namespace {

const std::vector<double> kDeltas{1.0, 1.25, 1.5, 2.0, 3.0, 5.0};

double commutator_norm(const SparseOperator& a, const SparseOperator& b) {
  const Eigen::MatrixXd ad = a.dense();
  const Eigen::MatrixXd bd = b.dense();
  return (ad * bd - bd * ad).norm();
}

Eigen::MatrixXd classical(int length, bool raising) {
  const int dim = 1 << length;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int mask = 0; mask < dim; ++mask) {
    for (int x = 0; x < length; ++x) {
      const int bit = static_cast<int>(site_bit(length, x));
      if (raising && (mask & bit)) m(mask ^ bit, mask) += 1.0;
      if (!raising && !(mask & bit)) m(mask | bit, mask) += 1.0;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("q from delta") {
  CHECK(q_from_delta(1.0).q == 1.0);
  CHECK(q_from_delta(1.25).q == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(q_from_delta(0.5), ParameterError);
}

TEST_CASE("generators in the classical limit") {
  const auto iso = AnisotropyParam::isotropic();
  for (int length = 1; length <= 5; ++length) {
    CHECK((build_raising(length, iso).dense() - classical(length, true)).norm() == 0.0);
    CHECK((build_lowering(length, iso).dense() - classical(length, false)).norm() == 0.0);
  }
  const auto aniso = AnisotropyParam::from_delta(2.0);
  CHECK((build_raising(1, aniso).dense() - classical(1, true)).norm() == 0.0);
}

TEST_CASE("generators shift the magnetization by one") {
  const auto aniso = AnisotropyParam::from_delta(1.5);
  const auto up = build_raising(5, aniso);
  const auto down = build_lowering(5, aniso);
  for (Eigen::Index r = 0; r < up.matrix.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(up.matrix, r); it; ++it) {
      CHECK(__builtin_popcount(it.col()) == __builtin_popcount(it.row()) + 1);
    }
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(down.matrix, r); it; ++it) {
      CHECK(__builtin_popcount(it.col()) + 1 == __builtin_popcount(it.row()));
    }
  }
}

TEST_CASE("generators commute with the chain Hamiltonian") {
  for (double delta : kDeltas) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    for (int length = 2; length <= 6; ++length) {
      const auto h = build_xxz_chain_hamiltonian(length, aniso);
      CHECK(commutator_norm(h, build_raising(length, aniso)) < 1e-10);
      CHECK(commutator_norm(h, build_lowering(length, aniso)) < 1e-10);
    }
  }
}

TEST_CASE("lowering the all-up state gives the one-magnon ground state") {
  for (double delta : kDeltas) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    const int length = 5;
    Eigen::VectorXd all_up = Eigen::VectorXd::Zero(1 << length);
    all_up(0) = 1.0;
    const Eigen::VectorXd lowered = build_lowering(length, aniso).matrix * all_up;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(1 << length);
    for (int x = 0; x < length; ++x) psi(site_bit(length, x)) = std::pow(aniso.q, x + 1);
    const double overlap = std::abs(lowered.dot(psi)) / (lowered.norm() * psi.norm());
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sector multiplicity") {
  CHECK(sector_multiplicity(7, 0) == 1);
  CHECK(sector_multiplicity(4, 1) == 3);
  CHECK(sector_multiplicity(6, 2) == 9);
  CHECK(sector_multiplicity(6, 3) == 5);
  CHECK_THROWS_AS(sector_multiplicity(4, 3), SectorError);
  CHECK_THROWS_AS(sector_multiplicity(4, -1), SectorError);
  for (int length = 1; length <= 20; ++length) {
    std::int64_t total = 0;
    for (int n = 0; 2 * n <= length; ++n) total += sector_multiplicity(length, n) * (length - 2 * n + 1);
    CHECK(total == (std::int64_t{1} << length));
  }
}

TEST_CASE("highest-weight bases") {
  for (double delta : {1.0, 1.5, 3.0}) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    const auto top = highest_weight_basis(5, 0, aniso);
    REQUIRE(top.count() == 1);
    CHECK(std::abs(top.full_space()(0, 0)) == doctest::Approx(1.0));
    for (int length = 2; length <= 10; ++length) {
      const auto raise = length <= 8 ? build_raising(length, aniso) : SparseOperator{};
      for (int n = 0; 2 * n <= length; ++n) {
        const auto basis = highest_weight_basis(length, n, aniso);
        REQUIRE(basis.count() == sector_multiplicity(length, n));
        const Eigen::MatrixXd gram = basis.sector_vectors.transpose() * basis.sector_vectors;
        CHECK((gram - Eigen::MatrixXd::Identity(basis.count(), basis.count())).cwiseAbs().maxCoeff() < 1e-12);
        if (n > 0) {
          const Eigen::MatrixXd image = raising_sector_block(length, n, aniso) * basis.sector_vectors;
          CHECK(image.colwise().norm().maxCoeff() < 1e-10);
        }
        if (length <= 8) {
          CHECK((raise.matrix * basis.full_space()).norm() < 1e-10);
        }
      }
    }
  }
  CHECK(highest_weight_basis(4, 1, AnisotropyParam::isotropic()).count() == 3);
  CHECK(highest_weight_basis(4, 2, AnisotropyParam::isotropic()).count() == 2);
}

TEST_CASE("oracle energies") {
  const auto iso = AnisotropyParam::isotropic();
  for (int length = 2; length <= 8; ++length) CHECK(std::abs(sector_energy_oracle(length, 0, iso)) < 1e-14);
  CHECK(sector_energy_oracle(4, 1, iso) == doctest::Approx(1.0 - std::cos(M_PI / 4)).epsilon(1e-12));
  CHECK(sector_energy_oracle(4, 2, iso) == doctest::Approx((3.0 - std::sqrt(3.0)) / 2.0).epsilon(1e-12));

  // Reference rows from Kronecker-product diagonalization (sector spectra differences).
  struct Row {
    double delta;
    int length;
    std::vector<double> energies;
  };
  const std::vector<Row> rows{
      {1.0, 7, {0, 0.0990311320975809, 0.210225827550411, 0.338123969273116}},
      {1.0, 8, {0, 0.0761204674887133, 0.160647019643698, 0.256301132315042, 0.367485608841896}},
      {1.5, 6, {0, 0.422649730810374, 0.647941980075668, 0.762229616013981}},
      {1.5, 8, {0, 0.384080311659142, 0.598488464272078, 0.701198704749224, 0.74905132961594}},
      {3.0, 5, {0, 0.730327668541684, 0.919058196884089}},
      {3.0, 8, {0, 0.692040155829571, 0.896881460407686, 0.936275473114076, 0.942818572536037}},
  };
  for (const auto& row : rows) {
    const auto aniso = AnisotropyParam::from_delta(row.delta);
    for (int n = 0; n < static_cast<int>(row.energies.size()); ++n) {
      CHECK(std::abs(sector_energy_oracle(row.length, n, aniso) - row.energies[n]) < 1e-12);
    }
  }
}

TEST_CASE("oracle is independent of the basis orientation") {
  std::mt19937 rng(7);
  for (double delta : {1.0, 1.5, 3.0}) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    for (int length = 4; length <= 9; ++length) {
      for (int n = 1; 2 * n <= length; ++n) {
        auto basis = highest_weight_basis(length, n, aniso);
        const double reference = sector_energy_oracle(length, n, aniso);
        // Random orthogonal mixing of the kernel basis.
        Eigen::MatrixXd g(basis.count(), basis.count());
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
        const Eigen::MatrixXd rotation = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
        basis.sector_vectors = basis.sector_vectors * rotation;
        const Eigen::MatrixXd compressed = compressed_hamiltonian(basis, aniso);
        const double mixed =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(compressed, Eigen::EigenvaluesOnly).eigenvalues()(0);
        CHECK(std::abs(mixed - reference) < 1e-10);
      }
    }
  }
}

TEST_CASE("isotropic oracle agrees with Casimir labelling") {
  const auto iso = AnisotropyParam::isotropic();
  for (int length = 2; length <= 8; ++length) {
    const Eigen::MatrixXd h = build_xxz_chain_hamiltonian(length, iso).dense();
    const Eigen::MatrixXd c = build_total_spin_casimir(length).dense();
    std::map<int, double> lowest;
    for (const auto& level : spin_resolved_levels(h, c)) {
      auto [it, inserted] = lowest.emplace(level.twice_spin, level.energy);
      if (!inserted) it->second = std::min(it->second, level.energy);
    }
    for (int n = 0; 2 * n <= length; ++n) {
      CHECK(std::abs(lowest.at(length - 2 * n) - sector_energy_oracle(length, n, iso)) < 1e-10);
    }
  }
}

TEST_CASE("lowest energy per spin") {
  std::vector<Coupling> af;
  for (int x = 0; x + 1 < 4; ++x) af.push_back({x, x + 1, 1.0});
  const auto levels = lowest_energy_per_spin(4, af);
  REQUIRE(levels.size() == 3);
  CHECK(levels.at(0) == doctest::Approx(-1.61602540378444).epsilon(1e-12));
  CHECK(levels.at(2) == doctest::Approx(-0.957106781186547).epsilon(1e-12));
  CHECK(levels.at(4) == doctest::Approx(0.75).epsilon(1e-12));
}
