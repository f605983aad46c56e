#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "foel/errors.hpp"
#include "foel/hilbert.hpp"
#include "foel/lattice.hpp"

using namespace foel;

namespace {

const std::vector<double> kDeltas{1.0, 1.25, 1.5, 2.0, 3.0, 5.0};

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

// Sum_x q^x |x> with |x> the state with one down spin at site x (1-based x).
Eigen::VectorXd one_magnon_ground_state(int length, double q) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(Eigen::Index{1} << length);
  for (int x = 0; x < length; ++x) psi(site_bit(length, x)) = std::pow(q, x + 1);
  return psi;
}

}  // namespace

TEST_CASE("anisotropy parameter") {
  CHECK(AnisotropyParam::from_delta(1.0).q == 1.0);
  CHECK(AnisotropyParam::from_delta(1.25).q == doctest::Approx(0.5).epsilon(1e-15));
  const auto near = AnisotropyParam::from_delta(1.0000000001);
  CHECK(near.q == doctest::Approx(1.0 - 1.414e-5).epsilon(1e-8));
  for (double delta : {1.0, 1.0000000001, 1.25, 1.5, 2.0, 3.0, 5.0, 1e6}) {
    const double q = AnisotropyParam::from_delta(delta).q;
    CHECK(std::abs((q + 1.0 / q) / 2.0 - delta) <= 1e-14 * delta);
  }
  CHECK_THROWS_AS(AnisotropyParam::from_delta(0.99), ParameterError);
  CHECK_THROWS_AS(AnisotropyParam::from_delta(INFINITY), ParameterError);
  CHECK_THROWS_AS(AnisotropyParam::from_delta(NAN), ParameterError);
}

TEST_CASE("spin configuration") {
  const SpinConfiguration c(3, 0b010);
  CHECK(c.to_string() == "+-+");
  CHECK(c.is_down(1));
  CHECK_FALSE(c.is_down(0));
  CHECK(c.down_count() == 1);
  CHECK(c.twice_magnetization() == 1);
}

TEST_CASE("interaction matrix") {
  const auto iso = interaction_matrix(AnisotropyParam::isotropic());
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected.block<2, 2>(1, 1) << 0.5, -0.5, -0.5, 0.5;
  CHECK((iso - expected).norm() == 0.0);

  for (double delta : kDeltas) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    const Eigen::Matrix4d h = interaction_matrix(aniso);
    CHECK((h - h.transpose()).norm() == 0.0);
    CHECK(h.col(0).norm() == 0.0);
    CHECK(h.col(3).norm() == 0.0);
    Eigen::Vector4d bracket(0.0, 1.0 / std::sqrt(aniso.q), -std::sqrt(aniso.q), 0.0);
    CHECK((h * bracket - bracket).norm() < 1e-14);
    const Eigen::Vector4d spectrum = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(h).eigenvalues();
    CHECK((spectrum - Eigen::Vector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(h.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("chain Hamiltonian examples") {
  const auto iso = AnisotropyParam::isotropic();
  const Eigen::VectorXd two = eigenvalues(build_xxz_chain_hamiltonian(2, iso).dense());
  CHECK((two - Eigen::Vector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::VectorXd three = eigenvalues(build_xxz_chain_hamiltonian(3, iso).dense());
  double lowest_nonzero = INFINITY;
  for (double v : three) {
    if (v > 1e-10) lowest_nonzero = std::min(lowest_nonzero, v);
  }
  CHECK(lowest_nonzero == doctest::Approx(0.5).epsilon(1e-13));

  for (double delta : kDeltas) {
    const auto h = build_xxz_chain_hamiltonian(6, AnisotropyParam::from_delta(delta));
    CHECK(h.symmetric);
    CHECK((h.dense() - h.dense().transpose()).norm() == 0.0);
    CHECK(h.dense().col(0).norm() == 0.0);
  }
  CHECK_THROWS_AS(build_xxz_chain_hamiltonian(15, iso), InvalidSizeError);
  CHECK_THROWS_AS(build_xxz_chain_hamiltonian(1, iso), InvalidSizeError);
}

TEST_CASE("Hamiltonians are positive semidefinite") {
  for (double delta : {1.0, 1.5, 3.0}) {
    for (int length = 2; length <= 10; ++length) {
      const auto h = build_xxz_chain_hamiltonian(length, AnisotropyParam::from_delta(delta));
      CHECK(eigenvalues(h.dense()).minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("one-magnon ground state is annihilated") {
  for (double delta : kDeltas) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    for (int length = 2; length <= 6; ++length) {
      const auto h = build_xxz_chain_hamiltonian(length, aniso);
      const Eigen::VectorXd psi = one_magnon_ground_state(length, aniso.q);
      CHECK((h.matrix * psi).norm() < 1e-12);
    }
  }
}

TEST_CASE("magnetization sectors") {
  const auto two = sector_basis(2, 0.0);
  REQUIRE(two.size() == 2);
  CHECK(two[0].to_string() == "+-");
  CHECK(two[1].to_string() == "-+");
  CHECK(sector_basis(4, 1.0).size() == 4);
  CHECK(sector_basis(6, 1.0).size() == 15);
  CHECK(sector_basis(3, 0.5).size() == 3);
  CHECK_THROWS_AS(sector_basis(3, 1.0), SectorError);
  CHECK_THROWS_AS(sector_basis(2, 1.5), SectorError);
  CHECK(down_count_for(5, 1) == 2);

  for (int length = 1; length <= 8; ++length) {
    std::size_t total = 0;
    for (int down = 0; down <= length; ++down) {
      const auto basis = sector_basis_by_down(length, down);
      CHECK(basis.size() == binomial(length, down));
      for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1].mask() < basis[i].mask());
      total += basis.size();
    }
    CHECK(total == (std::size_t{1} << length));
  }
}

TEST_CASE("sector restriction") {
  const auto iso = AnisotropyParam::isotropic();
  const Eigen::MatrixXd two = restrict_to_sector(build_xxz_chain_hamiltonian(2, iso), 2, 0.0);
  Eigen::Matrix2d expected;
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK((two - expected).norm() == 0.0);

  const Eigen::MatrixXd three = restrict_to_sector(build_xxz_chain_hamiltonian(3, iso), 3, 0.5);
  CHECK(three.rows() == 3);
  CHECK(three.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);

  const Eigen::MatrixXd top = restrict_to_sector(build_xxz_chain_hamiltonian(4, iso), 4, 2.0);
  CHECK(top.rows() == 1);
  CHECK(top(0, 0) == 0.0);

  SparseOperator flip;
  flip.matrix.resize(4, 4);
  flip.matrix.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(restrict_to_sector(flip, 2, 1.0), SymmetryViolationError);
}

TEST_CASE("sector assembly agrees with full-space restriction") {
  for (double delta : {1.0, 1.5, 3.0}) {
    const auto aniso = AnisotropyParam::from_delta(delta);
    for (int length = 2; length <= 9; ++length) {
      const auto full = build_xxz_chain_hamiltonian(length, aniso);
      for (int down = 0; down <= length; ++down) {
        const double m = 0.5 * (length - 2 * down);
        const Eigen::MatrixXd direct = build_xxz_sector_hamiltonian(length, down, aniso).dense();
        CHECK((direct - restrict_to_sector(full, length, m)).norm() == 0.0);
      }
    }
  }
  CHECK_NOTHROW(build_xxz_sector_hamiltonian(20, 1, AnisotropyParam::isotropic()));
  CHECK_THROWS_AS(build_xxz_sector_hamiltonian(21, 1, AnisotropyParam::isotropic()), InvalidSizeError);
}

TEST_CASE("graph Hamiltonian") {
  for (int length = 2; length <= 8; ++length) {
    const Eigen::MatrixXd chain = build_xxz_chain_hamiltonian(length, AnisotropyParam::isotropic()).dense();
    const Eigen::MatrixXd tree = build_xxx_graph_hamiltonian(build_chain(length)).dense();
    CHECK((chain - tree).cwiseAbs().maxCoeff() < 1e-15);
  }

  const auto star = parse_tree({{0, 1}, {0, 2}, {0, 3}});
  const Eigen::MatrixXd block = restrict_to_sector(build_xxx_graph_hamiltonian(star), 4, 1.0);
  const Eigen::VectorXd spectrum = eigenvalues(block);
  CHECK((spectrum - Eigen::Vector4d(0, 0.5, 0.5, 2.0)).cwiseAbs().maxCoeff() < 1e-12);

  for (const auto& t : enumerate_trees(7)) {
    const Eigen::MatrixXd h = build_xxx_graph_hamiltonian(t).dense();
    CHECK(eigenvalues(h).minCoeff() >= -1e-10);
  }
}

TEST_CASE("Casimir eigenvalues") {
  const Eigen::VectorXd c = eigenvalues(build_total_spin_casimir(4).dense());
  // spins 0 (x2), 1 (x9), 2 (x5)
  CHECK(std::abs(c(0)) < 1e-12);
  CHECK(std::abs(c(2) - 2.0) < 1e-12);
  CHECK(std::abs(c(10) - 2.0) < 1e-12);
  CHECK(std::abs(c(11) - 6.0) < 1e-12);
}

TEST_CASE("triplet export") {
  const auto h = build_xxz_chain_hamiltonian(2, AnisotropyParam::isotropic());
  CHECK(to_triplet_text(h) == "1 1 0.5\n1 2 -0.5\n2 1 -0.5\n2 2 0.5\n");
}
