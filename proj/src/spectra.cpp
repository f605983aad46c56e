#include "foel/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "foel/errors.hpp"

namespace foel {

namespace {

void check_square(const MatrixRef& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidSizeError(std::string(what) + " must be square");
}

bool exactly_symmetric(const MatrixRef& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) return false;
    }
  }
  return true;
}

bool reachable_from_zero(const MatrixRef& m, bool transpose, double zero_tolerance) {
  const Eigen::Index n = m.rows();
  std::vector<bool> seen(n, false);
  std::deque<Eigen::Index> queue{0};
  seen[0] = true;
  Eigen::Index count = 1;
  while (!queue.empty()) {
    const Eigen::Index i = queue.front();
    queue.pop_front();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || seen[j]) continue;
      const double value = transpose ? m(j, i) : m(i, j);
      if (std::abs(value) > zero_tolerance) {
        seen[j] = true;
        ++count;
        queue.push_back(j);
      }
    }
  }
  return count == n;
}

double dense_smallest(const MatrixRef& m) {
  return dense_spectrum(m, exactly_symmetric(m))(0);
}

// Inverse iteration on (s*1 - M) with s just above rho(M). The Collatz-Wielandt
// bound max_i (Mv)_i / v_i >= rho(M) for positive v gives the shift; then
// (s*1 - M)^{-1} is entrywise positive and its dominant vector is the
// Perron vector of M.
bool refine_by_inverse_iteration(const Eigen::MatrixXd& m, const PerronOptions& options,
                                 Eigen::VectorXd& v, double& rho, double& residual, long& iterations) {
  const Eigen::Index n = m.rows();
  v = v.cwiseAbs().cwiseMax(std::numeric_limits<double>::min());
  Eigen::VectorXd mv = m * v;
  const double upper = (mv.array() / v.array()).maxCoeff();
  const double scale = std::max(1.0, std::abs(upper));
  const double s = upper + 1e-7 * scale;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(s * Eigen::MatrixXd::Identity(n, n) - m);
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int step = 0; step < 200; ++step, ++iterations) {
    v = lu.solve(v);
    if (!v.allFinite()) return false;
    if (v.sum() < 0.0) v = -v;
    v.normalize();
    mv.noalias() = m * v;
    rho = v.dot(mv);
    residual = (mv - rho * v).norm();
    const bool settled =
        std::isfinite(previous) && std::abs(rho - previous) <= options.relative_tolerance * scale;
    if (settled && residual < options.residual_tolerance) {
      return (v.array() >= -1e-12).all();
    }
    previous = rho;
  }
  return false;
}

}  // namespace

Eigen::VectorXd dense_spectrum(const MatrixRef& matrix, bool symmetric) {
  check_square(matrix, "matrix");
  const Eigen::Index n = matrix.rows();
  if (n == 0) return Eigen::VectorXd();
  if (symmetric) {
    if (n > kSymmetricDenseMax) throw InvalidSizeError("symmetric dense solve limited to 4096");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }
  if (n > kGeneralDenseMax) throw InvalidSizeError("general dense solve limited to 512");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("real Schur iteration failed", 0.0);
  const auto& values = solver.eigenvalues();
  Eigen::VectorXd real(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values(i).imag()) > 1e-8) {
      throw ComplexSpectrumError("eigenvalue with imaginary part " + std::to_string(values(i).imag()));
    }
    real(i) = values(i).real();
  }
  std::sort(real.data(), real.data() + n);
  return real;
}

PerronResult smallest_eigenvalue_perron(const MatrixRef& matrix, const PerronOptions& options) {
  check_square(matrix, "matrix");
  const Eigen::Index n = matrix.rows();
  if (n == 0) throw InvalidSizeError("empty matrix");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && matrix(i, j) > 0.0) {
        throw PreconditionError("positive off-diagonal entry at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
    }
  }

  PerronResult result;
  result.shift = matrix.diagonal().maxCoeff();
  const Eigen::MatrixXd shifted =
      result.shift * Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(matrix);
  // Upper bound on rho; half of it is added inside the iteration so that
  // periodic (bipartite) M still converges. rho(M + s) = rho(M) + s.
  const double bound = shifted.rowwise().sum().maxCoeff();
  if (bound == 0.0) {
    result.smallest_eigenvalue = result.shift;
    result.perron_vector = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
    return result;
  }
  const double damping = 0.5 * bound;

  Eigen::VectorXd v = options.start ? *options.start : Eigen::VectorXd::Ones(n);
  if (v.size() != n || (v.array() <= 0.0).any()) {
    throw PreconditionError("start vector must be positive with matching dimension");
  }
  v.normalize();

  double rho = 0.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();
  double window_best = residual;
  double best = residual;
  constexpr long kWindow = 500;
  bool stagnated = false;

  Eigen::VectorXd mv(n);
  long it = 0;
  for (; it < options.max_iterations; ++it) {
    mv.noalias() = shifted * v;
    rho = v.dot(mv);
    residual = (mv - rho * v).norm();
    best = std::min(best, residual);
    const bool settled =
        std::isfinite(previous) && std::abs(rho - previous) <= options.relative_tolerance * std::abs(rho);
    if (settled && residual < options.residual_tolerance) break;
    previous = rho;

    if ((it + 1) % kWindow == 0) {
      if (best > 0.9 * window_best) {
        stagnated = true;
        break;
      }
      window_best = best;
    }
    v = mv + damping * v;
    v.normalize();
  }

  result.iterations = it;
  result.residual = residual;
  if (!stagnated && it < options.max_iterations) {
    result.spectral_radius_of_shift = rho;
    result.smallest_eigenvalue = result.shift - rho;
    result.perron_vector = v;
    return result;
  }

  if (options.inverse_refinement && n <= kInverseIterationMax &&
      refine_by_inverse_iteration(shifted, options, v, rho, residual, it)) {
    result.iterations = it;
    result.residual = residual;
    result.spectral_radius_of_shift = rho;
    result.smallest_eigenvalue = result.shift - rho;
    result.perron_vector = v;
    result.used_inverse_iteration = true;
    return result;
  }

  const bool symmetric = exactly_symmetric(matrix);
  const Eigen::Index limit = symmetric ? kSymmetricDenseMax : kGeneralDenseMax;
  if (!options.dense_fallback || n > limit) {
    throw ConvergenceError("power iteration did not converge after " + std::to_string(it) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual);
  }
  result.smallest_eigenvalue = dense_spectrum(matrix, symmetric)(0);
  result.spectral_radius_of_shift = result.shift - result.smallest_eigenvalue;
  result.used_dense_fallback = true;
  return result;
}

bool is_irreducible(const MatrixRef& matrix, double zero_tolerance) {
  check_square(matrix, "matrix");
  if (matrix.rows() <= 1) return true;
  return reachable_from_zero(matrix, false, zero_tolerance) &&
         reachable_from_zero(matrix, true, zero_tolerance);
}

LemmaSecondVerdict lemma_second_check(const MatrixRef& a, const MatrixRef& b,
                                      const std::vector<int>& index_map) {
  LemmaSecondVerdict verdict;
  auto fail = [&](std::string message) {
    verdict.preconditions_hold = false;
    verdict.diagnostics.push_back(std::move(message));
  };

  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    fail("matrices must be square");
    return verdict;
  }
  const Eigen::Index k = a.rows();
  const Eigen::Index l = b.rows();
  if (k > l) fail("A is larger than B");
  if (static_cast<Eigen::Index>(index_map.size()) != k) {
    fail("index map length differs from the size of A");
    return verdict;
  }
  std::set<int> used;
  for (int idx : index_map) {
    if (idx < 0 || idx >= l) {
      fail("index map entry " + std::to_string(idx) + " outside B");
      return verdict;
    }
    if (!used.insert(idx).second) fail("index map entry " + std::to_string(idx) + " repeated");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i != j && a(i, j) > 0.0) {
        fail("A has positive off-diagonal entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (b(index_map[i], index_map[j]) > a(i, j)) {
        fail("b > a on mapped entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = 0; j < l; ++j) {
      if (i != j && b(i, j) > 0.0) {
        fail("B has positive off-diagonal entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  auto smallest = [&](const MatrixRef& m, const char* name) -> std::optional<double> {
    try {
      if (verdict.preconditions_hold) return smallest_eigenvalue_perron(m).smallest_eigenvalue;
      return dense_smallest(m);
    } catch (const Error& e) {
      fail(std::string("could not compute inf spec ") + name + ": " + e.what());
      return std::nullopt;
    }
  };
  const auto sa = smallest(a, "A");
  const auto sb = smallest(b, "B");
  if (!sa || !sb) return verdict;

  verdict.smallest_a = *sa;
  verdict.smallest_b = *sb;
  verdict.margin = *sa - *sb;
  verdict.inequality_holds = *sb <= *sa + 1e-12;
  verdict.strict = verdict.margin > 1e-12;

  if (verdict.preconditions_hold && is_irreducible(b)) {
    std::vector<bool> mapped(l, false);
    for (int idx : index_map) mapped[idx] = true;
    for (Eigen::Index i = 0; i < l && !verdict.strictness_condition; ++i) {
      for (Eigen::Index j = 0; j < l; ++j) {
        if (i != j && (!mapped[i] || !mapped[j]) && b(i, j) != 0.0) {
          verdict.strictness_condition = true;
          break;
        }
      }
    }
    for (Eigen::Index i = 0; i < k && !verdict.strictness_condition; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (i != j && b(index_map[i], index_map[j]) < a(i, j)) {
          verdict.strictness_condition = true;
          break;
        }
      }
    }
  }
  return verdict;
}

Eigen::MatrixXd laplacian(const MatrixRef& adjacency) {
  check_square(adjacency, "adjacency");
  Eigen::MatrixXd lap = -Eigen::MatrixXd(adjacency);
  lap.diagonal() = adjacency.rowwise().sum();
  return lap;
}

double fiedler_value(const MatrixRef& adjacency) {
  check_square(adjacency, "adjacency");
  if (adjacency.rows() < 2) throw InvalidSizeError("Fiedler value needs at least two vertices");
  if (!is_irreducible(adjacency)) throw InputError("graph is disconnected");
  return dense_spectrum(laplacian(adjacency), true)(1);
}

Eigen::MatrixXd adjacency_matrix(const TreeGraph& tree) {
  const int n = tree.vertex_count();
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : tree.edges()) adj(e.u, e.v) = adj(e.v, e.u) = 1.0;
  return adj;
}

double fiedler_value(const TreeGraph& tree) { return fiedler_value(adjacency_matrix(tree)); }

}  // namespace foel
