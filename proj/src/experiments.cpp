#include "foel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "foel/errors.hpp"
#include "foel/quantum_group.hpp"
#include "foel/spectra.hpp"
#include "foel/tl_diagrams.hpp"

namespace foel {

namespace {

// Runs task(i) for i in [0, count) on a fixed pool; the first failure by
// index is rethrown after all workers join.
template <typename Task>
void parallel_for(std::size_t count, int threads, Task task) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string where(int length, int n) {
  return "(L=" + std::to_string(length) + ", n=" + std::to_string(n) + "): ";
}

template <typename Fn>
double annotated(int length, int n, Fn fn) {
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where(length, n) + e.what(), e.last_residual());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(where(length, n) + e.what());
  } catch (const ComplexSpectrumError& e) {
    throw ComplexSpectrumError(where(length, n) + e.what());
  } catch (const InvalidSizeError& e) {
    throw InvalidSizeError(where(length, n) + e.what());
  }
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kDiagram:
      return "diagram";
    case Method::kOracle:
      return "oracle";
    case Method::kBoth:
      return "both";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "diagram") return Method::kDiagram;
  if (name == "oracle") return Method::kOracle;
  if (name == "both") return Method::kBoth;
  throw InputError("unknown method '" + name + "'");
}

std::optional<double> EnergyTable::energy(int length, int spin_deviation) const {
  auto it = entries.find({length, spin_deviation});
  if (it == entries.end()) return std::nullopt;
  return it->second.energy;
}

void EnergyTable::merge(const EnergyTable& other) {
  if (other.delta != delta) throw ParameterError("cannot merge tables with different anisotropy");
  for (const auto& [key, entry] : other.entries) entries.emplace(key, entry);
}

std::vector<int> EnergyTable::lengths() const {
  std::vector<int> out;
  for (const auto& [key, entry] : entries) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::optional<double> EnergyTable::lower_hull(int length, int spin_deviation) const {
  std::optional<double> best;
  for (auto it = entries.lower_bound({length, spin_deviation});
       it != entries.end() && it->first.first == length; ++it) {
    best = best ? std::min(*best, it->second.energy) : it->second.energy;
  }
  return best;
}

double diagram_energy(int length, int spin_deviation, double delta) {
  const SectorMatrix a = sector_matrix(length, spin_deviation, delta);
  return smallest_eigenvalue_perron(a.entries).smallest_eigenvalue;
}

EnergyTable energy_table(const EnergyTableRequest& request, double delta) {
  const auto aniso = AnisotropyParam::from_delta(delta);
  if (request.min_length < 2 || request.max_length < request.min_length) {
    throw InvalidSizeError("energy table needs 2 <= L_min <= L_max");
  }
  const bool diagram = request.method != Method::kOracle;
  const bool oracle = request.method != Method::kDiagram;
  if (oracle && request.max_length > kOracleMaxLength) {
    throw InvalidSizeError("oracle pipeline limited to L <= " + std::to_string(kOracleMaxLength));
  }
  if (diagram && request.max_length > kDiagramMaxLength) {
    throw InvalidSizeError("diagram pipeline limited to L <= " + std::to_string(kDiagramMaxLength));
  }
  if (diagram && request.max_length > kDiagramFullGridMaxLength &&
      (!request.max_spin_deviation || *request.max_spin_deviation > 4)) {
    throw InvalidSizeError("diagram pipeline beyond L = 14 requires n <= 4");
  }

  std::vector<std::pair<int, int>> grid;
  for (int length = request.min_length; length <= request.max_length; ++length) {
    int top = length / 2;
    if (request.max_spin_deviation) top = std::min(top, *request.max_spin_deviation);
    for (int n = 0; n <= top; ++n) grid.emplace_back(length, n);
  }

  std::vector<EnergyEntry> results(grid.size());
  parallel_for(grid.size(), request.threads, [&](std::size_t i) {
    const auto [length, n] = grid[i];
    EnergyEntry entry;
    entry.method = request.method;
    entry.dimension = sector_multiplicity(length, n);
    std::optional<double> from_diagram;
    std::optional<double> from_oracle;
    if (diagram) from_diagram = annotated(length, n, [&] { return diagram_energy(length, n, delta); });
    if (oracle) {
      from_oracle = annotated(length, n, [&] { return sector_energy_oracle(length, n, aniso); });
    }
    if (from_diagram && from_oracle && std::abs(*from_diagram - *from_oracle) > kPipelineAgreement) {
      throw ConsistencyError(where(length, n) + "diagram basis gives " + std::to_string(*from_diagram) +
                             " but the oracle gives " + std::to_string(*from_oracle));
    }
    entry.energy = from_oracle ? *from_oracle : *from_diagram;
    results[i] = entry;
  });

  EnergyTable table;
  table.delta = delta;
  for (std::size_t i = 0; i < grid.size(); ++i) table.entries.emplace(grid[i], results[i]);
  return table;
}

EnergyTable energy_table(int max_length, double delta, Method method) {
  EnergyTableRequest request;
  request.max_length = max_length;
  request.method = method;
  return energy_table(request, delta);
}

std::vector<FoelReport> check_foel(const EnergyTable& table, double tolerance) {
  std::vector<FoelReport> reports;
  for (int length : table.lengths()) {
    FoelReport report;
    report.delta = table.delta;
    report.length = length;
    for (int n = 0;; ++n) {
      const auto here = table.energy(length, n);
      const auto next = table.energy(length, n + 1);
      if (!here || !next) break;
      const double margin = *next - *here;
      report.margins.push_back(margin);
      if (!(margin > tolerance)) {
        report.ordered = false;
        report.violations.push_back({length, n + 1, margin, "E(L,n+1) - E(L,n) not above tolerance"});
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

bool foel_verdict(const std::vector<FoelReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const FoelReport& r) { return r.ordered; });
}

MonotonicityReport check_volume_monotonicity(const EnergyTable& table, double tolerance) {
  MonotonicityReport report;
  report.delta = table.delta;
  report.tolerance = tolerance;
  for (const auto& [key, entry] : table.entries) {
    const auto [length, n] = key;
    if (n == 0) {
      if (std::abs(entry.energy) > 1e-10) {
        report.verdict = false;
        report.violations.push_back({length, 0, entry.energy, "E(L,0) differs from zero"});
      }
      continue;
    }
    const auto larger = table.energy(length + 1, n);
    if (!larger) continue;
    const double margin = entry.energy - *larger;
    report.steps.push_back({length, n, margin});
    if (!(margin > tolerance)) {
      report.verdict = false;
      report.violations.push_back({length, n, margin, "E(L+1,n) not strictly below E(L,n)"});
    }
  }
  return report;
}

InequalityReport check_kn_inequality(const EnergyTable& table, double tolerance) {
  InequalityReport report;
  report.delta = table.delta;
  report.tolerance = tolerance;
  for (const auto& [key, entry] : table.entries) {
    const auto [larger_length, n] = key;
    const int length = larger_length - 1;
    const auto same = table.energy(length, n);
    const auto lower = n >= 1 ? table.energy(length, n - 1) : std::nullopt;
    // Rows missing entirely (L below the table) are skipped; within a row,
    // E(L, n) is undefined only for n > L/2.
    if (!table.energy(length, 0)) continue;
    if (!same && !(2 * n > length && lower)) continue;
    double rhs = std::numeric_limits<double>::infinity();
    if (same) rhs = std::min(rhs, *same);
    if (lower) rhs = std::min(rhs, *lower);
    report.steps.push_back({length, n, entry.energy, rhs});
    if (entry.energy < rhs - tolerance) {
      report.verdict = false;
      report.violations.push_back({larger_length, n, entry.energy - rhs,
                                   "E(L+1,n) below min{E(L,n), E(L,n-1)}"});
    }
  }
  return report;
}

double gap_formula(int length, double delta) {
  return 1.0 - std::cos(std::numbers::pi / length) / delta;
}

GapReport check_gap_formula(int max_length, double delta) {
  if (max_length < 2 || max_length > kDiagramMaxLength) {
    throw InvalidSizeError("gap check needs 2 <= L_max <= " + std::to_string(kDiagramMaxLength));
  }
  GapReport report;
  report.delta = delta;
  for (int length = 2; length <= max_length; ++length) {
    const SectorMatrix a = sector_matrix(length, 1, delta);
    const bool symmetric = a.entries.isApprox(a.entries.transpose(), 0.0);
    const double computed = dense_spectrum(a.entries, symmetric)(0);
    const double formula = gap_formula(length, delta);
    report.rows.push_back({length, computed, formula});
    report.max_deviation = std::max(report.max_deviation, std::abs(computed - formula));
  }
  return report;
}

TreeFoelReport tree_foel_level1(const TreeGraph& tree, double tolerance) {
  const int length = tree.vertex_count();
  if (length < 2 || length > kTreeMaxVertices) {
    throw InvalidSizeError("tree check needs 2..." + std::to_string(kTreeMaxVertices) + " vertices");
  }
  TreeFoelReport report;
  report.vertex_count = length;
  report.edges = tree.edges();
  const auto per_spin = lowest_energy_per_spin(length, tree_couplings(tree, -1.0), 0.25 * tree.edge_count());
  for (const auto& [twice_spin, energy] : per_spin) {
    report.energies[(length - twice_spin) / 2] = energy;
  }
  const double level_one = report.energies.at(1);
  report.level_one_margin = std::numeric_limits<double>::infinity();
  for (const auto& [n, energy] : report.energies) {
    if (n >= 2) report.level_one_margin = std::min(report.level_one_margin, energy - level_one);
  }
  report.level_one_unique_minimum = report.level_one_margin > tolerance;
  report.half_fiedler = 0.5 * fiedler_value(tree);
  report.fiedler_deviation = std::abs(level_one - report.half_fiedler);
  report.verdict = report.level_one_unique_minimum && report.fiedler_deviation <= 1e-10;
  return report;
}

TreeGrowthReport tree_gap_monotonicity(const std::vector<TreeGraph>& growth_sequence) {
  TreeGrowthReport report;
  for (std::size_t i = 1; i < growth_sequence.size(); ++i) {
    if (!is_leaf_extension(growth_sequence[i - 1], growth_sequence[i])) {
      throw InputError("tree " + std::to_string(i) + " is not a leaf extension of its predecessor");
    }
  }
  for (const auto& tree : growth_sequence) {
    const int length = tree.vertex_count();
    if (length < 2 || length > kTreeMaxVertices) throw InvalidSizeError("tree size out of range");
    const auto per_spin =
        lowest_energy_per_spin(length, tree_couplings(tree, -1.0), 0.25 * tree.edge_count());
    report.sizes.push_back(length);
    report.level_one_energies.push_back(per_spin.at(length - 2));
  }
  for (std::size_t i = 1; i < report.level_one_energies.size(); ++i) {
    const double margin = report.level_one_energies[i - 1] - report.level_one_energies[i];
    report.margins.push_back(margin);
    report.strict.push_back(margin > 1e-10);
    if (margin < -1e-10) report.nonincreasing = false;
    if (!(margin > 1e-10)) report.strictly_decreasing = false;
  }
  return report;
}

TreeBracketComparison tree_bracket_comparison(const TreeGraph& tree) {
  const int length = tree.vertex_count();
  if (length < 2 || length > 20) throw InvalidSizeError("tree size out of range");
  Eigen::MatrixXd h =
      build_exchange_sector_hamiltonian(length, 1, tree_couplings(tree, -1.0)).dense();
  h.diagonal().array() += 0.25 * tree.edge_count();

  // One-down-spin sector: |x> has mask bit for site x; ascending masks put
  // site L-1 first.
  auto index_of = [&](int site) { return length - 1 - site; };
  const LineGraph lg = line_graph(tree);
  const int m = lg.vertex_count();
  Eigen::MatrixXd brackets = Eigen::MatrixXd::Zero(length, m);
  for (int k = 0; k < m; ++k) {
    const Edge& e = lg.tree_edges[k];
    const int child = tree.parent(e.u) == e.v ? e.u : e.v;
    const int parent = tree.parent(child);
    brackets(index_of(child), k) = 1.0;
    brackets(index_of(parent), k) = -1.0;
  }
  TreeBracketComparison out;
  out.hilbert_matrix = brackets.colPivHouseholderQr().solve(h * brackets);
  out.line_graph_matrix =
      Eigen::MatrixXd::Identity(m, m) - 0.5 * lg.adjacency.cast<double>();
  out.max_entry_difference = (out.hilbert_matrix - out.line_graph_matrix).cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j && out.hilbert_matrix(i, j) > 1e-12) ++out.positive_off_diagonal_count;
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (out.hilbert_matrix + out.hilbert_matrix.transpose());
  out.spectrum_difference =
      (dense_spectrum(sym, true) - dense_spectrum(out.line_graph_matrix, true)).cwiseAbs().maxCoeff();
  return out;
}

int LiebMattisModel::twice_reference_spin() const {
  int a = 0;
  for (int x = 0; x < sites; ++x) a += in_a.at(x) ? 1 : 0;
  return std::abs(a - (sites - a));
}

LiebMattisModel LiebMattisModel::antiferromagnetic_chain(int sites) {
  LiebMattisModel m;
  m.sites = sites;
  for (int x = 0; x + 1 < sites; ++x) m.couplings.push_back({x, x + 1, 1.0});
  for (int x = 0; x < sites; ++x) m.in_a.push_back(x % 2 == 0);
  return m;
}

LiebMattisModel LiebMattisModel::ferromagnetic_chain(int sites) {
  LiebMattisModel m;
  m.sites = sites;
  for (int x = 0; x + 1 < sites; ++x) m.couplings.push_back({x, x + 1, -1.0});
  m.in_a.assign(sites, true);
  return m;
}

LiebMattisModel LiebMattisModel::cross_coupled(int a_sites, int b_sites) {
  LiebMattisModel m;
  m.sites = a_sites + b_sites;
  for (int x = 0; x < m.sites; ++x) m.in_a.push_back(x < a_sites);
  for (int x = 0; x < a_sites; ++x) {
    for (int y = a_sites; y < m.sites; ++y) m.couplings.push_back({x, y, 1.0});
  }
  return m;
}

void validate(const LiebMattisModel& model) {
  if (model.sites < 2) throw ModelError("model needs at least two sites");
  if ((std::size_t{1} << model.sites) > 4096) throw ModelError("model exceeds 4096 dimensions");
  if (static_cast<int>(model.in_a.size()) != model.sites) {
    throw ModelError("bipartition does not cover every site");
  }
  Eigen::MatrixXd graph = Eigen::MatrixXd::Zero(model.sites, model.sites);
  for (const auto& c : model.couplings) {
    if (c.x < 0 || c.y < 0 || c.x >= model.sites || c.y >= model.sites || c.x == c.y) {
      throw ModelError("coupling references an invalid site pair");
    }
    const bool across = model.in_a[c.x] != model.in_a[c.y];
    if (across && c.strength < 0.0) {
      throw ModelError("negative coupling between sublattices at (" + std::to_string(c.x) + "," +
                       std::to_string(c.y) + ")");
    }
    if (!across && c.strength > 0.0) {
      throw ModelError("positive coupling within a sublattice at (" + std::to_string(c.x) + "," +
                       std::to_string(c.y) + ")");
    }
    if (c.strength != 0.0) graph(c.x, c.y) = graph(c.y, c.x) = 1.0;
  }
  if (!is_irreducible(graph)) throw ModelError("coupling graph is reducible");
}

LiebMattisReport lieb_mattis_scan(const LiebMattisModel& model, double tolerance) {
  validate(model);
  LiebMattisReport report;
  report.twice_reference_spin = model.twice_reference_spin();
  report.lowest_energy = lowest_energy_per_spin(model.sites, model.couplings);
  const int reference = report.twice_reference_spin;
  const double at_reference = report.lowest_energy.at(reference);
  for (const auto& [twice_spin, energy] : report.lowest_energy) {
    if (twice_spin < reference && !(energy - at_reference > tolerance)) {
      report.minimum_at_reference = false;
      report.violations.push_back("E(" + std::to_string(twice_spin) + "/2) not above E(reference)");
    }
    if (twice_spin >= reference) {
      auto next = report.lowest_energy.find(twice_spin + 2);
      if (next != report.lowest_energy.end() && !(next->second - energy > tolerance)) {
        report.increasing_above = false;
        report.violations.push_back("E(" + std::to_string(twice_spin + 2) + "/2) not above E(" +
                                    std::to_string(twice_spin) + "/2)");
      }
    }
  }
  report.verdict = report.increasing_above && report.minimum_at_reference;
  return report;
}

std::map<int, int> ground_spin_per_sector(const LiebMattisModel& model) {
  validate(model);
  const int length = model.sites;
  std::vector<Coupling> all_pairs;
  for (int x = 0; x < length; ++x) {
    for (int y = x + 1; y < length; ++y) all_pairs.push_back({x, y, 2.0});
  }
  std::map<int, int> out;
  for (int down = 0; 2 * down <= length; ++down) {
    const Eigen::MatrixXd h = build_exchange_sector_hamiltonian(length, down, model.couplings).dense();
    Eigen::MatrixXd casimir = build_exchange_sector_hamiltonian(length, down, all_pairs).dense();
    casimir.diagonal().array() += 0.75 * length;
    const auto levels = spin_resolved_levels(h, casimir);
    const auto lowest = std::min_element(levels.begin(), levels.end(), [](const auto& a, const auto& b) {
      return a.energy < b.energy;
    });
    out[length - 2 * down] = lowest->twice_spin;
  }
  return out;
}

}  // namespace foel
