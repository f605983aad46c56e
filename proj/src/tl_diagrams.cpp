#include "foel/tl_diagrams.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "foel/errors.hpp"

namespace foel {

namespace {

void check_arc_count(int length, int arc_count) {
  if (length < 0 || arc_count < 0 || 2 * arc_count > length) {
    throw SectorError("arc count " + std::to_string(arc_count) + " out of range for L=" +
                      std::to_string(length));
  }
}

// Perfect noncrossing matchings of [begin, end); `done` is invoked for each.
void fill_matchings(std::vector<int>& partner, int begin, int end, const std::function<void()>& done) {
  if (begin == end) {
    done();
    return;
  }
  for (int j = begin + 1; j < end; j += 2) {
    partner[begin] = j;
    partner[j] = begin;
    fill_matchings(partner, begin + 1, j, [&] { fill_matchings(partner, j + 1, end, done); });
  }
  partner[begin] = ArcDiagram::kUnpaired;
}

// Top level: sites outside every arc may stay unpaired.
void fill_top(std::vector<int>& partner, int pos, int arcs_left,
              const std::function<void()>& emit) {
  const int length = static_cast<int>(partner.size());
  if (pos == length) {
    if (arcs_left == 0) emit();
    return;
  }
  if (length - pos - 1 >= 2 * arcs_left) {
    partner[pos] = ArcDiagram::kUnpaired;
    fill_top(partner, pos + 1, arcs_left, emit);
  }
  for (int j = pos + 1; j < length; j += 2) {
    const int used = (j - pos + 1) / 2;
    if (used > arcs_left) break;
    partner[pos] = j;
    partner[j] = pos;
    fill_matchings(partner, pos + 1, j, [&] { fill_top(partner, j + 1, arcs_left - used, emit); });
    partner[j] = ArcDiagram::kUnpaired;
  }
  partner[pos] = ArcDiagram::kUnpaired;
}

std::vector<int> sector_lookup(int length, int down) {
  std::vector<int> lookup(std::size_t{1} << length, -1);
  int index = 0;
  for (const auto& c : sector_basis_by_down(length, down)) lookup[c.mask()] = index++;
  return lookup;
}

// Visits (mask, coefficient) of every product-state component of phi_alpha.
template <typename Visit>
void for_each_component(const ArcDiagram& diagram, const AnisotropyParam& aniso, Visit visit) {
  const int length = diagram.length();
  const auto arcs = diagram.arcs();
  const double left_down = -std::sqrt(aniso.q);       // -q^{1/2}|-+>
  const double right_down = 1.0 / std::sqrt(aniso.q);  // q^{-1/2}|+->
  const std::uint32_t choices = 1u << arcs.size();
  for (std::uint32_t choice = 0; choice < choices; ++choice) {
    std::uint32_t mask = 0;
    double coefficient = 1.0;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto [i, j] = arcs[k];
      if (choice & (1u << k)) {
        mask |= site_bit(length, i);
        coefficient *= left_down;
      } else {
        mask |= site_bit(length, j);
        coefficient *= right_down;
      }
    }
    visit(mask, coefficient);
  }
}

}  // namespace

bool ArcDiagram::is_valid_partner_array(const std::vector<int>& partner) {
  const int length = static_cast<int>(partner.size());
  for (int i = 0; i < length; ++i) {
    const int j = partner[i];
    if (j == kUnpaired) continue;
    if (j < 0 || j >= length || j == i || partner[j] != i) return false;
    if (i < j) {
      for (int k = i + 1; k < j; ++k) {
        if (partner[k] == kUnpaired || partner[k] <= i || partner[k] >= j) return false;
      }
    }
  }
  return true;
}

ArcDiagram ArcDiagram::from_arcs(int length, const std::vector<std::pair<int, int>>& arcs) {
  if (length < 0) throw ParameterError("negative diagram length");
  std::vector<int> partner(length, kUnpaired);
  for (auto [i, j] : arcs) {
    if (i < 0 || j < 0 || i >= length || j >= length || i == j) {
      throw ParameterError("arc endpoint out of range");
    }
    if (partner[i] != kUnpaired || partner[j] != kUnpaired) {
      throw ParameterError("site used by two arcs");
    }
    partner[i] = j;
    partner[j] = i;
  }
  if (!is_valid_partner_array(partner)) {
    throw ParameterError("arcs cross or span an unpaired site");
  }
  return ArcDiagram(std::move(partner), static_cast<int>(arcs.size()));
}

ArcDiagram ArcDiagram::empty(int length) { return ArcDiagram(std::vector<int>(length, kUnpaired), 0); }

std::vector<std::pair<int, int>> ArcDiagram::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < length(); ++i) {
    if (partner_[i] > i) out.emplace_back(i, partner_[i]);
  }
  return out;
}

std::string ArcDiagram::to_string() const {
  std::string s;
  for (auto [i, j] : arcs()) s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  return s;
}

std::vector<ArcDiagram> enumerate_diagrams(int length, int arc_count) {
  check_arc_count(length, arc_count);
  std::vector<ArcDiagram> out;
  std::vector<int> partner(length, ArcDiagram::kUnpaired);
  fill_top(partner, 0, arc_count, [&] {
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < length; ++i) {
      if (partner[i] > i) arcs.emplace_back(i, partner[i]);
    }
    out.push_back(ArcDiagram::from_arcs(length, arcs));
  });
  std::sort(out.begin(), out.end());
  return out;
}

ArcDiagram embed(const ArcDiagram& diagram) {
  return ArcDiagram::from_arcs(diagram.length() + 1, diagram.arcs());
}

std::vector<int> embedding_index_map(int length, int arc_count) {
  const auto small = enumerate_diagrams(length, arc_count);
  const auto large = enumerate_diagrams(length + 1, arc_count);
  std::map<std::vector<int>, int> index;
  for (std::size_t k = 0; k < large.size(); ++k) index.emplace(large[k].partners(), static_cast<int>(k));
  std::vector<int> map;
  map.reserve(small.size());
  for (const auto& d : small) map.push_back(index.at(embed(d).partners()));
  return map;
}

std::optional<DiagramTerm> h_action(int bond, const ArcDiagram& diagram, double delta) {
  if (bond < 0 || bond + 1 >= diagram.length()) {
    throw ParameterError("bond " + std::to_string(bond) + " out of range for L=" +
                         std::to_string(diagram.length()));
  }
  const int a = bond;
  const int b = bond + 1;
  const int pa = diagram.partner(a);
  const int pb = diagram.partner(b);
  if (pa == ArcDiagram::kUnpaired && pb == ArcDiagram::kUnpaired) return std::nullopt;
  if (pa == b) return DiagramTerm{1.0, diagram};

  // Cap absorbs the strands at a and b; the freed partners are joined, or
  // a lone freed partner becomes unpaired. The cup creates the arc (a, b).
  std::vector<std::pair<int, int>> arcs;
  for (auto [i, j] : diagram.arcs()) {
    if (i == a || j == a || i == b || j == b) continue;
    arcs.emplace_back(i, j);
  }
  arcs.emplace_back(a, b);
  if (pa != ArcDiagram::kUnpaired && pb != ArcDiagram::kUnpaired) {
    arcs.emplace_back(std::min(pa, pb), std::max(pa, pb));
  }
  std::sort(arcs.begin(), arcs.end());
  return DiagramTerm{-0.5 / delta, ArcDiagram::from_arcs(diagram.length(), arcs)};
}

SectorMatrix sector_matrix(int length, int arc_count, double delta) {
  if (!(delta >= 1.0) || !std::isfinite(delta)) throw ParameterError("anisotropy must be >= 1");
  SectorMatrix m;
  m.length = length;
  m.arc_count = arc_count;
  m.delta = delta;
  m.diagrams = enumerate_diagrams(length, arc_count);
  std::map<std::vector<int>, Eigen::Index> index;
  for (std::size_t k = 0; k < m.diagrams.size(); ++k) {
    index.emplace(m.diagrams[k].partners(), static_cast<Eigen::Index>(k));
  }
  const auto dim = static_cast<Eigen::Index>(m.diagrams.size());
  m.entries = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (int bond = 0; bond + 1 < length; ++bond) {
      if (auto term = h_action(bond, m.diagrams[col], delta)) {
        m.entries(index.at(term->result.partners()), col) += term->coefficient;
      }
    }
  }
  return m;
}

Eigen::VectorXd hulthen_vector(const ArcDiagram& diagram, const AnisotropyParam& aniso) {
  if (diagram.length() > 20) throw InvalidSizeError("full-space bracket vector too large");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index{1} << diagram.length());
  for_each_component(diagram, aniso, [&](std::uint32_t mask, double c) { v(mask) += c; });
  return v;
}

Eigen::VectorXd hulthen_sector_vector(const ArcDiagram& diagram, const AnisotropyParam& aniso) {
  if (diagram.length() > 20) throw InvalidSizeError("sector bracket vector too large");
  const int length = diagram.length();
  const auto lookup = sector_lookup(length, diagram.arc_count());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(length, diagram.arc_count())));
  for_each_component(diagram, aniso, [&](std::uint32_t mask, double c) { v(lookup[mask]) += c; });
  return v;
}

Eigen::MatrixXd gram_matrix(int length, int arc_count, const AnisotropyParam& aniso) {
  const auto diagrams = enumerate_diagrams(length, arc_count);
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(binomial(length, arc_count)),
                      static_cast<Eigen::Index>(diagrams.size()));
  for (std::size_t k = 0; k < diagrams.size(); ++k) {
    phi.col(static_cast<Eigen::Index>(k)) = hulthen_sector_vector(diagrams[k], aniso);
  }
  Eigen::MatrixXd gram = phi.transpose() * phi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (!(solver.eigenvalues().minCoeff() > 0.0)) {
    throw IndependenceViolationError("bracket vectors for L=" + std::to_string(length) + ", n=" +
                                     std::to_string(arc_count) + " are linearly dependent");
  }
  return gram;
}

std::string to_csv(const Eigen::MatrixXd& matrix) {
  std::ostringstream out;
  char buffer[64];
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buffer, sizeof buffer, "%.17g", matrix(r, c));
      if (c) out << ',';
      out << buffer;
    }
    out << '\n';
  }
  return out.str();
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw InputError("non-numeric CSV cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw InputError("ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace foel
