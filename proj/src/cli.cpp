#include "foel/cli.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "foel/errors.hpp"
#include "foel/quantum_group.hpp"
#include "foel/spectra.hpp"
#include "foel/tl_diagrams.hpp"
#include "json.hpp"

namespace foel::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string format_number(const char* fmt, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, fmt, value);
  return buffer;
}

std::string energy_text(double value) { return format_number("%.12g", value); }
std::string delta_text(double value) { return format_number("%g", value); }

json versions() {
  return {{"foel", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)}};
}

json tolerances(const RunConfig& c) {
  return {{"strictness", c.strictness_tolerance},
          {"inequality", c.inequality_tolerance},
          {"gap", c.gap_tolerance},
          {"pipeline_agreement", kPipelineAgreement}};
}

json violation_json(double delta, const std::string& check, const Violation& v) {
  return {{"delta", delta}, {"check", check},           {"L", v.length},
          {"n", v.spin_deviation}, {"margin", v.margin}, {"description", v.description}};
}

void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.output.empty()) {
    out << content;
  } else {
    write_atomically(config.output, content);
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int run_scan(const RunConfig& config, std::ostream& out) {
  bool verdict = true;
  std::string csv = "L,n,delta,energy,dim,method\n";
  json margins = json::object();
  json violations = json::array();
  json tables = json::object();
  for (double delta : config.deltas) {
    EnergyTableRequest request;
    request.max_length = config.max_length;
    request.max_spin_deviation = config.max_spin_deviation;
    request.method = config.method;
    request.threads = config.threads;
    const EnergyTable table = energy_table(request, delta);

    const auto foel = check_foel(table, config.strictness_tolerance);
    const auto volume = check_volume_monotonicity(table, config.strictness_tolerance);
    const auto kn = check_kn_inequality(table, config.inequality_tolerance);
    verdict = verdict && foel_verdict(foel) && volume.verdict && kn.verdict;

    json rows = json::array();
    for (const auto& [key, entry] : table.entries) {
      csv += std::to_string(key.first) + "," + std::to_string(key.second) + "," + delta_text(delta) + "," +
             energy_text(entry.energy) + "," + std::to_string(entry.dimension) + "," +
             to_string(entry.method) + "\n";
      rows.push_back({{"L", key.first},
                      {"n", key.second},
                      {"energy", entry.energy},
                      {"dim", entry.dimension},
                      {"method", to_string(entry.method)}});
    }
    json foel_margins = json::object();
    for (const auto& r : foel) {
      foel_margins[std::to_string(r.length)] = r.margins;
      for (const auto& v : r.violations) violations.push_back(violation_json(delta, "foel", v));
    }
    json volume_margins = json::array();
    for (const auto& s : volume.steps) {
      volume_margins.push_back({{"L", s.length}, {"n", s.spin_deviation}, {"margin", s.margin}});
    }
    for (const auto& v : volume.violations) violations.push_back(violation_json(delta, "volume", v));
    json kn_margins = json::array();
    for (const auto& s : kn.steps) {
      kn_margins.push_back({{"L", s.length + 1}, {"n", s.spin_deviation}, {"slack", s.lhs - s.rhs}});
    }
    for (const auto& v : kn.violations) violations.push_back(violation_json(delta, "kn", v));

    const std::string key = delta_text(delta);
    margins[key] = {{"foel", foel_margins}, {"volume", volume_margins}, {"kn", kn_margins}};
    tables[key] = rows;
  }

  if (config.format == Format::kCsv) {
    emit(config, csv, out);
  } else {
    json doc = {{"command", "scan"},     {"verdict", verdict},     {"margins", margins},
                {"violations", violations}, {"tolerances", tolerances(config)}, {"versions", versions()},
                {"table", tables}};
    emit(config, dump(doc), out);
  }
  return verdict ? kOk : kViolation;
}

int run_gap(const RunConfig& config, std::ostream& out) {
  if (config.length) {
    std::string text;
    for (double delta : config.deltas) {
      const auto report = check_gap_formula(*config.length, delta);
      text += energy_text(report.rows.back().computed) + "\n";
    }
    emit(config, text, out);
    return kOk;
  }
  bool verdict = true;
  std::string csv = "L,delta,computed,formula,deviation\n";
  json rows = json::array();
  json margins = json::object();
  json violations = json::array();
  for (double delta : config.deltas) {
    const auto report = check_gap_formula(config.max_length, delta);
    for (const auto& row : report.rows) {
      const double deviation = std::abs(row.computed - row.formula);
      csv += std::to_string(row.length) + "," + delta_text(delta) + "," + energy_text(row.computed) + "," +
             energy_text(row.formula) + "," + format_number("%.3e", deviation) + "\n";
      rows.push_back({{"L", row.length}, {"delta", delta}, {"computed", row.computed}, {"formula", row.formula}});
      if (deviation > config.gap_tolerance) {
        violations.push_back({{"delta", delta}, {"L", row.length}, {"deviation", deviation}});
      }
    }
    margins[delta_text(delta)] = report.max_deviation;
    verdict = verdict && report.max_deviation <= config.gap_tolerance;
  }
  if (config.format == Format::kCsv) {
    emit(config, csv, out);
  } else {
    json doc = {{"command", "gap"},   {"verdict", verdict},        {"margins", margins},
                {"violations", violations}, {"tolerances", tolerances(config)}, {"versions", versions()},
                {"rows", rows}};
    emit(config, dump(doc), out);
  }
  return verdict ? kOk : kViolation;
}

int run_sector(const RunConfig& config, std::ostream& out) {
  if (!config.length || !config.spin_deviation) throw InputError("sector needs --L and --n");
  const double delta = config.deltas.front();
  if (config.dump_hamiltonian) {
    const auto h = build_xxz_chain_hamiltonian(*config.length, AnisotropyParam::from_delta(delta));
    emit(config, to_triplet_text(h), out);
    return kOk;
  }
  const SectorMatrix a = sector_matrix(*config.length, *config.spin_deviation, delta);
  if (config.dump_matrix) {
    emit(config, to_csv(a.entries), out);
    return kOk;
  }
  const auto perron = smallest_eigenvalue_perron(a.entries);
  json doc = {{"command", "sector"},
              {"L", a.length},
              {"n", a.arc_count},
              {"delta", delta},
              {"dim", a.diagrams.size()},
              {"energy", perron.smallest_eigenvalue},
              {"shift", perron.shift},
              {"iterations", perron.iterations},
              {"residual", perron.residual},
              {"versions", versions()}};
  if (config.format == Format::kCsv) {
    emit(config,
         "L,n,delta,energy,dim,method\n" + std::to_string(a.length) + "," + std::to_string(a.arc_count) + "," +
             delta_text(delta) + "," + energy_text(perron.smallest_eigenvalue) + "," +
             std::to_string(a.diagrams.size()) + ",diagram\n",
         out);
  } else {
    emit(config, dump(doc), out);
  }
  return kOk;
}

json tree_report_json(const TreeFoelReport& r) {
  json edges = json::array();
  for (const auto& e : r.edges) edges.push_back({e.u, e.v});
  json energies = json::object();
  for (const auto& [n, e] : r.energies) energies[std::to_string(n)] = e;
  return {{"vertices", r.vertex_count},
          {"edges", edges},
          {"energies", energies},
          {"level_one_margin", std::isfinite(r.level_one_margin) ? json(r.level_one_margin) : json(nullptr)},
          {"half_fiedler", r.half_fiedler},
          {"fiedler_deviation", r.fiedler_deviation},
          {"verdict", r.verdict}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_tree(const RunConfig& config, std::ostream& out) {
  std::vector<TreeGraph> trees;
  if (!config.edges_path.empty()) trees.push_back(tree_from_json(read_file(config.edges_path)));
  if (config.all_trees_up_to) {
    if (*config.all_trees_up_to < 2 || *config.all_trees_up_to > kTreeMaxVertices) {
      throw InputError("--all must lie in 2.." + std::to_string(kTreeMaxVertices));
    }
    for (int size = 2; size <= *config.all_trees_up_to; ++size) {
      for (auto& t : enumerate_trees(size)) trees.push_back(std::move(t));
    }
  }
  if (trees.empty()) throw InputError("tree needs --edges FILE or --all N");

  bool verdict = true;
  json reports = json::array();
  json violations = json::array();
  json margins = json::array();
  for (const auto& tree : trees) {
    const auto r = tree_foel_level1(tree, config.strictness_tolerance);
    verdict = verdict && r.verdict;
    reports.push_back(tree_report_json(r));
    margins.push_back(reports.back()["level_one_margin"]);
    if (!r.verdict) violations.push_back(reports.back());
  }
  json doc = {{"command", "tree"},   {"verdict", verdict},        {"margins", margins},
              {"violations", violations}, {"tolerances", tolerances(config)}, {"versions", versions()},
              {"trees", reports}};
  emit(config, dump(doc), out);
  return verdict ? kOk : kViolation;
}

int run_diagrams(const RunConfig& config, std::ostream& out) {
  if (!config.length || !config.spin_deviation) throw InputError("diagrams needs --L and --n");
  std::string text;
  for (const auto& d : enumerate_diagrams(*config.length, *config.spin_deviation)) {
    text += (d.arc_count() == 0 ? std::string("()") : d.to_string()) + "\n";
  }
  emit(config, text, out);
  return kOk;
}

int run_lieb_mattis(const RunConfig& config, std::ostream& out) {
  LiebMattisModel model;
  if (config.model == "af-chain") {
    model = LiebMattisModel::antiferromagnetic_chain(config.sites);
  } else if (config.model == "fm-chain") {
    model = LiebMattisModel::ferromagnetic_chain(config.sites);
  } else if (config.model == "cross") {
    model = LiebMattisModel::cross_coupled(config.a_sites, config.b_sites);
  } else {
    throw InputError("unknown model '" + config.model + "'");
  }
  const auto report = lieb_mattis_scan(model, config.strictness_tolerance);
  json energies = json::object();
  for (const auto& [twice_spin, e] : report.lowest_energy) energies[format_number("%g", twice_spin / 2.0)] = e;
  json doc = {{"command", "lieb-mattis"},
              {"model", config.model},
              {"sites", model.sites},
              {"reference_spin", report.twice_reference_spin / 2.0},
              {"energies", energies},
              {"verdict", report.verdict},
              {"margins", {{"increasing_above", report.increasing_above},
                           {"minimum_at_reference", report.minimum_at_reference}}},
              {"violations", report.violations},
              {"tolerances", tolerances(config)},
              {"versions", versions()}};
  emit(config, dump(doc), out);
  return report.verdict ? kOk : kViolation;
}

}  // namespace

std::string defaults_json() {
  const RunConfig d;
  json doc = {{"L_max", d.max_length},
              {"delta", d.deltas},
              {"delta_grid", default_delta_grid()},
              {"method", to_string(d.method)},
              {"format", "csv"},
              {"strictness_tolerance", d.strictness_tolerance},
              {"inequality_tolerance", d.inequality_tolerance},
              {"gap_tolerance", d.gap_tolerance},
              {"pipeline_agreement", kPipelineAgreement},
              {"threads", "number of cores (THREADS overrides)"},
              {"oracle_max_L", kOracleMaxLength},
              {"diagram_max_L", kDiagramMaxLength},
              {"full_space_max_L", SizeLimits{}.full_space_max},
              {"sector_max_L", SizeLimits{}.sector_max},
              {"tree_max_vertices", kTreeMaxVertices},
              {"lieb_mattis", {{"model", d.model}, {"sites", d.sites}, {"a_sites", d.a_sites}, {"b_sites", d.b_sites}}}};
  return dump(doc);
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write '" + temp + "'");
    file << content;
    file.flush();
    if (!file) throw InputError("write to '" + temp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) throw InputError("cannot move output into place: " + ec.message());
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  RunConfig config;
  CLI::App app{"Ferromagnetic ordering of energy levels for XXZ chains and XXX trees", "foel"};
  app.require_subcommand(0, 1);
  app.footer("Environment: THREADS sets the worker count for grid scans (default: number of cores).");
  bool defaults = false;
  app.add_flag("--defaults", defaults, "Print default settings as JSON and exit");

  std::string method = to_string(config.method);
  std::string format = "csv";
  const std::map<std::string, std::string> methods{{"diagram", "diagram"}, {"oracle", "oracle"}, {"both", "both"}};
  const std::map<std::string, std::string> formats{{"csv", "csv"}, {"json", "json"}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--delta", config.deltas, "Anisotropy values (>= 1)")->delimiter(',')->capture_default_str();
    sub->add_option("--output,-o", config.output, "Output file (written atomically); default stdout");
    sub->add_option("--format", format, "csv or json")->transform(CLI::IsMember(formats))->capture_default_str();
    sub->add_option("--tolerance", config.strictness_tolerance, "Strictness tolerance")->capture_default_str();
  };

  auto* scan = app.add_subcommand("scan", "E(L,n) grid with ordering, volume and inequality checks");
  add_common(scan);
  scan->add_option("--L-max", config.max_length, "Largest chain length")->capture_default_str();
  scan->add_option("--n-max", config.max_spin_deviation, "Largest spin deviation n");
  scan->add_option("--method", method, "diagram, oracle or both")->transform(CLI::IsMember(methods))->capture_default_str();
  scan->add_option("--inequality-tolerance", config.inequality_tolerance)->capture_default_str();

  auto* gap = app.add_subcommand("gap", "Spectral gap E(L,1) and its closed form");
  add_common(gap);
  auto* gap_length = gap->add_option("--L", config.length, "Print E(L,1) for this length");
  gap->add_option("--L-max", config.max_length, "Compare L = 2..L_max with the closed form")
      ->excludes(gap_length)
      ->capture_default_str();
  gap->add_option("--gap-tolerance", config.gap_tolerance)->capture_default_str();

  auto* sector = app.add_subcommand("sector", "Diagram-basis sector matrix A_{L,n}");
  add_common(sector);
  sector->add_option("--L", config.length)->required();
  sector->add_option("--n", config.spin_deviation)->required();
  sector->add_flag("--dump-matrix", config.dump_matrix, "Emit A_{L,n} as dense CSV");
  sector->add_flag("--dump-hamiltonian", config.dump_hamiltonian, "Emit the full-space Hamiltonian as triplets");

  auto* tree = app.add_subcommand("tree", "XXX ferromagnet on trees: level-one ordering and Fiedler value");
  add_common(tree);
  tree->add_option("--edges", config.edges_path, "Tree JSON file")->check(CLI::ExistingFile);
  tree->add_option("--all", config.all_trees_up_to, "Every tree up to this many vertices");

  auto* diagrams = app.add_subcommand("diagrams", "List arc diagrams of n arcs on L sites");
  add_common(diagrams);
  diagrams->add_option("--L", config.length)->required();
  diagrams->add_option("--n", config.spin_deviation)->required();

  auto* lieb = app.add_subcommand("lieb-mattis", "Spin-resolved lowest energies of bipartite models");
  add_common(lieb);
  lieb->add_option("--model", config.model, "af-chain, fm-chain or cross")->capture_default_str();
  lieb->add_option("--L", config.sites, "Sites for chain models")->capture_default_str();
  lieb->add_option("--a-sites", config.a_sites)->capture_default_str();
  lieb->add_option("--b-sites", config.b_sites)->capture_default_str();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }

  config.method = method_from_string(method);
  config.format = format == "json" ? Format::kJson : Format::kCsv;
  if (defaults) {
    config.command = Command::kDefaults;
  } else if (scan->parsed()) {
    config.command = Command::kScan;
  } else if (gap->parsed()) {
    config.command = Command::kGap;
  } else if (sector->parsed()) {
    config.command = Command::kSector;
  } else if (tree->parsed()) {
    config.command = Command::kTree;
  } else if (diagrams->parsed()) {
    config.command = Command::kDiagrams;
  } else if (lieb->parsed()) {
    config.command = Command::kLiebMattis;
  } else {
    out << app.help();
    return std::nullopt;
  }
  if (config.deltas.empty()) throw InputError("at least one --delta is required");
  for (double d : config.deltas) {
    if (!(d >= 1.0) || !std::isfinite(d)) throw InputError("--delta values must be finite and >= 1");
  }
  if (config.max_length < 2) throw InputError("--L-max must be at least 2");
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kScan:
        return run_scan(config, out);
      case Command::kGap:
        return run_gap(config, out);
      case Command::kSector:
        return run_sector(config, out);
      case Command::kTree:
        return run_tree(config, out);
      case Command::kDiagrams:
        return run_diagrams(config, out);
      case Command::kLiebMattis:
        return run_lieb_mattis(config, out);
      case Command::kDefaults:
        emit(config, defaults_json(), out);
        return kOk;
    }
  } catch (const ConvergenceError& e) {
    err << "foel: solver did not converge: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const ConsistencyError& e) {
    err << "foel: internal consistency failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const ComplexSpectrumError& e) {
    err << "foel: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const IndependenceViolationError& e) {
    err << "foel: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "foel: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_command_line(argc, argv, out);
  } catch (const Error& e) {
    err << "foel: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (!config) return kOk;
  if (const char* threads = std::getenv("THREADS")) {
    try {
      config->threads = std::stoi(threads);
    } catch (const std::exception&) {
      err << "foel: THREADS must be an integer\n";
      return kInvalidInput;
    }
  }
  return run(*config, out, err);
}

}  // namespace foel::cli
