#include "commands.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "roundness/error.hpp"
#include "roundness/graphs.hpp"
#include "roundness/hamming.hpp"
#include "roundness/spectral.hpp"

namespace roundness::cli {

namespace {

int log_level() {
  const char* env = std::getenv("ROUNDNESS_LOG");
  if (!env || !*env) return 0;
  const std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  if (v == "off") return 0;
  return std::atoi(env);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (double x : m.row(i)) r.push_back(x);
    rows.push_back(std::move(r));
  }
  return rows;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    rows.push_back(std::vector<std::int64_t>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

json space_json(const FiniteMetricSpace& s) {
  return {{"labels", s.labels()}, {"matrix", matrix_json(s.dist())}};
}

json tolerances(const RoundnessOptions& o) {
  return {{"p_max", o.p_max},
          {"tol_p", o.tol_p},
          {"tol_eig", o.tol_eig},
          {"certificate_tol", o.certificate_tol},
          {"det_tol", o.det_tol},
          {"row_tol", o.row_tol}};
}

json make_report(std::string command, const json& input, json result,
                 json diagnostics) {
  return {{"command", std::move(command)},
          {"inputs_digest", digest(input)},
          {"result", std::move(result)},
          {"diagnostics", std::move(diagnostics)}};
}

std::string_view status_name(RoundnessStatus s) {
  return s == RoundnessStatus::Finite ? "Finite" : "Unbounded";
}

std::string_view method_name(RoundnessMethod m) {
  return m == RoundnessMethod::DeterminantFastPath ? "DeterminantFastPath"
                                                   : "SpectralBisection";
}

json roundness_json(const RoundnessResult& r) {
  json j = {{"status", status_name(r.status)},
            {"method", method_name(r.method)},
            {"row_permutation", r.row_permutation},
            {"iterations", r.iterations}};
  if (r.finite()) {
    j["q"] = r.q;
    j["bracket"] = {r.p_lo, r.p_hi};
  } else {
    j["bracket"] = {r.p_lo, nullptr};
  }
  j["det_at_q"] = r.det_at_q ? json(*r.det_at_q) : json(nullptr);
  j["certificate"] = r.certificate ? json(*r.certificate) : json(nullptr);
  j["certificate_residual"] =
      r.certificate_residual ? json(*r.certificate_residual) : json(nullptr);
  return j;
}

json vertices_json(const CubeEmbedding& e) {
  json a = json::array();
  for (const auto& v : e) a.push_back(v.str());
  return a;
}

}  // namespace

std::string digest(const json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

FiniteMetricSpace parse_matrix_text(std::string_view text, bool validate) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    throw Error(ErrorKind::ParseError, "matrix input is empty");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  if (text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
      if (!doc.contains("matrix"))
        throw Error(ErrorKind::ParseError, "matrix JSON lacks a \"matrix\" field");
      rows = doc.at("matrix").get<std::vector<std::vector<double>>>();
      if (doc.contains("labels"))
        labels = doc.at("labels").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("bad matrix JSON: ") + e.what());
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto f = line.find_first_not_of(" \t\r");
      if (f == std::string::npos || line[f] == '#') continue;
      std::vector<double> row;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) {
        try {
          std::size_t used = 0;
          row.push_back(std::stod(cell, &used));
          if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
            throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw Error(ErrorKind::ParseError, "bad CSV cell '" + cell + "'");
        }
      }
      rows.push_back(std::move(row));
    }
  }

  const std::size_t n = rows.size();
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw Error(ErrorKind::DimensionMismatch,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return build_metric_space(std::move(m), std::move(labels), validate);
}

FiniteMetricSpace load_space(const InputSpec& in) {
  const int sources = static_cast<int>(in.matrix_file.has_value()) +
                      static_cast<int>(in.graph.has_value()) +
                      static_cast<int>(in.edges_file.has_value());
  if (sources != 1)
    throw Error(ErrorKind::InvalidArgument,
                "give exactly one of --matrix, --graph, --edges");
  if (in.matrix_file) return parse_matrix_text(read_file(*in.matrix_file), in.validate);
  if (in.graph) return path_metric(parse_graph_spec(*in.graph));
  return path_metric(load_edge_list(*in.edges_file));
}

Outcome cmd_roundness(const InputSpec& in, const RoundnessOptions& opts) {
  const FiniteMetricSpace space = load_space(in);
  const json input = {{"space", space_json(space)}};
  const RoundnessResult r = generalized_roundness(space, opts);
  json diag = {{"tolerances", tolerances(opts)}, {"iterations", r.iterations}};
  return {make_report("roundness", input, roundness_json(r), std::move(diag)),
          kSuccess};
}

Outcome cmd_negtype(const InputSpec& in, double p, bool strict, double tol_eig) {
  const FiniteMetricSpace space = load_space(in);
  const json input = {{"space", space_json(space)}, {"p", p}, {"strict", strict}};
  const NegTypeVerdict v = check_negative_type(space, p, tol_eig);
  json result = {{"p", p},
                 {"holds", v.holds},
                 {"strict", v.strict},
                 {"max_form_eigenvalue", v.max_form_eigenvalue},
                 {"threshold", v.threshold}};
  if (v.witness)
    result["witness"] = {{"eta", v.witness->eta},
                         {"form_value", v.witness->form_value}};
  else
    result["witness"] = nullptr;
  const bool ok = strict ? v.strict : v.holds;
  return {make_report("negtype", input, std::move(result),
                      {{"tolerances", {{"tol_eig", tol_eig}}}}),
          ok ? kSuccess : kNegative};
}

Outcome cmd_verify(const InputSpec& in, const RoundnessOptions& opts,
                   double kernel_tol) {
  const FiniteMetricSpace space = load_space(in);
  const json input = {{"space", space_json(space)}};
  json diag = {{"tolerances", tolerances(opts)},
               {"kernel_tol", kernel_tol}};
  if (!has_row_permutation_property(space, opts.row_tol)) {
    json err = {{"kind", to_string(ErrorKind::HypothesisViolated)},
                {"message",
                 "rows of the distance matrix are not permutations of the "
                 "first row; kernel coincidence is only asserted under that "
                 "hypothesis"}};
    return {make_report("verify", input, {{"holds", false}, {"error", err}},
                        std::move(diag)),
            kNegative};
  }
  const RoundnessResult r = generalized_roundness(space, opts);
  json result = {{"roundness", roundness_json(r)}};
  if (!r.finite()) {
    result["holds"] = false;
    result["error"] = {{"kind", to_string(ErrorKind::InvalidArgument)},
                       {"message", "roundness is unbounded; kernel coincidence "
                                   "is stated for finite q only"}};
    return {make_report("verify", input, std::move(result), std::move(diag)),
            kNegative};
  }
  const KernelCoincidenceReport k = kernel_coincidence_check(space, r.q, kernel_tol, opts.row_tol);
  result["holds"] = k.holds;
  result["max_defect"] = k.max_defect;
  result["form_null_dim"] = k.form_null_dim;
  result["matrix_null_dim"] = k.matrix_null_dim;
  return {make_report("verify", input, std::move(result), std::move(diag)),
          k.holds ? kSuccess : kNegative};
}

Outcome cmd_cube_classify(std::size_t n, const std::string& subset_text) {
  const CubeSubset s = parse_subset(subset_text, n);
  const json input = {{"n", n}, {"subset", s.indices()}};
  const ClassificationResult c = classify_subset(s);
  json vertices = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) vertices.push_back(s.vertex(i).str());
  json result = {{"n", n},
                 {"vertices", vertices},
                 {"indices", s.indices()},
                 {"strict", c.strict},
                 {"rank", c.rank},
                 {"k", c.k},
                 {"dependency", c.dependency ? json(*c.dependency) : json(nullptr)}};
  return {make_report("cube classify", input, std::move(result),
                      {{"arithmetic", "exact integer"}}),
          kSuccess};
}

Outcome cmd_cube_spectrum(std::size_t n) {
  const json input = {{"n", n}};
  const IdentityReport id = eigen_identity_check(n);
  const NullDimensionReport nd = null_dimension_check(n);
  json result = {
      {"eigen_identities", {{"ok", id.ok}, {"failures", id.failures}}},
      {"null_dimension",
       {{"expected", nd.expected},
        {"computed", nd.computed},
        {"rank_D", nd.rank_D},
        {"rank_A", nd.rank_A},
        {"annihilates", nd.annihilates},
        {"ok", nd.ok}}},
      {"ok", id.ok && nd.ok}};
  return {make_report("cube spectrum", input, std::move(result),
                      {{"arithmetic", "exact integer"}}),
          id.ok && nd.ok ? kSuccess : kNegative};
}

Outcome cmd_cube_scan(std::size_t n, std::size_t max_size, int jobs,
                      const RoundnessOptions& opts) {
  const json input = {{"n", n}, {"max_size", max_size}};
  ScanOptions so;
  so.max_size = max_size;
  so.jobs = jobs;
  so.roundness = opts;
  const ScanSummary s = scan_subsets(n, so);
  json counts = json::array();
  for (const auto& [size, c] : s.counts)
    counts.push_back({{"size", size}, {"strict", c.strict}, {"not_strict", c.not_strict}});
  json witness = json::array();
  for (auto i : s.argmin_subset) witness.push_back(CubeVertex{n, i}.str());
  json result = {{"n", n},
                 {"max_size", s.max_size},
                 {"counts", counts},
                 {"roundness_evaluated", s.roundness_evaluated},
                 {"roundness_unbounded", s.roundness_unbounded},
                 {"min_q", s.min_q ? json(*s.min_q) : json(nullptr)},
                 {"argmin_subset", s.argmin_subset},
                 {"argmin_vertices", witness},
                 {"min_q_scope", "strict subsets of size >= 3; sizes 1 and 2 "
                                 "have unbounded roundness and are excluded"}};
  // jobs is left out of the report so output is identical for any thread count.
  return {make_report("cube scan", input, std::move(result),
                      {{"tolerances", tolerances(opts)}}),
          kSuccess};
}

Outcome cmd_cube_lemmas(std::size_t n, bool dump) {
  const json input = {{"n", n}, {"dump", dump}};
  const FactorizationReport l = factorization_check(n);
  const IdentityReport id = eigen_identity_check(n);
  json result = {{"factorization", {{"ok", l.ok}, {"det_M", l.det_M}, {"product_matches", l.product_matches}}},
                 {"eigen_identities", {{"ok", id.ok}, {"failures", id.failures}}},
                 {"ok", l.ok && id.ok}};
  if (dump)
    result["matrices"] = {{"A", matrix_json(matrix_A(n))},
                          {"B", matrix_json(matrix_B(n))},
                          {"M", matrix_json(matrix_M(n))}};
  return {make_report("cube lemmas", input, std::move(result),
                      {{"arithmetic", "exact integer"}}),
          l.ok && id.ok ? kSuccess : kNegative};
}

Outcome cmd_tree_embed(const std::string& edges_file, std::size_t n) {
  const Graph t = load_edge_list(edges_file);
  json edges = json::array();
  for (auto [u, v] : t.edges()) edges.push_back({u, v});
  const json input = {{"vertices", t.size()}, {"edges", edges}, {"n", n}};
  const auto e = tree_embedding_search(t, n);
  json result = {{"k", t.size()},
                 {"n", n},
                 {"found", e.has_value()},
                 {"embedding", e ? vertices_json(*e) : json(nullptr)},
                 {"lower_bound", t.size() - 1}};
  return {make_report("tree embed", input, std::move(result),
                      {{"search", "exhaustive backtracking, root pinned to origin"}}),
          e ? kSuccess : kNegative};
}

Outcome cmd_tree_witness(std::size_t k) {
  const json input = {{"k", k}};
  const CubeEmbedding e = path_embedding_witness(k);
  const bool ok = is_isometric_embedding(path_graph(k), e);
  json result = {{"k", k}, {"n", k - 1}, {"embedding", vertices_json(e)}, {"verified", ok}};
  return {make_report("tree witness", input, std::move(result), json::object()),
          ok ? kSuccess : kNegative};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Generalized roundness (supremal p-negative type) of finite metric "
      "spaces and exact classification of Hamming-cube subsets.\n\n"
      "Inputs: --matrix FILE (JSON {\"labels\": [...], \"matrix\": [[...]]} "
      "or CSV), --graph FAMILY[:PARAMS] (cycle:5, complete:4, "
      "complete_bipartite:3, hypercube:3, petersen, circulant:8:1,3, path:4, "
      "star:3, dodecahedron, icosahedron), --edges FILE (first line n, then "
      "'u v' per line).\nSubsets: comma-separated n-bit strings (000,011) or "
      "indices (0,3).\nExit codes: 0 success/holds, 1 violated/hypothesis "
      "failed/none found, 2 input error. ROUNDNESS_LOG=info|debug enables "
      "diagnostics on stderr.",
      "roundness"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  InputSpec in;
  RoundnessOptions ropts;
  double p = 1.0;
  bool strict = false;
  double kernel_tol = 1e-6;
  std::size_t n = 0, k = 0, max_size = 0;
  int jobs = 0;
  bool dump = false;
  std::string subset, edges_file;

  auto add_input = [&](CLI::App* sub) {
    auto* g = sub->add_option_group("input");
    g->add_option("--matrix", in.matrix_file, "Distance matrix file (JSON or CSV)");
    g->add_option("--graph", in.graph, "Graph family spec, e.g. cycle:5");
    g->add_option("--edges", in.edges_file, "Edge-list file");
    g->require_option(1);
    sub->add_flag("!--no-validate", in.validate, "Skip the triangle-inequality check");
  };
  auto add_roundness_opts = [&](CLI::App* sub) {
    sub->add_option("--p-max", ropts.p_max, "Unbounded cutoff")->capture_default_str();
    sub->add_option("--tol-p", ropts.tol_p, "Bisection width")->capture_default_str();
    sub->add_option("--tol-eig", ropts.tol_eig, "Zero-eigenvalue threshold, relative")
        ->capture_default_str();
  };

  auto* roundness_cmd = app.add_subcommand("roundness", "Compute the generalized roundness q");
  add_input(roundness_cmd);
  add_roundness_opts(roundness_cmd);
  roundness_cmd->add_option("--row-tol", ropts.row_tol, "Relative tolerance of the row-permutation check")
      ->capture_default_str();

  auto* negtype_cmd = app.add_subcommand("negtype", "Decide (strict) p-negative type");
  add_input(negtype_cmd);
  negtype_cmd->add_option("--p", p, "Exponent p >= 0")->required();
  negtype_cmd->add_flag("--strict", strict, "Exit 1 unless the type is strict");
  negtype_cmd->add_option("--tol-eig", ropts.tol_eig, "Zero-eigenvalue threshold, relative")
      ->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Kernel coincidence at p = q");
  add_input(verify_cmd);
  add_roundness_opts(verify_cmd);
  verify_cmd->add_option("--tol", kernel_tol, "Kernel tolerance")->capture_default_str();
  verify_cmd->add_option("--row-tol", ropts.row_tol, "Relative tolerance of the row-permutation check")
      ->capture_default_str();

  auto* cube_cmd = app.add_subcommand("cube", "Hamming cube experiments");
  cube_cmd->require_subcommand(1);
  auto* classify_cmd = cube_cmd->add_subcommand("classify", "Strict 1-negative type of a subset");
  classify_cmd->add_option("--n", n, "Cube dimension")->required();
  classify_cmd->add_option("--subset", subset, "Bitstrings or indices, comma-separated")->required();
  auto* spectrum_cmd = cube_cmd->add_subcommand("spectrum", "Eigenvector identities and null dimension");
  spectrum_cmd->add_option("--n", n, "Cube dimension (<= 8)")->required();
  auto* scan_cmd = cube_cmd->add_subcommand("scan", "Exhaustive subset scan");
  scan_cmd->add_option("--n", n, "Cube dimension (<= 4)")->required();
  scan_cmd->add_option("--max-size", max_size, "Largest subset size (default n+1)");
  scan_cmd->add_option("--jobs", jobs, "Worker threads (default: all)");
  add_roundness_opts(scan_cmd);
  auto* lemmas_cmd = cube_cmd->add_subcommand("lemmas", "M_n B_n = A_n and eigen identities");
  lemmas_cmd->add_option("--n", n, "Cube dimension (<= 10)")->required();
  lemmas_cmd->add_flag("--dump", dump, "Include A_n, B_n, M_n");

  auto* tree_cmd = app.add_subcommand("tree", "Isometric tree embeddings into cubes");
  tree_cmd->require_subcommand(1);
  auto* embed_cmd = tree_cmd->add_subcommand("embed", "Exhaustive embedding search");
  embed_cmd->add_option("--edges", edges_file, "Tree edge-list file")->required();
  embed_cmd->add_option("--n", n, "Cube dimension (<= 6)")->required();
  auto* witness_cmd = tree_cmd->add_subcommand("witness", "Prefix embedding of the k-path");
  witness_cmd->add_option("--k", k, "Path vertex count")->required();

  const int level = log_level();
  std::string command = "roundness";
  auto emit = [&](const json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };
  auto fail = [&](std::string_view kind, const std::string& msg) {
    emit({{"command", command}, {"error", {{"kind", kind}, {"message", msg}}}});
    return static_cast<int>(kInputError);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail("ParseError", e.what());
  }

  try {
    Outcome o;
    if (roundness_cmd->parsed()) {
      command = "roundness";
      o = cmd_roundness(in, ropts);
    } else if (negtype_cmd->parsed()) {
      command = "negtype";
      o = cmd_negtype(in, p, strict, ropts.tol_eig);
    } else if (verify_cmd->parsed()) {
      command = "verify";
      o = cmd_verify(in, ropts, kernel_tol);
    } else if (classify_cmd->parsed()) {
      command = "cube classify";
      o = cmd_cube_classify(n, subset);
    } else if (spectrum_cmd->parsed()) {
      command = "cube spectrum";
      o = cmd_cube_spectrum(n);
    } else if (scan_cmd->parsed()) {
      command = "cube scan";
      o = cmd_cube_scan(n, max_size, jobs, ropts);
    } else if (lemmas_cmd->parsed()) {
      command = "cube lemmas";
      o = cmd_cube_lemmas(n, dump);
    } else if (embed_cmd->parsed()) {
      command = "tree embed";
      o = cmd_tree_embed(edges_file, n);
    } else if (witness_cmd->parsed()) {
      command = "tree witness";
      o = cmd_tree_witness(k);
    }
    if (level >= 1) err << "[roundness] " << command << " exit " << o.exit_code << '\n';
    if (level >= 2) err << "[roundness] diagnostics " << o.report["diagnostics"].dump() << '\n';
    emit(o.report);
    return o.exit_code;
  } catch (const Error& e) {
    if (level >= 1) err << "[roundness] " << command << " failed: " << e.what() << '\n';
    return fail(to_string(e.kind()), e.what());
  }
}

}  // namespace roundness::cli
