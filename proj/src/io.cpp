#include "fhist/io.hpp"

#include "fhist/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fhist {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

Graph graph_from_json(const Json& j) {
  require(j.contains("n") && j["n"].is_number_integer(), "graph JSON needs an integer \"n\"");
  const int n = j["n"].get<int>();
  require(n >= 0, "n must be >= 0");
  Graph g(n);
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      require(e.is_array() && e.size() == 2, "edges must be [u, v] pairs");
      g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
  }
  return g;
}

// Text graph plus an optional "root" line.
Graph graph_from_text(const std::string& text, int* root) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  Graph g;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "n") {
      require(n < 0, "duplicate \"n\" line");
      require(static_cast<bool>(ls >> n) && n >= 0, "bad \"n\" line");
      g = Graph(n);
      continue;
    }
    if (head == "root") {
      require(root != nullptr, "unexpected \"root\" line in a graph file");
      require(static_cast<bool>(ls >> *root), "bad \"root\" line");
      continue;
    }
    require(n >= 0, "graph file must start with \"n <count>\"");
    int u = 0, v = 0;
    std::istringstream es(line);
    require(static_cast<bool>(es >> u >> v), "bad edge line: " + line);
    g.add_edge(u, v);
  }
  require(n >= 0, "graph file must contain \"n <count>\"");
  return g;
}

}  // namespace

Graph parse_graph(const std::string& text) {
  if (looks_like_json(text)) return graph_from_json(parse_json(text));
  return graph_from_text(text, nullptr);
}

Graph read_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.order() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

RootedPattern parse_pattern(const std::string& text) {
  if (looks_like_json(text)) {
    Json j = parse_json(text);
    require(j.contains("root"), "pattern JSON needs a \"root\" field");
    return RootedPattern::make(graph_from_json(j), j["root"].get<int>(), j.value("name", std::string{}));
  }
  int root = 0;
  Graph g = graph_from_text(text, &root);
  return RootedPattern::make(std::move(g), root);
}

RootedPattern read_pattern(const std::string& name_or_path) {
  for (const char* name : {"edge", "triangle", "k4", "path3", "star3", "bowtie"}) {
    if (name_or_path == name) return named_pattern(name_or_path);
  }
  return parse_pattern(read_file(name_or_path));
}

Distribution parse_distribution(const Json& j) {
  require(j.is_object() && j.contains("type"), "distribution JSON needs a \"type\"");
  const auto type = j["type"].get<std::string>();
  if (type == "piecewise") {
    return Distribution::piecewise(j.at("breaks").get<std::vector<double>>(),
                                   j.at("densities").get<std::vector<double>>());
  }
  if (type == "empirical") return Distribution::empirical(j.at("atoms").get<std::vector<double>>());
  if (type == "uniform") return Distribution::uniform();
  throw ValidationError("unknown distribution type " + type);
}

Distribution read_distribution(const std::string& name_or_path) {
  if (name_or_path == "uniform") return Distribution::uniform();
  return parse_distribution(parse_json(read_file(name_or_path)));
}

SzemerediType parse_type(const Json& j) {
  require(j.contains("S") && j["S"].is_array(), "type JSON needs an \"S\" matrix");
  const auto rows = j["S"].get<std::vector<std::vector<double>>>();
  const int k = static_cast<int>(rows.size());
  if (j.contains("k")) require(j["k"].get<int>() == k, "\"k\" does not match the size of S");
  Eigen::MatrixXd s(k, k);
  for (int i = 0; i < k; ++i) {
    require(static_cast<int>(rows[i].size()) == k, "S must be square");
    for (int c = 0; c < k; ++c) s(i, c) = rows[i][c];
  }
  return SzemerediType::make(s, j.value("eps", 1.0));
}

SzemerediType read_type(const std::string& path) { return parse_type(parse_json(read_file(path))); }

Partition read_partition(const std::string& path) {
  Json j = parse_json(read_file(path));
  require(j.is_array(), "partition file must be a JSON array");
  return Partition::from_assignment(j.get<std::vector<int>>());
}

// ---------------------------------------------------------------------------

namespace {
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
}  // namespace

Json to_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(number(v[i]));
  return j;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) j.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return j;
}

Json to_json(const Distribution& p) {
  Json j;
  if (p.is_piecewise()) {
    j["type"] = "piecewise";
    j["breaks"] = p.breaks();
    j["densities"] = p.densities();
    j["density_min"] = p.density_min();
    j["density_max"] = p.density_max();
  } else {
    j["type"] = "empirical";
    j["atoms"] = p.atoms();
  }
  return j;
}

Json to_json(const MomentReport& r) {
  return {{"d", r.d}, {"moments", to_json(r.moments)}, {"c_coeffs", to_json(r.c_coeffs)}, {"phi", to_json(r.phi)}};
}

Json to_json(const BetaRadii& b) {
  return {{"beta", to_json(b.beta)}, {"T", number(b.T)}, {"objective", number(b.objective)}, {"feasible", b.feasible}};
}

Json to_json(const SandwichRadii& r) {
  return {{"delta", r.delta}, {"gamma", to_json(r.gamma)}, {"finite_n_slack", r.slack}, {"beta", to_json(r.beta)}};
}

Json to_json(const MaxEntSolution& s) {
  Json starts = Json::array();
  for (const auto& l : s.starts) {
    starts.push_back({{"kind", l.kind}, {"entropy", l.entropy}, {"max_excess", number(l.max_excess)},
                      {"converged", l.converged}});
  }
  return {{"S", to_json(s.S)},
          {"entropy", s.entropy},
          {"per_edge_entropy", s.per_edge_entropy},
          {"densities", to_json(s.densities)},
          {"residuals", to_json(s.residuals)},
          {"feasible", s.feasible},
          {"converged", s.converged},
          {"best_start", s.best_start},
          {"starts", starts}};
}

Json to_json(const EffectiveRadius& r) {
  return {{"rho", r.rho},
          {"sigma_hat", r.sigma_hat},
          {"target", r.target},
          {"sentinel", r.sentinel},
          {"confidence", r.annotation}};
}

Json to_json(const SizeBoundsReport& r) {
  Json j;
  j["target"] = r.target;
  j["lower"] = r.lower ? Json(*r.lower) : Json(nullptr);
  j["upper"] = r.upper;
  j["upper_center"] = r.upper_center;
  j["lower_center"] = r.lower_center ? Json(*r.lower_center) : Json(nullptr);
  j["slack_terms"] = r.slack_terms;
  j["o_eps_flag"] = r.o_eps_flag;
  j["scalar_constant"] = r.scalar_constant ? Json(*r.scalar_constant) : Json(nullptr);
  j["notes"] = r.notes;
  if (r.upper_solution) j["upper_solution"] = to_json(*r.upper_solution);
  if (r.lower_solution) j["lower_solution"] = to_json(*r.lower_solution);
  if (r.upper_radius) j["upper_radius"] = to_json(*r.upper_radius);
  if (r.lower_radius) j["lower_radius"] = to_json(*r.lower_radius);
  return j;
}

Json to_json(const SandwichVerdict& v) {
  auto examples = [](const std::vector<SandwichCounterexample>& list, int n) {
    Json a = Json::array();
    for (const auto& c : list) {
      a.push_back({{"graph", format_graph(graph_from_mask(n, c.mask))},
                   {"mask", c.mask},
                   {"ks", c.ks},
                   {"moment_gaps", to_json(c.moment_gaps)},
                   {"densities", to_json(c.densities)}});
    }
    return a;
  };
  Json j;
  j["phi"] = to_json(v.phi);
  j["gamma"] = to_json(v.gamma);
  j["beta"] = to_json(v.beta);
  j["finite_n_slack"] = v.slack;
  j["graphs"] = v.graphs;
  j["hist"] = v.hist;
  j["outer"] = v.outer;
  j["inner"] = v.inner;
  j["outer_violations"] = v.outer_violations;
  j["inner_violations"] = v.inner_violations;
  j["outer_holds"] = v.outer_holds;
  j["inner_checked"] = v.inner_checked;
  j["inner_holds"] = v.inner_holds;
  j["inner_note"] = v.inner_note;
  j["required_slack"] = v.required_slack;
  j["outer_counterexamples"] = examples(v.outer_counterexamples, v.n);
  j["inner_counterexamples"] = examples(v.inner_counterexamples, v.n);
  j["verdict"] = v.outer_holds && v.inner_holds ? "holds" : "violated";
  return j;
}

Json to_json(const Partition& p) { return {{"k", p.k}, {"assignment", p.assignment}, {"sizes", p.sizes()}}; }

Json to_json(const DecomposeResult& r) {
  return {{"partition", to_json(r.partition)},
          {"type", {{"k", r.type.k}, {"eps", r.type.eps}, {"S", to_json(r.type.S)}}},
          {"uniform", r.uniform},
          {"k_cap_exceeded", r.k_cap_exceeded},
          {"iterations", r.iterations},
          {"energies", r.energies},
          {"audit_irregular_pairs", r.audit_irregular_pairs},
          {"audit_irregular_weight", r.audit_irregular_weight},
          {"note", r.note}};
}

Json to_json(const CountingAudit& a) {
  return {{"t_type", a.t_type},
          {"bound", a.bound},
          {"max_deviation", a.max_deviation},
          {"mean_deviation", a.mean_deviation},
          {"within_bound", a.within_bound},
          {"outside_hypothesis", a.outside_hypothesis},
          {"irregular_pairs_seen", a.irregular_pairs_seen},
          {"samples", a.deviations.size()}};
}

Json to_json(const JacobianReport& j) {
  return {{"J", to_json(j.J)}, {"sigma_min", j.sigma_min}, {"densities", to_json(j.densities)}};
}

}  // namespace fhist
