// fhist: command-line front end.
#include "fhist/counting.hpp"
#include "fhist/error.hpp"
#include "fhist/io.hpp"
#include "fhist/maxent.hpp"
#include "fhist/mean_density.hpp"
#include "fhist/oracle.hpp"
#include "fhist/parallel.hpp"
#include "fhist/radii.hpp"
#include "fhist/szemeredi.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace fhist;

namespace {

enum Exit { kOk = 0, kValidation = 2, kInfeasible = 3, kCap = 4 };

struct Common {
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "json";
  bool timing = false;
};

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CopyNormalization parse_norm(const std::string& s) {
  if (s == "rooted") return CopyNormalization::kRootedInjection;
  if (s == "printed") return CopyNormalization::kPrintedRatio;
  throw ValidationError("normalization must be rooted or printed");
}

// Options actually in effect, for provenance.
Json resolved_config(const CLI::App& app) {
  Json j = Json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name == "--help" || name == "--config" || name.empty()) continue;
    auto res = opt->reduced_results();
    if (res.empty()) {
      const std::string def = opt->get_default_str();
      if (def.empty()) continue;
      j[name] = def;
    } else {
      j[name] = res.size() == 1 ? Json(res[0]) : Json(res);
    }
  }
  for (const CLI::App* sub : app.get_subcommands()) j[sub->get_name()] = resolved_config(*sub);
  return j;
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw ValidationError("cannot write " + c.output);
  out << text;
}

std::vector<Graph> family_graphs(const std::vector<std::string>& names, int merge_d) {
  require(!names.empty(), "--family needs at least one pattern");
  std::vector<Graph> fam;
  if (merge_d > 0) {
    for (const auto& fm : merged_family(read_pattern(names.front()), merge_d)) fam.push_back(fm.graph);
    return fam;
  }
  for (const auto& n : names) fam.push_back(read_pattern(n).graph);
  return fam;
}

Eigen::VectorXd broadcast(const std::vector<double>& v, std::size_t d, const char* what) {
  if (v.size() == 1 && d > 1) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), v[0]);
  require(v.size() == d, std::string(what) + " needs one value per family member");
  return vec(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"F-degree histograms, sandwich radii, maximum-entropy types and exact oracles"};
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Common c;
  app.add_option("--threads", c.threads, "Worker thread cap (0 = all cores)")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--output,-o", c.output, "Write the report here instead of stdout");
  app.add_option("--format", c.format, "json or csv (csv for delta sweeps in radii)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_flag("--timing", c.timing, "Add elapsed seconds to reports (breaks byte-identical output)");

  // fdeg
  std::string graph_path, pattern = "edge";
  auto* fdeg = app.add_subcommand("fdeg", "F-degree distribution of a graph");
  fdeg->add_option("--graph", graph_path, "Graph file")->required();
  fdeg->add_option("--pattern", pattern, "Rooted pattern name or file")->capture_default_str();

  // density
  auto* density = app.add_subcommand("density", "Subgraph density t(G, H)");
  density->add_option("--graph", graph_path, "Graph file")->required();
  density->add_option("--pattern", pattern, "Pattern name or file")->capture_default_str();

  // radii
  std::string dist = "uniform", norm = "rooted";
  std::vector<double> deltas{0.1};
  int d = 1;
  long long n = 0;
  double slack_constant = 10.0;
  auto* radii = app.add_subcommand("radii", "Moment vector and sandwich radii");
  radii->add_option("--p", dist, "Reference distribution file or \"uniform\"")->capture_default_str();
  radii->add_option("--pattern", pattern, "Rooted pattern")->capture_default_str();
  radii->add_option("--delta", deltas, "KS radius (several values give a sweep)")->capture_default_str();
  radii->add_option("--d", d, "Number of moments")->check(CLI::PositiveNumber)->capture_default_str();
  radii->add_option("--n", n, "Graph order for the finite-n slack");
  radii->add_option("--normalization", norm, "c_m normalization: rooted or printed")->capture_default_str();
  radii->add_option("--slack-constant", slack_constant, "Finite-n slack constant")->capture_default_str();

  // maxent
  std::vector<std::string> family{"edge"};
  std::vector<double> phi{0.5}, gamma{1.0};
  int k = 4, merge_d = 0;
  double eps = 0.0;
  bool with_radius = false;
  SolverOptions solver;
  auto* maxent = app.add_subcommand("maxent", "Solve the maximum-entropy program");
  maxent->add_option("--family", family, "Constraint patterns")->capture_default_str();
  maxent->add_option("--merge-d", merge_d, "Use F^1..F^d of the first --family pattern instead");
  maxent->add_option("--phi", phi, "Density targets")->capture_default_str();
  maxent->add_option("--gamma", gamma, "Radii")->capture_default_str();
  maxent->add_option("--k", k, "Type dimension")->check(CLI::Range(2, 64))->capture_default_str();
  maxent->add_option("--eps", eps, "Uniformity parameter; adds 5 eps^(1/r) to gamma")->capture_default_str();
  maxent->add_option("--starts", solver.starts, "Multistart count")->capture_default_str();
  maxent->add_flag("--radius", with_radius, "Also estimate the effective radius");

  // bounds
  std::string target = "hist";
  auto* bounds = app.add_subcommand("bounds", "Size bounds for histogram or densities sets");
  bounds->add_option("--target", target, "hist or densities")
      ->check(CLI::IsMember({"hist", "densities"}))
      ->capture_default_str();
  bounds->add_option("--p", dist, "Reference distribution (hist)")->capture_default_str();
  bounds->add_option("--pattern", pattern, "Rooted pattern (hist)")->capture_default_str();
  bounds->add_option("--delta", deltas, "KS radius (hist)")->capture_default_str();
  bounds->add_option("--d", d, "Number of moments (hist)")->capture_default_str();
  bounds->add_option("--family", family, "Constraint patterns (densities)")->capture_default_str();
  bounds->add_option("--phi", phi, "Density targets (densities)")->capture_default_str();
  bounds->add_option("--gamma", gamma, "Radii (densities)")->capture_default_str();
  bounds->add_option("--k", k, "Type dimension")->capture_default_str();
  bounds->add_option("--eps", eps, "Uniformity parameter")->capture_default_str();
  bounds->add_option("--n", n, "Graph order")->required();
  bounds->add_option("--normalization", norm, "c_m normalization")->capture_default_str();
  bounds->add_option("--starts", solver.starts, "Multistart count")->capture_default_str();

  // szemeredi
  DecomposeOptions dec;
  std::string mode = "auto";
  auto* szem = app.add_subcommand("szemeredi", "Regular decomposition and type extraction");
  szem->add_option("--graph", graph_path, "Graph file")->required();
  szem->add_option("--eps", eps, "Uniformity parameter")->required();
  szem->add_option("--k-cap", dec.k_cap, "Largest part count during refinement")->capture_default_str();
  szem->add_option("--initial-parts", dec.initial_parts, "Starting part count (0 = ceil(1/eps))")
      ->capture_default_str();
  szem->add_option("--mode", mode, "exact, heuristic or auto")
      ->check(CLI::IsMember({"exact", "heuristic", "auto"}))
      ->capture_default_str();
  szem->add_option("--trials", dec.uniformity.trials, "Heuristic random trials")->capture_default_str();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact small-n counts and audits");
  oracle->require_subcommand(1);
  bool unlabeled = false;
  std::uint64_t shard_begin = 0, shard_end = 0;
  std::optional<double> slack;
  auto scope_opts = [&](CLI::App* s) {
    s->add_option("--n", n, "Vertex count")->required();
    s->add_flag("--unlabeled", unlabeled, "Count isomorphism classes");
    s->add_option("--shard-begin", shard_begin, "First edge bitmask");
    s->add_option("--shard-end", shard_end, "One past the last edge bitmask (0 = all)");
  };
  auto* o_enum = oracle->add_subcommand("enumerate", "Count graphs in a scope");
  scope_opts(o_enum);
  auto* o_hist = oracle->add_subcommand("hist-count", "Exact size of a KS ball");
  scope_opts(o_hist);
  o_hist->add_option("--p", dist, "Reference distribution")->capture_default_str();
  o_hist->add_option("--pattern", pattern, "Rooted pattern")->capture_default_str();
  o_hist->add_option("--delta", deltas, "KS radius")->capture_default_str();
  auto* o_dens = oracle->add_subcommand("densities-count", "Exact size of a densities box");
  scope_opts(o_dens);
  o_dens->add_option("--family", family, "Patterns")->capture_default_str();
  o_dens->add_option("--merge-d", merge_d, "Use F^1..F^d of the first pattern");
  o_dens->add_option("--phi", phi, "Centers")->capture_default_str();
  o_dens->add_option("--gamma", gamma, "Radii")->capture_default_str();
  auto* o_sand = oracle->add_subcommand("sandwich", "Check both sandwich inclusions graph by graph");
  scope_opts(o_sand);
  o_sand->add_option("--p", dist, "Reference distribution")->capture_default_str();
  o_sand->add_option("--pattern", pattern, "Rooted pattern")->capture_default_str();
  o_sand->add_option("--delta", deltas, "KS radius")->capture_default_str();
  o_sand->add_option("--d", d, "Number of moments")->capture_default_str();
  o_sand->add_option("--slack", slack, "Finite-n slack (default 10 max c_m / n)");
  o_sand->add_option("--normalization", norm, "c_m normalization")->capture_default_str();
  std::string type_path;
  double constant = -1.0;
  int g = 50, trials = 10, uni_trials = 200;
  std::string within = "absent";
  auto* o_audit = oracle->add_subcommand("counting-audit", "Block-model counting audit");
  o_audit->add_option("--type", type_path, "Type file");
  o_audit->add_option("--constant", constant, "Use a constant type with this entry");
  o_audit->add_option("--k", k, "Type dimension with --constant")->capture_default_str();
  o_audit->add_option("--pattern", pattern, "Pattern")->capture_default_str();
  o_audit->add_option("--g", g, "Block size")->capture_default_str();
  o_audit->add_option("--trials", trials, "Samples")->capture_default_str();
  o_audit->add_option("--eps", eps, "Uniformity parameter")->required();
  o_audit->add_option("--uniformity-trials", uni_trials, "Random trials per pair audit")->capture_default_str();
  o_audit->add_option("--within", within, "absent or diagonal")
      ->check(CLI::IsMember({"absent", "diagonal"}))
      ->capture_default_str();
  auto* o_block = oracle->add_subcommand("block-sample", "Sample a block-model graph");
  o_block->add_option("--type", type_path, "Type file")->required();
  o_block->add_option("--g", g, "Block size")->capture_default_str();
  o_block->add_option("--within", within, "absent or diagonal")
      ->check(CLI::IsMember({"absent", "diagonal"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", {{"kind", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return kValidation;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    set_max_threads(c.threads);
    Json report;
    report["config"] = resolved_config(app);
    Json result;
    auto scope = [&] {
      EnumerationScope s;
      s.n = static_cast<int>(n);
      s.labeling = unlabeled ? Labeling::kUnlabeled : Labeling::kLabeled;
      s.shard_begin = shard_begin;
      s.shard_end = shard_end;
      return s;
    };
    auto single_delta = [&] {
      require(deltas.size() == 1, "give exactly one --delta");
      return deltas[0];
    };

    if (fdeg->parsed()) {
      report["command"] = "fdeg";
      const Graph G = read_graph(graph_path);
      const RootedPattern f = read_pattern(pattern);
      const auto deg = rooted_copy_counts(G, f);
      result["raw_degrees"] = deg.raw_degrees;
      result["b_max"] = deg.b_max.str();
      result["distribution"] = to_json(f_degree_distribution(G, f));
    } else if (density->parsed()) {
      report["command"] = "density";
      const Graph G = read_graph(graph_path);
      const RootedPattern f = read_pattern(pattern);
      const Rational t = subgraph_density_exact(G, f.graph);
      result["density"] = to_double(t);
      result["exact"] = t.str();
      result["copies"] = copy_count(G, f.graph).str();
    } else if (radii->parsed()) {
      report["command"] = "radii";
      const Distribution p = read_distribution(dist);
      const RootedPattern f = read_pattern(pattern);
      const auto nm = parse_norm(norm);
      result["moments"] = to_json(phi_vector(p, f, d, nm));
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "delta";
      for (int m = 1; m <= d; ++m) csv << ",gamma_" << m;
      for (int m = 1; m <= d; ++m) csv << ",beta_" << m;
      csv << ",beta_feasible,T\n";
      for (double delta : deltas) {
        SandwichRadii r = n > 0 ? sandwich_radii(p, f, d, delta, n, nm, slack_constant)
                                : SandwichRadii{delta, gamma_radii(p, f, d, delta, nm), 0.0,
                                                delta > 0 ? beta_radii(p, f, d, delta, nm) : BetaRadii{}};
        rows.push_back(to_json(r));
        csv << delta;
        for (int m = 0; m < d; ++m) csv << "," << r.gamma[m];
        for (int m = 0; m < d; ++m) csv << "," << (r.beta.beta.size() ? r.beta.beta[m] : 0.0);
        csv << "," << (r.beta.feasible ? 1 : 0) << "," << r.beta.T << "\n";
      }
      if (c.format == "csv") {
        emit(c, csv.str());
        return kOk;
      }
      result["radii"] = rows;
    } else if (maxent->parsed()) {
      report["command"] = "maxent";
      auto fam = family_graphs(family, merge_d);
      solver.seed = c.seed;
      auto spec = ConstraintSpec::make(fam, broadcast(phi, fam.size(), "--phi"),
                                       broadcast(gamma, fam.size(), "--gamma"), k, eps);
      auto sol = solve_max_entropy(spec.widened(), solver);
      result["solution"] = to_json(sol);
      result["counting_slack"] = spec.counting_slack();
      if (with_radius) {
        RadiusOptions ro;
        ro.seed = c.seed;
        result["radius"] = to_json(effective_radius(sol.S, fam, eps, static_cast<int>(fam.size()), ro));
      }
      if (!sol.feasible) {
        report["result"] = result;
        emit(c, report.dump(2) + "\n");
        std::cerr << Json{{"error", {{"kind", "infeasible"}, {"message", "no start met the constraints"}}}}.dump()
                  << "\n";
        return kInfeasible;
      }
    } else if (bounds->parsed()) {
      report["command"] = "bounds";
      solver.seed = c.seed;
      RadiusOptions ro;
      ro.seed = c.seed;
      if (target == "hist") {
        HistBoundsOptions ho;
        ho.norm = parse_norm(norm);
        ho.solver = solver;
        ho.radius = ro;
        result = to_json(hist_size_bounds(read_distribution(dist), read_pattern(pattern), single_delta(), d, k,
                                          eps, n, ho));
      } else {
        auto fam = family_graphs(family, merge_d);
        auto spec = ConstraintSpec::make(fam, broadcast(phi, fam.size(), "--phi"),
                                         broadcast(gamma, fam.size(), "--gamma"), k, eps);
        result = to_json(densities_size_bounds(spec, n, solver, ro));
      }
    } else if (szem->parsed()) {
      report["command"] = "szemeredi";
      dec.uniformity.seed = c.seed;
      dec.uniformity.mode = mode == "exact" ? UniformityMode::kExact
                            : mode == "heuristic" ? UniformityMode::kHeuristic
                                                  : UniformityMode::kAuto;
      result = to_json(regular_decompose(read_graph(graph_path), eps, dec));
    } else if (oracle->parsed()) {
      report["command"] = "oracle";
      if (o_enum->parsed()) {
        result["count"] = scope_size(scope());
      } else if (o_hist->parsed()) {
        result["count"] = exact_hist_count(read_distribution(dist), read_pattern(pattern), single_delta(), scope());
      } else if (o_dens->parsed()) {
        auto fam = family_graphs(family, merge_d);
        result["count"] =
            exact_densities_count(broadcast(phi, fam.size(), "--phi"), broadcast(gamma, fam.size(), "--gamma"),
                                  fam, scope());
      } else if (o_sand->parsed()) {
        SandwichOptions so;
        so.norm = parse_norm(norm);
        so.slack = slack;
        result = to_json(sandwich_check(read_distribution(dist), read_pattern(pattern), single_delta(), d,
                                        scope(), so));
      } else if (o_audit->parsed()) {
        Eigen::MatrixXd s;
        if (!type_path.empty()) {
          s = read_type(type_path).S;
        } else {
          require(constant >= 0.0 && constant <= 1.0, "give --type or --constant in [0,1]");
          s = Eigen::MatrixXd::Constant(k, k, constant);
          s.diagonal().setZero();
        }
        CountingAuditOptions ao;
        ao.seed = c.seed;
        ao.uniformity_trials = uni_trials;
        ao.within = within == "diagonal" ? WithinPart::kFromDiagonal : WithinPart::kAbsent;
        result = to_json(counting_lemma_audit(s, read_pattern(pattern).graph, g, trials, eps, ao));
      } else if (o_block->parsed()) {
        const Graph G = block_sample(read_type(type_path).S, g, c.seed,
                                     within == "diagonal" ? WithinPart::kFromDiagonal : WithinPart::kAbsent);
        result["graph"] = format_graph(G);
        result["n"] = G.order();
        result["edges"] = G.edge_count();
      }
      if (o_enum->parsed() || o_hist->parsed() || o_dens->parsed()) {
        result["scope"] = {{"n", n}, {"labeling", unlabeled ? "unlabeled" : "labeled"},
                           {"shard_begin", shard_begin}, {"shard_end", shard_end}};
        result["shards"] = max_threads();
      }
    }
    if (c.timing) {
      result["elapsed"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    report["result"] = result;
    emit(c, report.dump(2) + "\n");
    return kOk;
  } catch (const ValidationError& e) {
    std::cerr << Json{{"error", {{"kind", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return kValidation;
  } catch (const Infeasible& e) {
    std::cerr << Json{{"error", {{"kind", "infeasible"}, {"message", e.what()}}}}.dump() << "\n";
    return kInfeasible;
  } catch (const CapExceeded& e) {
    std::cerr << Json{{"error", {{"kind", "cap_exceeded"}, {"message", e.what()}}}}.dump() << "\n";
    return kCap;
  }
}
