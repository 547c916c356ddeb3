#pragma once

#include "fhist/counting.hpp"
#include "fhist/distribution.hpp"
#include "fhist/graph.hpp"
#include "fhist/maxent.hpp"
#include "fhist/oracle.hpp"
#include "fhist/pattern.hpp"
#include "fhist/radii.hpp"
#include "fhist/szemeredi.hpp"

#include <json.hpp>

#include <string>

namespace fhist {

using Json = nlohmann::json;

std::string read_file(const std::string& path);

// "n <count>" followed by "u v" lines, or {"n": .., "edges": [[u, v], ..]}.
// Lines starting with '#' are ignored.
Graph parse_graph(const std::string& text);
Graph read_graph(const std::string& path);
std::string format_graph(const Graph& g);

// Built-in name or a pattern file: a graph file with a "root" field (JSON)
// or a "root <r>" line (text).
RootedPattern parse_pattern(const std::string& text);
RootedPattern read_pattern(const std::string& name_or_path);

// {"type": "piecewise", "breaks": [..], "densities": [..]} or
// {"type": "empirical", "atoms": [..]}; "uniform" is built in.
Distribution parse_distribution(const Json& j);
Distribution read_distribution(const std::string& name_or_path);

// {"k": .., "eps": .., "S": [[..], ..]}
SzemerediType parse_type(const Json& j);
SzemerediType read_type(const std::string& path);
// Assignment array with 0 for the exceptional set.
Partition read_partition(const std::string& path);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Distribution& p);
Json to_json(const MomentReport& r);
Json to_json(const BetaRadii& b);
Json to_json(const SandwichRadii& r);
Json to_json(const MaxEntSolution& s);
Json to_json(const EffectiveRadius& r);
Json to_json(const SizeBoundsReport& r);
Json to_json(const SandwichVerdict& v);
Json to_json(const Partition& p);
Json to_json(const DecomposeResult& r);
Json to_json(const CountingAudit& a);
Json to_json(const JacobianReport& j);

}  // namespace fhist
