#ifndef ZERODIM_IO_HPP
#define ZERODIM_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "zerodim/key_lemma.hpp"
#include "zerodim/morphism.hpp"
#include "zerodim/multimap.hpp"
#include "zerodim/synthesis.hpp"
#include "zerodim/tower.hpp"

namespace zerodim {

using json = nlohmann::json;

Rational rational_from_json(const json& j);
json rational_to_json(const Rational& r);

/// {"points": [...], "dist": [["p/q", ...], ...]} or
/// {"points": [...], "coords": [...], "metric": "line"} or
/// {"metric": "bicube", "lo": -2, "hi": 2}.
FiniteMetricSpace space_from_json(const json& j);
json space_to_json(const FiniteMetricSpace& X);

/// {"source": <space|path>, "target": <space|path>, "pairs": [[sid, tid]]}.
MultiMap relation_from_json(const json& j);
json relation_to_json(const MultiMap& m);

/// {"levels": [...], "nodes": [{"id","level","parent"}],
///  "bundles": [{"node","fibers": [[deg0, mult]]}],
///  "layers": [{"level", "flavors": [{"deg0","children": [[deg0, count]]}]}]}.
Tower tower_from_json(const json& j);
json tower_to_json(const Tower& T);

/// {"orders": ["1","2","6"]}.
GroupChain chain_from_json(const json& j);
json chain_to_json(const GroupChain& c);

/// {"source": <tower>, "target": <tower>, "level_map": [[s,t]],
///  "node_map": [[sname, tname]]}.
struct TowerMapFile {
    TowerPtr source, target;
    TowerMap map;
};
TowerMapFile tower_map_from_json(const json& j);
json tower_map_to_json(const TowerMap& m);

json certificate_to_json(const UniformityCertificate& c);
json key_lemma_to_json(const KeyLemmaResult& r);
json profile_to_json(const PrimeProfile& p);
PrimeProfile profile_from_json(const json& j);
json schedule_to_json(const Schedule& s);

/// "dyadic:a..b" for {2^a, ..., 2^b}, otherwise a comma list of rationals.
std::vector<Rational> parse_grid(const std::string& spec);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace zerodim

#endif
