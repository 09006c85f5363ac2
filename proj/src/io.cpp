#include "zerodim/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

namespace zerodim {

Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
    if (j.is_number_unsigned()) return Rational(BigInt(j.get<unsigned long long>()));
    throw std::invalid_argument("expected a rational as \"p/q\" string or integer");
}

json rational_to_json(const Rational& r) {
    if (r.is_integer() && r.num().fits_longlong()) return json(r.num().to_longlong());
    return json(r.to_string());
}

FiniteMetricSpace space_from_json(const json& j) {
    std::string metric = j.value("metric", std::string("matrix"));
    if (metric == "bicube") return FiniteMetricSpace::bicube(j.at("lo").get<int>(), j.at("hi").get<int>());

    std::vector<std::string> ids;
    for (const auto& p : j.at("points"))
        ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    if (metric == "line") {
        std::vector<Rational> coords;
        for (const auto& c : j.at("coords")) coords.push_back(rational_from_json(c));
        return FiniteMetricSpace::line(std::move(ids), coords);
    }
    const auto& dist = j.at("dist");
    std::vector<std::vector<Rational>> d;
    for (const auto& row : dist) {
        d.emplace_back();
        for (const auto& v : row) d.back().push_back(rational_from_json(v));
    }
    return FiniteMetricSpace::from_matrix(std::move(ids), d);
}

json space_to_json(const FiniteMetricSpace& X) {
    json j;
    if (X.is_bicube()) {
        j["metric"] = "bicube";
        j["lo"] = X.bicube_lo();
        j["hi"] = X.bicube_hi();
        return j;
    }
    j["points"] = json::array();
    for (int i = 0; i < X.size(); ++i) j["points"].push_back(X.point_id(i));
    j["dist"] = json::array();
    for (int i = 0; i < X.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < X.size(); ++k) row.push_back(rational_to_json(X.dist(i, k)));
        j["dist"].push_back(std::move(row));
    }
    return j;
}

namespace {

json resolve_inline_or_path(const json& j) {
    if (j.is_string()) return load_json_file(j.get<std::string>());
    return j;
}

}  // namespace

MultiMap relation_from_json(const json& j) {
    auto src = std::make_shared<FiniteMetricSpace>(space_from_json(resolve_inline_or_path(j.at("source"))));
    auto tgt = std::make_shared<FiniteMetricSpace>(space_from_json(resolve_inline_or_path(j.at("target"))));
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j.at("pairs")) {
        std::string a = p.at(0).is_string() ? p.at(0).get<std::string>() : p.at(0).dump();
        std::string b = p.at(1).is_string() ? p.at(1).get<std::string>() : p.at(1).dump();
        int ia = src->point_index(a), ib = tgt->point_index(b);
        if (ia < 0 || ib < 0) throw std::invalid_argument("relation: unknown point id " + a + "/" + b);
        pairs.emplace_back(ia, ib);
    }
    return MultiMap(src, tgt, std::move(pairs));
}

json relation_to_json(const MultiMap& m) {
    json j;
    j["source"] = space_to_json(m.source());
    j["target"] = space_to_json(m.target());
    j["pairs"] = json::array();
    for (auto& [x, y] : m.pairs())
        j["pairs"].push_back({m.source().point_id(x), m.target().point_id(y)});
    return j;
}

Tower tower_from_json(const json& j) {
    std::vector<Rational> labels;
    for (const auto& l : j.at("levels")) labels.push_back(rational_from_json(l));
    std::map<std::string, int> level_of_label;
    for (std::size_t k = 0; k < labels.size(); ++k) level_of_label[labels[k].to_string()] = static_cast<int>(k);

    struct RawNode {
        std::string id, parent;
        int level;
    };
    std::vector<RawNode> raw;
    int min_level = static_cast<int>(labels.size());
    for (const auto& n : j.at("nodes")) {
        RawNode r;
        r.id = n.at("id").is_string() ? n.at("id").get<std::string>() : n.at("id").dump();
        Rational lab = rational_from_json(n.at("level"));
        auto it = level_of_label.find(lab.to_string());
        if (it == level_of_label.end())
            throw std::invalid_argument("tower: node level " + lab.to_string() + " not in the level list");
        r.level = it->second;
        if (n.contains("parent") && !n.at("parent").is_null())
            r.parent = n.at("parent").is_string() ? n.at("parent").get<std::string>() : n.at("parent").dump();
        min_level = std::min(min_level, r.level);
        raw.push_back(std::move(r));
    }
    if (raw.empty()) throw std::invalid_argument("tower: no nodes");

    std::map<std::string, std::pair<int, int>> by_id;  // id -> (level, pos)
    Tower::Data d;
    d.labels = labels;
    d.explicit_base = min_level;
    const int nexp = static_cast<int>(labels.size()) - min_level;
    d.parents.resize(nexp);
    d.names.resize(nexp);
    for (const auto& r : raw) {
        if (by_id.count(r.id)) throw std::invalid_argument("tower: duplicate node id " + r.id);
        int rel = r.level - min_level;
        by_id[r.id] = {r.level, static_cast<int>(d.names[rel].size())};
        d.names[rel].push_back(r.id);
        d.parents[rel].push_back(-1);
    }
    for (const auto& r : raw) {
        if (r.parent.empty()) continue;
        auto it = by_id.find(r.parent);
        if (it == by_id.end()) throw std::invalid_argument("tower: unknown parent id " + r.parent);
        if (it->second.first != r.level + 1)
            throw std::invalid_argument("tower: parent of " + r.id +
                                        " is not on the next level (level gap or multi-step link)");
        d.parents[r.level - min_level][by_id[r.id].second] = it->second.second;
    }

    // counted layers: explicit "layers" entries or flavors derived from bundles
    std::vector<std::map<std::string, int>> flavor_by_deg0(std::max(min_level, 0));
    d.layers.resize(min_level);
    if (min_level > 0) {
        d.layers[0].push_back(Tower::Flavor{BigInt(1), {}});
        flavor_by_deg0[0]["1"] = 0;
        if (j.contains("layers")) {
            std::vector<const json*> per_level(min_level, nullptr);
            for (const auto& layer : j.at("layers")) {
                int lev = layer.at("level").get<int>();
                if (lev <= 0 || lev >= min_level)
                    throw std::invalid_argument("tower: layer level must sit below the explicit nodes");
                per_level[lev] = &layer;
            }
            for (int k = 1; k < min_level; ++k) {
                if (!per_level[k])
                    throw std::invalid_argument("tower: missing layer for counted level " +
                                                std::to_string(k));
                for (const auto& f : per_level[k]->at("flavors")) {
                    Tower::Flavor fl;
                    BigInt declared = BigInt::parse(f.at("deg0").is_string()
                                                        ? f.at("deg0").get<std::string>()
                                                        : f.at("deg0").dump());
                    for (const auto& ch : f.at("children")) {
                        BigInt cd = BigInt::parse(ch.at(0).is_string() ? ch.at(0).get<std::string>()
                                                                       : ch.at(0).dump());
                        BigInt cnt = BigInt::parse(ch.at(1).is_string() ? ch.at(1).get<std::string>()
                                                                        : ch.at(1).dump());
                        auto it = flavor_by_deg0[k - 1].find(cd.to_string());
                        if (it == flavor_by_deg0[k - 1].end())
                            throw std::invalid_argument("tower: layer " + std::to_string(k) +
                                                        " references unknown child deg0 " +
                                                        cd.to_string());
                        fl.children.emplace_back(it->second, cnt);
                    }
                    BigInt computed(0);
                    for (auto& [cf, cnt] : fl.children)
                        computed += cnt * d.layers[k - 1][cf].deg0;
                    if (computed != declared)
                        throw std::invalid_argument("tower: declared deg0 " + declared.to_string() +
                                                    " does not match children total " +
                                                    computed.to_string());
                    fl.deg0 = computed;
                    flavor_by_deg0[k][computed.to_string()] = static_cast<int>(d.layers[k].size());
                    d.layers[k].push_back(std::move(fl));
                }
            }
        } else if (min_level >= 2) {
            // derive level-1 flavors from the bundle fiber values; deeper
            // counted structure needs explicit layers
            if (min_level > 2)
                throw std::invalid_argument(
                    "tower: counted levels below level 2 need an explicit \"layers\" table");
        }
    }

    if (j.contains("bundles")) {
        if (min_level == 0)
            throw std::invalid_argument("tower: bundles given but all levels are explicit");
        d.bundles.resize(d.names[0].size());
        const int fiber_level = min_level - 1;
        for (const auto& b : j.at("bundles")) {
            std::string node = b.at("node").is_string() ? b.at("node").get<std::string>()
                                                        : b.at("node").dump();
            auto it = by_id.find(node);
            if (it == by_id.end() || it->second.first != min_level)
                throw std::invalid_argument("tower: bundle on unknown or non-base node " + node);
            auto& slot = d.bundles[it->second.second];
            for (const auto& fib : b.at("fibers")) {
                BigInt deg0 = BigInt::parse(fib.at(0).is_string() ? fib.at(0).get<std::string>()
                                                                  : fib.at(0).dump());
                BigInt mult = BigInt::parse(fib.at(1).is_string() ? fib.at(1).get<std::string>()
                                                                  : fib.at(1).dump());
                auto fit = flavor_by_deg0[fiber_level].find(deg0.to_string());
                int flavor;
                if (fit != flavor_by_deg0[fiber_level].end()) {
                    flavor = fit->second;
                } else if (fiber_level == 1 && !j.contains("layers")) {
                    // level-1 fiber of size v: v unit children
                    Tower::Flavor fl;
                    fl.deg0 = deg0;
                    fl.children.emplace_back(0, deg0);
                    flavor = static_cast<int>(d.layers[1].size());
                    flavor_by_deg0[1][deg0.to_string()] = flavor;
                    d.layers[1].push_back(std::move(fl));
                } else if (fiber_level == 0) {
                    if (!deg0.is_one())
                        throw std::invalid_argument("tower: level-0 fibers must have deg0 = 1");
                    flavor = 0;
                } else {
                    throw std::invalid_argument("tower: fiber deg0 " + deg0.to_string() +
                                                " has no flavor at level " +
                                                std::to_string(fiber_level));
                }
                slot.emplace_back(flavor, mult);
            }
        }
    } else if (min_level > 0) {
        throw std::invalid_argument("tower: counted base level without bundles");
    }

    return Tower::validate(std::move(d));
}

json tower_to_json(const Tower& T) {
    json j;
    j["levels"] = json::array();
    for (const Rational& l : T.level_labels()) j["levels"].push_back(rational_to_json(l));
    j["nodes"] = json::array();
    for (int v = 0; v < T.node_count(); ++v) {
        json n;
        n["id"] = T.node_name(v);
        n["level"] = rational_to_json(T.level_label(T.node_level(v)));
        if (T.parent(v) >= 0)
            n["parent"] = T.node_name(T.parent(v));
        else
            n["parent"] = nullptr;
        j["nodes"].push_back(std::move(n));
    }
    const int eb = T.explicit_base();
    if (eb > 0) {
        j["bundles"] = json::array();
        for (int p = 0; p < T.level_size(eb); ++p) {
            json b;
            b["node"] = T.node_name(T.node_at(eb, p));
            b["fibers"] = json::array();
            for (auto& [f, cnt] : T.bundle(T.node_at(eb, p)))
                b["fibers"].push_back({T.layer(eb - 1)[f].deg0.to_string(), cnt.to_string()});
            j["bundles"].push_back(std::move(b));
        }
        if (eb >= 2) {
            // flavors are referenced by deg0 value in the file format
            for (int k = 1; k < eb; ++k) {
                std::map<std::string, int> seen;
                for (const auto& fl : T.layer(k))
                    if (++seen[fl.deg0.to_string()] > 1)
                        throw std::invalid_argument(
                            "tower: counted layers with duplicate deg0 values cannot be "
                            "serialized (flavors are keyed by deg0 in the file format)");
            }
            j["layers"] = json::array();
            for (int k = 1; k < eb; ++k) {
                json layer;
                layer["level"] = k;
                layer["flavors"] = json::array();
                for (const auto& fl : T.layer(k)) {
                    json f;
                    f["deg0"] = fl.deg0.to_string();
                    f["children"] = json::array();
                    for (auto& [cf, cnt] : fl.children)
                        f["children"].push_back(
                            {T.layer(k - 1)[cf].deg0.to_string(), cnt.to_string()});
                    layer["flavors"].push_back(std::move(f));
                }
                j["layers"].push_back(std::move(layer));
            }
        }
    }
    j["flags"] = {{"pruned", T.pruned()}, {"homogeneous", T.homogeneous()}};
    return j;
}

GroupChain chain_from_json(const json& j) {
    GroupChain c;
    for (const auto& o : j.at("orders"))
        c.orders.push_back(BigInt::parse(o.is_string() ? o.get<std::string>() : o.dump()));
    c.validate();
    return c;
}

json chain_to_json(const GroupChain& c) {
    json j;
    j["orders"] = json::array();
    for (const BigInt& o : c.orders) j["orders"].push_back(o.to_string());
    return j;
}

TowerMapFile tower_map_from_json(const json& j) {
    TowerMapFile f;
    f.source = std::make_shared<Tower>(tower_from_json(resolve_inline_or_path(j.at("source"))));
    f.target = std::make_shared<Tower>(tower_from_json(resolve_inline_or_path(j.at("target"))));
    f.map.source = f.source;
    f.map.target = f.target;
    f.map.level_map.assign(f.source->level_count(), -1);
    for (const auto& lm : j.at("level_map")) {
        Rational sl = rational_from_json(lm.at(0));
        Rational tl = rational_from_json(lm.at(1));
        int si = -1, ti = -1;
        for (int k = 0; k < f.source->level_count(); ++k)
            if (f.source->level_label(k) == sl) si = k;
        for (int k = 0; k < f.target->level_count(); ++k)
            if (f.target->level_label(k) == tl) ti = k;
        if (si < 0 || ti < 0) throw std::invalid_argument("tower map: unknown level label");
        f.map.level_map[si] = ti;
    }
    f.map.node_map.assign(f.source->node_count(), -1);
    for (const auto& nm : j.at("node_map")) {
        std::string a = nm.at(0).is_string() ? nm.at(0).get<std::string>() : nm.at(0).dump();
        std::string b = nm.at(1).is_string() ? nm.at(1).get<std::string>() : nm.at(1).dump();
        int va = f.source->node_by_name(a), vb = f.target->node_by_name(b);
        if (va < 0 || vb < 0) throw std::invalid_argument("tower map: unknown node " + a + "/" + b);
        f.map.node_map[va] = vb;
    }
    for (int v = 0; v < f.source->node_count(); ++v)
        if (f.map.node_map[v] < 0)
            throw std::invalid_argument("tower map: node map is not total on explicit nodes");
    for (int k = 0; k < f.source->level_count(); ++k)
        if (f.map.level_map[k] < 0)
            throw std::invalid_argument("tower map: level map is not total");
    return f;
}

json tower_map_to_json(const TowerMap& m) {
    json j;
    j["source"] = tower_to_json(*m.source);
    j["target"] = tower_to_json(*m.target);
    j["level_map"] = json::array();
    for (int k = 0; k < m.source->level_count(); ++k)
        j["level_map"].push_back({rational_to_json(m.source->level_label(k)),
                                  rational_to_json(m.target->level_label(m.level_map[k]))});
    j["node_map"] = json::array();
    for (int v = 0; v < m.source->node_count(); ++v)
        j["node_map"].push_back({m.source->node_name(v), m.target->node_name(m.node_map[v])});
    return j;
}

json certificate_to_json(const UniformityCertificate& c) {
    json j;
    j["grid"] = json::array();
    j["omega_fwd"] = json::array();
    j["omega_inv"] = json::array();
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        j["grid"].push_back(rational_to_json(c.grid[i]));
        j["omega_fwd"].push_back(rational_to_json(c.omega_fwd[i]));
        j["omega_inv"].push_back(rational_to_json(c.omega_inv[i]));
    }
    j["total"] = c.total;
    j["surjective"] = c.surjective;
    j["macro_fwd"] = c.macro_fwd;
    j["macro_inv"] = c.macro_inv;
    j["micro_fwd"] = c.micro_fwd;
    j["micro_inv"] = c.micro_inv;
    j["macro_equivalence"] = c.macro_equivalence;
    j["bi_equivalence"] = c.bi_equivalence;
    return j;
}

json key_lemma_to_json(const KeyLemmaResult& r) {
    json j;
    j["K"] = r.K;
    j["pieces"] = json::array();
    for (const auto& p : r.pieces) {
        json pj;
        pj["level"] = p.level;
        pj["deg0"] = p.deg0_total.to_string();
        pj["ratio"] = p.ratio.to_string();
        pj["quotas"] = json::array();
        for (const auto& q : p.quotas)
            pj["quotas"].push_back(
                {q.weight.to_string(), q.members.to_string(), q.d.to_string()});
        pj["edges"] = json::array();
        for (const auto& e : p.edges) pj["edges"].push_back({e.piece, e.multiplicity.to_string()});
        j["pieces"].push_back(std::move(pj));
    }
    j["steps"] = json::array();
    for (const auto& st : r.steps) {
        json sj;
        sj["level"] = st.level;
        sj["plateau_deg0"] = st.plateau_deg0.to_string();
        sj["ratio"] = st.ratio.to_string();
        sj["residual_shapes"] = st.residual.size();
        j["steps"].push_back(std::move(sj));
    }
    j["image_counts"] = json::array();
    for (const auto& c : r.image_counts) j["image_counts"].push_back(c.to_string());
    j["audit_log"] = r.audit_log;
    return j;
}

json profile_to_json(const PrimeProfile& p) {
    json j;
    j["exponents"] = json::object();
    for (auto& [prime, e] : p.exponents) j["exponents"][prime.to_string()] = e;
    j["open_ended"] = p.open_ended;
    return j;
}

PrimeProfile profile_from_json(const json& j) {
    PrimeProfile p;
    const json& ex = j.contains("exponents") ? j.at("exponents") : j;
    for (auto it = ex.begin(); it != ex.end(); ++it) {
        int e = it.value().is_string() ? (it.value().get<std::string>() == "inf" ? -1 : std::stoi(it.value().get<std::string>()))
                                       : it.value().get<int>();
        p.exponents[BigInt::parse(it.key())] = e;
    }
    p.open_ended = j.contains("open_ended") && j.at("open_ended").get<bool>();
    return p;
}

json schedule_to_json(const Schedule& s) {
    json j;
    j["lambdas"] = json::array();
    for (auto& l : s.lambdas) j["lambdas"].push_back(rational_to_json(l));
    j["ms"] = s.ms;
    j["neg_lambdas"] = json::array();
    for (auto& l : s.neg_lambdas) j["neg_lambdas"].push_back(rational_to_json(l));
    j["neg_ms"] = s.neg_ms;
    return j;
}

std::vector<Rational> parse_grid(const std::string& spec) {
    std::vector<Rational> out;
    if (spec.rfind("dyadic:", 0) == 0) {
        std::string range = spec.substr(7);
        auto dots = range.find("..");
        if (dots == std::string::npos)
            throw std::invalid_argument("grid: dyadic range must look like dyadic:-2..4");
        long long a = std::stoll(range.substr(0, dots));
        long long b = std::stoll(range.substr(dots + 2));
        if (a > b) throw std::invalid_argument("grid: empty dyadic range");
        for (long long e = a; e <= b; ++e) out.push_back(Rational::pow2(e));
        return out;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto comma = spec.find(',', start);
        std::string tok = spec.substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start);
        if (!tok.empty()) out.push_back(Rational::parse(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("grid: no scales given");
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace zerodim
