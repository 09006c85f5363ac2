#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zerodim/io.hpp"
#include "zerodim/key_lemma.hpp"
#include "zerodim/morphism.hpp"
#include "zerodim/synthesis.hpp"

using namespace zerodim;

namespace {

long long materialize_cutoff() {
    const char* env = std::getenv("ZERODIM_MATERIALIZE_CUTOFF");
    if (!env) return 65536;
    return std::stoll(env);
}

ScalingFunction parse_scaling(const std::string& spec, const Tower& T) {
    if (spec.empty()) {
        // identity on the labels when they are positive, dyadic otherwise
        bool positive = true;
        for (const Rational& l : T.level_labels()) positive = positive && Rational(0) < l;
        if (positive) return ScalingFunction::identity(T.level_labels());
        return ScalingFunction::dyadic(T.level_count());
    }
    if (spec == "dyadic") return ScalingFunction::dyadic(T.level_count());
    ScalingFunction f;
    f.values = parse_grid(spec);
    f.validate(T.level_count());
    return f;
}

void emit(const std::string& path, const json& j) {
    if (!path.empty()) write_json_file(path, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarse invariants of zero-dimensional metric spaces"};
    app.require_subcommand(1);

    std::string space_path, space_path_b, tower_path, tower_path_b, relation_path, map_path,
        chain_path, chain_path_b, raw_path, out_path, grid_spec, grid_spec_b, scaling_spec,
        scaling_spec_b, level_map_spec, mode_str = "macro", profile_str, scale_str, delta_str,
        eps_str, sep_str;
    int depth = 0, down_depth = 0, base_index = 0, length = 1, cutoff = 3;
    bool iso_mode = false, vertex_transitive = false;

    auto* c_components = app.add_subcommand("components", "s-connected components of a space");
    c_components->add_option("--space", space_path)->required();
    c_components->add_option("--scale", scale_str)->required();
    c_components->add_option("--out", out_path);

    auto* c_capacity = app.add_subcommand("capacity", "theta/Theta capacities");
    c_capacity->add_option("--space", space_path)->required();
    c_capacity->add_option("--delta", delta_str)->required();
    c_capacity->add_option("--eps", eps_str)->required();
    c_capacity->add_option("--out", out_path);

    auto* c_report = app.add_subcommand("report", "dimension-zero window report");
    c_report->add_option("--space", space_path)->required();
    c_report->add_option("--scales", grid_spec)->required();
    c_report->add_option("--out", out_path);

    auto* c_net = app.add_subcommand("net", "maximal separated net and largeness radius");
    c_net->add_option("--space", space_path)->required();
    c_net->add_option("--sep", sep_str)->required();
    c_net->add_option("--out", out_path);

    auto* c_osc = app.add_subcommand("oscillation", "oscillation table / uniformity certificate");
    c_osc->add_option("--relation", relation_path)->required();
    c_osc->add_option("--delta", delta_str);
    c_osc->add_option("--grid", grid_spec);
    c_osc->add_option("--out", out_path);

    auto* c_tbuild = app.add_subcommand("tower-build", "canonical / chain / raw tower");
    c_tbuild->add_option("--space", space_path);
    c_tbuild->add_option("--levels", grid_spec);
    c_tbuild->add_option("--chain", chain_path);
    c_tbuild->add_option("--raw", raw_path);
    c_tbuild->add_option("--out", out_path);

    auto* c_tbound = app.add_subcommand("tower-boundary", "boundary ultrametric of a tower");
    c_tbound->add_option("--tower", tower_path)->required();
    c_tbound->add_option("--scaling", scaling_spec);
    c_tbound->add_option("--out", out_path);

    auto* c_tdeg = app.add_subcommand("tower-degrees", "degree profile of a tower");
    c_tdeg->add_option("--tower", tower_path)->required();
    c_tdeg->add_option("--out", out_path);

    auto* c_embed = app.add_subcommand("embed", "tower embedding / isomorphism construction");
    c_embed->add_option("--source", tower_path)->required();
    c_embed->add_option("--target", tower_path_b)->required();
    c_embed->add_option("--level-map", level_map_spec);
    c_embed->add_flag("--iso", iso_mode);
    c_embed->add_option("--out", out_path);

    auto* c_immerse = app.add_subcommand("immerse", "classify a tower map and its boundary");
    c_immerse->add_option("--map", map_path)->required();
    c_immerse->add_option("--source-scaling", scaling_spec);
    c_immerse->add_option("--target-scaling", scaling_spec_b);
    c_immerse->add_option("--out", out_path);

    auto* c_extract = app.add_subcommand("extract", "immersion extraction from a boundary relation");
    c_extract->add_option("--source-tower", tower_path)->required();
    c_extract->add_option("--target-tower", tower_path_b)->required();
    c_extract->add_option("--relation", relation_path)->required();
    c_extract->add_option("--length", length)->required();
    c_extract->add_option("--source-scaling", scaling_spec);
    c_extract->add_option("--target-scaling", scaling_spec_b);
    c_extract->add_option("--out", out_path);

    auto* c_key = app.add_subcommand("keylemma", "Key Lemma immersion on counted towers");
    c_key->add_option("--source", tower_path)->required();
    c_key->add_option("--target", tower_path_b)->required();
    c_key->add_option("--depth", depth)->required();
    c_key->add_option("--out", out_path);

    auto* c_synth = app.add_subcommand("synthesize", "certified equivalence pipelines");
    c_synth->add_option("--space", space_path)->required();
    c_synth->add_option("--grid", grid_spec)->required();
    c_synth->add_option("--depth", depth)->required();
    c_synth->add_option("--mode", mode_str)->check(CLI::IsMember({"macro", "bi", "micro"}));
    c_synth->add_option("--down", down_depth);
    c_synth->add_option("--base", base_index);
    c_synth->add_option("--space-b", space_path_b);  // micro mode: the second space
    c_synth->add_option("--grid-b", grid_spec_b);
    c_synth->add_option("--out", out_path);

    auto* c_check = app.add_subcommand("check", "characterization conditions on a window");
    c_check->add_option("--space", space_path)->required();
    c_check->add_option("--grid", grid_spec)->required();
    c_check->add_option("--mode", mode_str)
        ->check(CLI::IsMember({"universal", "micro", "macro", "bi"}));
    c_check->add_option("--out", out_path);

    auto* c_classify = app.add_subcommand("classify", "f_X classification of a pair");
    std::vector<std::string> chain_pair;
    c_classify->add_option("--chain", chain_pair)->expected(0, 2);
    c_classify->add_option("--chain-a", chain_path);
    c_classify->add_option("--chain-b", chain_path_b);
    c_classify->add_option("--space-a", space_path);
    c_classify->add_option("--space-b", space_path_b);
    c_classify->add_option("--window-a", grid_spec);
    c_classify->add_option("--window-b", grid_spec_b);
    c_classify->add_flag("--vertex-transitive", vertex_transitive);
    c_classify->add_option("--out", out_path);

    auto* c_zf = app.add_subcommand("zf", "Z_f chains and prime profiles");
    c_zf->add_option("--profile", profile_str);
    c_zf->add_option("--chain", chain_path);
    c_zf->add_option("--space", space_path);
    c_zf->add_option("--window", grid_spec);
    c_zf->add_option("--cutoff", cutoff);
    c_zf->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_components) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            Partition p = components(X, Rational::parse(scale_str));
            json j;
            j["scale"] = rational_to_json(p.scale);
            j["blocks"] = json::array();
            for (const auto& blk : p.blocks) {
                json b = json::array();
                for (int v : blk) b.push_back(X.point_id(v));
                j["blocks"].push_back(std::move(b));
            }
            j["mesh"] = rational_to_json(mesh(p));
            emit(out_path, j);
            std::cout << p.block_count() << " components, mesh " << mesh(p) << "\n";
        } else if (*c_capacity) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            auto [theta, Theta] = capacity(X, Rational::parse(delta_str), Rational::parse(eps_str));
            json j{{"theta", theta.to_string()}, {"Theta", Theta.to_string()}};
            emit(out_path, j);
            std::cout << "theta=" << theta << " Theta=" << Theta << "\n";
        } else if (*c_report) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            DimensionZeroReport rep = dimension_zero_report(X, parse_grid(grid_spec));
            json j;
            j["rows"] = json::array();
            for (const auto& r : rep.rows) {
                json row{{"delta", rational_to_json(r.delta)},
                         {"mesh", rational_to_json(r.mesh_value)},
                         {"witnessed", r.witnessed}};
                if (r.witnessed) row["witness_eps"] = rational_to_json(r.witness_eps);
                j["rows"].push_back(std::move(row));
            }
            j["all_witnessed"] = rep.all_witnessed;
            j["verdict"] = "window-relative";
            emit(out_path, j);
            std::cout << (rep.all_witnessed ? "witnessed on the window" : "NOT witnessed") << "\n";
            return rep.all_witnessed ? 0 : 1;
        } else if (*c_net) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            Rational S = Rational::parse(sep_str);
            std::vector<int> net = separated_net(X, S);
            Rational r = largeness_radius(X, net);
            json j;
            j["net"] = json::array();
            for (int v : net) j["net"].push_back(X.point_id(v));
            j["largeness_radius"] = rational_to_json(r);
            emit(out_path, j);
            std::cout << "net of " << net.size() << " points, largeness radius " << r << "\n";
        } else if (*c_osc) {
            MultiMap rel = relation_from_json(load_json_file(relation_path));
            json j;
            if (!grid_spec.empty()) {
                UniformityCertificate cert = uniformity_certificate(rel, parse_grid(grid_spec));
                j = certificate_to_json(cert);
                emit(out_path, j);
                std::cout << "macro_equivalence=" << (cert.macro_equivalence ? "yes" : "no")
                          << " bi=" << (cert.bi_equivalence ? "yes" : "no") << "\n";
            } else {
                Rational d = Rational::parse(delta_str);
                Rational w = oscillation(rel, d);
                j = json{{"delta", rational_to_json(d)}, {"omega", rational_to_json(w)}};
                emit(out_path, j);
                std::cout << "omega(" << d << ") = " << w << "\n";
            }
        } else if (*c_tbuild) {
            Tower T = [&]() {
                if (!chain_path.empty())
                    return group_chain_tower(chain_from_json(load_json_file(chain_path)),
                                             materialize_cutoff());
                if (!raw_path.empty()) return tower_from_json(load_json_file(raw_path));
                if (space_path.empty() || grid_spec.empty())
                    throw std::invalid_argument(
                        "tower-build needs --chain, --raw, or --space with --levels");
                FiniteMetricSpace X = space_from_json(load_json_file(space_path));
                return canonical_tower(X, parse_grid(grid_spec)).tower;
            }();
            emit(out_path, tower_to_json(T));
            std::cout << T.node_count() << " explicit nodes, " << T.level_count() << " levels, "
                      << (T.pruned() ? "pruned" : "not pruned") << ", "
                      << (T.homogeneous() ? "homogeneous" : "not homogeneous") << "\n";
        } else if (*c_tbound) {
            Tower T = tower_from_json(load_json_file(tower_path));
            FiniteMetricSpace B = boundary(T, parse_scaling(scaling_spec, T));
            emit(out_path, space_to_json(B));
            std::cout << B.size() << " boundary points, diameter " << B.diameter() << "\n";
        } else if (*c_tdeg) {
            Tower T = tower_from_json(load_json_file(tower_path));
            DegreeProfile prof = degree_profile(T);
            json j;
            j["entries"] = json::array();
            for (int l = 0; l < prof.levels(); ++l)
                for (int lam = 0; lam <= l; ++lam)
                    j["entries"].push_back({{"lambda", rational_to_json(T.level_label(lam))},
                                            {"level", rational_to_json(T.level_label(l))},
                                            {"deg", prof.deg(lam, l).to_string()},
                                            {"Deg", prof.Deg(lam, l).to_string()}});
            emit(out_path, j);
            std::cout << prof.levels() << " levels profiled\n";
        } else if (*c_embed) {
            auto S = std::make_shared<Tower>(tower_from_json(load_json_file(tower_path)));
            auto T = std::make_shared<Tower>(tower_from_json(load_json_file(tower_path_b)));
            std::vector<int> lm;
            if (level_map_spec.empty()) {
                for (int k = 0; k < S->level_count(); ++k) lm.push_back(k);
            } else {
                std::size_t pos = 0;
                while (pos < level_map_spec.size()) {
                    auto colon = level_map_spec.find(':', pos);
                    auto comma = level_map_spec.find(',', pos);
                    if (comma == std::string::npos) comma = level_map_spec.size();
                    int s = std::stoi(level_map_spec.substr(pos, colon - pos));
                    int t = std::stoi(level_map_spec.substr(colon + 1, comma - colon - 1));
                    lm.resize(std::max<std::size_t>(lm.size(), s + 1), -1);
                    lm[s] = t;
                    pos = comma + 1;
                }
            }
            TowerMap phi = build_embedding(S, T, lm, iso_mode);
            TowerMapFlags flags = classify_map(phi);
            emit(out_path, tower_map_to_json(phi));
            std::cout << "embedding=" << flags.embedding << " isomorphism=" << flags.isomorphism
                      << "\n";
            return (iso_mode ? flags.isomorphism : flags.embedding) ? 0 : 1;
        } else if (*c_immerse) {
            TowerMapFile f = tower_map_from_json(load_json_file(map_path));
            TowerMapFlags flags = classify_map(f.map);
            json j{{"level_preserving", flags.level_preserving},
                   {"monotone", flags.monotone},
                   {"embedding", flags.embedding},
                   {"immersion", flags.immersion},
                   {"isomorphism", flags.isomorphism}};
            if (flags.monotone && flags.level_preserving && f.source->fully_explicit() &&
                f.target->fully_explicit() && f.source->pruned() && f.target->pruned()) {
                BoundaryPropertyReport rep = check_boundary_properties(
                    f.map, parse_scaling(scaling_spec, *f.source),
                    parse_scaling(scaling_spec_b, *f.target));
                j["boundary"] = certificate_to_json(rep.certificate);
                j["forward_level_bound"] = rep.forward_level_bound;
                j["immersion_inverse_bound"] = rep.immersion_inverse_bound;
                j["surjective"] = rep.surjective;
            }
            emit(out_path, j);
            std::cout << "immersion=" << flags.immersion << "\n";
            return flags.immersion ? 0 : 1;
        } else if (*c_extract) {
            auto S = std::make_shared<Tower>(tower_from_json(load_json_file(tower_path)));
            auto T = std::make_shared<Tower>(tower_from_json(load_json_file(tower_path_b)));
            ScalingFunction fS = parse_scaling(scaling_spec, *S);
            ScalingFunction fT = parse_scaling(scaling_spec_b, *T);
            json rj = load_json_file(relation_path);
            auto srcB = std::make_shared<FiniteMetricSpace>(boundary(*S, fS));
            auto tgtB = std::make_shared<FiniteMetricSpace>(boundary(*T, fT));
            std::vector<std::pair<int, int>> pairs;
            for (const auto& p : rj.at("pairs")) {
                std::string a = p.at(0).get<std::string>(), b = p.at(1).get<std::string>();
                if (srcB->point_index(a) < 0 || tgtB->point_index(b) < 0)
                    throw std::invalid_argument("extract: unknown base node " + a + "/" + b);
                pairs.emplace_back(srcB->point_index(a), tgtB->point_index(b));
            }
            MultiMap Phi(srcB, tgtB, std::move(pairs));
            ImmersionExtraction ex = extract_immersion(Phi, S, T, fS, fT, length);
            json j = tower_map_to_json(ex.map);
            j["source_levels"] = ex.source_levels;
            j["target_levels"] = ex.target_levels;
            emit(out_path, j);
            std::cout << "extracted window of " << ex.source_levels.size() << " levels\n";
        } else if (*c_key) {
            Tower T = tower_from_json(load_json_file(tower_path));
            Tower H = tower_from_json(load_json_file(tower_path_b));
            KeyLemmaResult r = main_immersion(T, H, depth);
            KeyLemmaAudit audit = audit_immersion(r, T, H);
            json j = key_lemma_to_json(r);
            j["audit"] = {{"pass", audit.pass},
                          {"pieces_checked", audit.pieces_checked},
                          {"failures", audit.failures}};
            emit(out_path, j);
            std::cout << "pieces=" << r.pieces.size() << " audit=" << (audit.pass ? "pass" : "FAIL")
                      << "\n";
            return audit.pass ? 0 : 1;
        } else if (*c_synth) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            if (mode_str == "micro") {
                if (space_path_b.empty() || grid_spec_b.empty())
                    throw std::invalid_argument("micro mode needs --space-b and --grid-b");
                auto Xp = std::make_shared<FiniteMetricSpace>(std::move(X));
                auto Yp = std::make_shared<FiniteMetricSpace>(
                    space_from_json(load_json_file(space_path_b)));
                MicroSynthesisResult m = synthesize_micro_equivalence(
                    Xp, Yp, parse_grid(grid_spec), parse_grid(grid_spec_b), down_depth);
                json j;
                j["relation"] = relation_to_json(*m.relation);
                j["certificate"] = certificate_to_json(m.certificate);
                j["log"] = m.log;
                emit(out_path, j);
                bool ok = m.certificate.micro_fwd && m.certificate.micro_inv;
                std::cout << "micro certificate " << (ok ? "pass" : "FAIL") << "\n";
                return ok ? 0 : 1;
            }
            SynthesisResult r = mode_str == "bi"
                                    ? synthesize_bi_equivalence(X, parse_grid(grid_spec), base_index,
                                                                depth, down_depth)
                                    : synthesize_macro_equivalence(X, parse_grid(grid_spec), depth);
            json j;
            j["schedule"] = schedule_to_json(r.schedule);
            j["relation"] = relation_to_json(*r.relation);
            j["certificate"] = certificate_to_json(r.certificate);
            j["log"] = r.log;
            if (r.immersion) j["immersion"] = key_lemma_to_json(*r.immersion);
            emit(out_path, j);
            bool ok = mode_str == "bi" ? r.certificate.bi_equivalence
                                       : r.certificate.macro_equivalence;
            std::cout << "certificate " << (ok ? "pass" : "FAIL") << ", domain "
                      << r.domain_points.size() << " points\n";
            return ok ? 0 : 1;
        } else if (*c_check) {
            FiniteMetricSpace X = space_from_json(load_json_file(space_path));
            CharMode mode = mode_str == "universal" ? CharMode::Universal
                            : mode_str == "micro"   ? CharMode::Micro
                            : mode_str == "bi"      ? CharMode::Bi
                                                    : CharMode::Macro;
            CharacterizationReport rep = characterization_check(X, parse_grid(grid_spec), mode);
            json j;
            j["mode"] = mode_str;
            j["pass"] = rep.pass;
            j["detail"] = rep.detail;
            j["entries"] = json::array();
            for (const auto& e : rep.entries)
                j["entries"].push_back({{"delta", rational_to_json(e.delta)},
                                        {"eps", rational_to_json(e.eps)},
                                        {"theta", e.theta.to_string()},
                                        {"Theta", e.Theta.to_string()}});
            emit(out_path, j);
            std::cout << (rep.pass ? "pass" : "FAIL") << ": " << rep.detail << "\n";
            return rep.pass ? 0 : 1;
        } else if (*c_classify) {
            if (chain_pair.size() == 2) {
                chain_path = chain_pair[0];
                chain_path_b = chain_pair[1];
            }
            ClassifyResult r = [&]() {
                if (!chain_path.empty() && !chain_path_b.empty())
                    return classify_pair(chain_from_json(load_json_file(chain_path)),
                                         chain_from_json(load_json_file(chain_path_b)));
                FiniteMetricSpace X = space_from_json(load_json_file(space_path));
                FiniteMetricSpace Y = space_from_json(load_json_file(space_path_b));
                return classify_pair(X, parse_grid(grid_spec), Y, parse_grid(grid_spec_b),
                                     vertex_transitive);
            }();
            json j;
            j["equivalent"] = r.equivalent;
            j["profile_a"] = profile_to_json(r.profile_a);
            j["profile_b"] = profile_to_json(r.profile_b);
            j["certificate"] = r.certificate;
            if (!r.equivalent) j["witness_prime"] = r.witness_prime.to_string();
            if (r.witness) j["witness_map"] = tower_map_to_json(*r.witness);
            emit(out_path, j);
            std::cout << (r.equivalent ? "equivalent (window evidence)" : "distinct") << "\n";
            return r.equivalent ? 0 : 1;
        } else if (*c_zf) {
            json j;
            if (!profile_str.empty()) {
                GroupChain c = zf_chain(profile_from_json(json::parse(profile_str)), cutoff);
                j = chain_to_json(c);
                emit(out_path, j);
                std::cout << "orders:";
                for (const BigInt& o : c.orders) std::cout << " " << o;
                std::cout << "\n";
            } else if (!chain_path.empty()) {
                PrimeProfile p = chain_profile(chain_from_json(load_json_file(chain_path)));
                j = profile_to_json(p);
                emit(out_path, j);
                std::cout << j["exponents"].dump() << "\n";
            } else if (!space_path.empty()) {
                FiniteMetricSpace X = space_from_json(load_json_file(space_path));
                PrimeProfile p = f_invariant(X, parse_grid(grid_spec));
                j = profile_to_json(p);
                emit(out_path, j);
                std::cout << j["exponents"].dump() << "\n";
            } else {
                throw std::invalid_argument("zf needs --profile, --chain, or --space with --window");
            }
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "precondition"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << json{{"error", "construction"}, {"message", e.what()}}.dump() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "io"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
}
