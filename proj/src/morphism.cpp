#include "zerodim/morphism.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace zerodim {

namespace {

bool level_map_ok(const TowerMap& phi) {
    const auto& lm = phi.level_map;
    if (static_cast<int>(lm.size()) != phi.source->level_count()) return false;
    for (std::size_t i = 0; i < lm.size(); ++i) {
        if (lm[i] < 0 || lm[i] >= phi.target->level_count()) return false;
        if (i > 0 && lm[i - 1] >= lm[i]) return false;
    }
    return true;
}

bool is_ancestor(const Tower& T, int anc, int v) {
    while (T.node_level(v) < T.node_level(anc)) v = T.parent(v);
    return v == anc;
}

}  // namespace

TowerMapFlags classify_map(const TowerMap& phi) {
    const Tower& S = *phi.source;
    const Tower& T = *phi.target;
    if (static_cast<int>(phi.node_map.size()) != S.node_count())
        throw std::invalid_argument("classify_map: node map is not total on explicit nodes");
    for (int v : phi.node_map)
        if (v < 0 || v >= T.node_count())
            throw std::invalid_argument("classify_map: node map out of range");

    TowerMapFlags flags;
    flags.level_preserving = level_map_ok(phi);
    if (flags.level_preserving)
        for (int v = 0; v < S.node_count() && flags.level_preserving; ++v)
            if (T.node_level(phi.node_map[v]) != phi.level_map[S.node_level(v)])
                flags.level_preserving = false;

    flags.monotone = true;
    for (int v = 0; v < S.node_count() && flags.monotone; ++v) {
        int p = S.parent(v);
        if (p < 0) continue;
        int fv = phi.node_map[v], fp = phi.node_map[p];
        if (fv == fp || T.node_level(fp) <= T.node_level(fv) || !is_ancestor(T, fp, fv))
            flags.monotone = false;
    }

    if (!flags.level_preserving || !flags.monotone) return flags;

    std::vector<char> seen(T.node_count(), 0);
    bool injective = true;
    for (int v = 0; v < S.node_count(); ++v) {
        if (seen[phi.node_map[v]]) injective = false;
        seen[phi.node_map[v]] = 1;
    }
    flags.embedding = injective;

    bool surjective_nodes = true;
    for (int w = 0; w < T.node_count(); ++w) surjective_nodes = surjective_nodes && seen[w];
    flags.isomorphism = injective && surjective_nodes &&
                        static_cast<int>(phi.level_map.size()) == T.level_count();

    // immersion: merged same-level nodes must share a parent (meet one level up)
    flags.immersion = true;
    std::map<int, std::vector<int>> preimage;
    for (int v = 0; v < S.node_count(); ++v) preimage[phi.node_map[v]].push_back(v);
    for (auto& [w, group] : preimage) {
        if (group.size() < 2) continue;
        if (S.node_level(group[0]) == S.top_level()) continue;  // single top anyway
        int par = S.parent(group[0]);
        for (int v : group)
            if (S.parent(v) != par) {
                flags.immersion = false;
                break;
            }
        if (!flags.immersion) break;
    }
    return flags;
}

BoundaryMap boundary_map(const TowerMap& phi, const ScalingFunction& fS, const ScalingFunction& fT) {
    const Tower& S = *phi.source;
    const Tower& T = *phi.target;
    if (!S.fully_explicit() || !T.fully_explicit())
        throw std::invalid_argument("boundary_map: bundled lowest level");
    if (!S.pruned() || !T.pruned())
        throw std::invalid_argument("boundary_map: towers must be pruned");
    BoundaryMap out;
    out.source_boundary = std::make_shared<FiniteMetricSpace>(boundary(S, fS));
    out.target_boundary = std::make_shared<FiniteMetricSpace>(boundary(T, fT));
    // target base positions under each target node
    for (int p = 0; p < S.level_size(0); ++p) {
        int image = phi.node_map[S.node_at(0, p)];
        for (int q = 0; q < T.level_size(0); ++q)
            if (is_ancestor(T, image, T.node_at(0, q))) out.pairs.emplace_back(p, q);
    }
    return out;
}

BoundaryPropertyReport check_boundary_properties(const TowerMap& phi, const ScalingFunction& fS,
                                                 const ScalingFunction& fT) {
    const Tower& S = *phi.source;
    const Tower& T = *phi.target;
    BoundaryMap bm = boundary_map(phi, fS, fT);
    MultiMap rel = bm.relation();

    std::vector<Rational> grid = fS.values;
    grid.insert(grid.end(), fT.values.begin(), fT.values.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    while (!grid.empty() && !(Rational(0) < grid.front())) grid.erase(grid.begin());

    BoundaryPropertyReport rep;
    rep.certificate = uniformity_certificate(rel, grid);

    TowerMapFlags flags = classify_map(phi);
    MultiMap inv = rel.inverse();
    rep.forward_level_bound = true;
    for (int nu = 0; nu < S.level_count(); ++nu) {
        Rational w = oscillation_partial(rel, fS.values[nu]);
        if (!(w <= fT.values[phi.level_map[nu]])) {
            rep.forward_level_bound = false;
            break;
        }
    }
    rep.immersion_inverse_bound = true;
    if (flags.immersion) {
        for (int nu = 0; nu + 1 < S.level_count(); ++nu) {
            Rational w = oscillation_partial(inv, fT.values[phi.level_map[nu]]);
            if (!(w <= fS.values[nu + 1])) {
                rep.immersion_inverse_bound = false;
                break;
            }
        }
    }

    rep.image_down_cofinal = true;
    for (int q = 0; q < T.level_size(0) && rep.image_down_cofinal; ++q) {
        bool hit = false;
        for (int v = 0; v < S.node_count() && !hit; ++v) hit = phi.node_map[v] == T.node_at(0, q);
        rep.image_down_cofinal = hit;
    }
    rep.surjective = rel.surjective();
    return rep;
}

namespace {

// descendants of v at target level `lev`, in position order
std::vector<int> cone_slice(const Tower& T, int v, int lev) {
    std::vector<int> frontier{v};
    for (int k = T.node_level(v); k > lev; --k) {
        std::vector<int> next;
        for (int u : frontier)
            for (int c : T.children(u)) next.push_back(c);
        frontier = std::move(next);
    }
    std::sort(frontier.begin(), frontier.end(),
              [&](int a, int b) { return T.node_pos(a) < T.node_pos(b); });
    return frontier;
}

}  // namespace

TowerMap build_embedding(const TowerPtr& S, const TowerPtr& T, const std::vector<int>& level_map,
                         bool isomorphism_mode) {
    if (!S->fully_explicit() || !T->fully_explicit())
        throw std::invalid_argument("build_embedding: explicit towers required");
    if (static_cast<int>(level_map.size()) != S->level_count())
        throw std::invalid_argument("build_embedding: level map size mismatch");
    for (std::size_t i = 0; i < level_map.size(); ++i) {
        if (level_map[i] < 0 || level_map[i] >= T->level_count())
            throw std::invalid_argument("build_embedding: level map out of range");
        if (i > 0 && level_map[i - 1] >= level_map[i])
            throw std::invalid_argument("build_embedding: level map must be strictly monotone");
    }
    if (isomorphism_mode &&
        (level_map.front() != 0 || level_map.back() != T->top_level() ||
         static_cast<int>(level_map.size()) != T->level_count()))
        throw std::invalid_argument("build_embedding: isomorphism mode needs a surjective level map");

    DegreeProfile ps = degree_profile(*S);
    DegreeProfile pt = degree_profile(*T);
    for (int lam = 0; lam + 1 < S->level_count(); ++lam) {
        if (!(ps.Deg(lam, lam + 1) <= pt.deg(level_map[lam], level_map[lam + 1])))
            throw std::invalid_argument("build_embedding: degree inequality fails at source level " +
                                        std::to_string(lam) + " -> " + std::to_string(lam + 1));
        if (isomorphism_mode && !(ps.deg(lam, lam + 1) >= pt.Deg(level_map[lam], level_map[lam + 1])))
            throw std::invalid_argument(
                "build_embedding: isomorphism degree inequality fails at source level " +
                std::to_string(lam) + " -> " + std::to_string(lam + 1));
    }

    TowerMap phi;
    phi.source = S;
    phi.target = T;
    phi.level_map = level_map;
    phi.node_map.assign(S->node_count(), -1);

    // top-down, children assigned to the first unused cone members in id order
    phi.node_map[S->node_at(S->top_level(), 0)] = T->node_at(level_map.back(), 0);
    for (int lev = S->top_level(); lev > 0; --lev) {
        for (int p = 0; p < S->level_size(lev); ++p) {
            int x = S->node_at(lev, p);
            int fx = phi.node_map[x];
            std::vector<int> pool = cone_slice(*T, fx, level_map[lev - 1]);
            const auto& kids = S->children(x);
            if (kids.size() > pool.size())
                throw std::logic_error("build_embedding: target cone too small (construction bug)");
            for (std::size_t i = 0; i < kids.size(); ++i) phi.node_map[kids[i]] = pool[i];
        }
    }
    return phi;
}

IsoDecision decide_homogeneous_iso(const TowerPtr& S, const TowerPtr& T) {
    if (!S->homogeneous() || !T->homogeneous())
        throw std::invalid_argument("decide_homogeneous_iso: towers must be homogeneous");
    IsoDecision out;
    if (S->level_count() != T->level_count()) {
        out.mismatch_step = -2;
        return out;
    }
    DegreeProfile ps = degree_profile(*S);
    DegreeProfile pt = degree_profile(*T);
    for (int lam = 0; lam + 1 < S->level_count(); ++lam)
        if (ps.deg(lam, lam + 1) != pt.deg(lam, lam + 1)) {
            out.mismatch_step = lam;
            return out;
        }
    std::vector<int> idmap(S->level_count());
    for (int i = 0; i < S->level_count(); ++i) idmap[i] = i;
    out.iso = build_embedding(S, T, idmap, /*isomorphism_mode=*/true);
    return out;
}

ImmersionExtraction extract_immersion(const MultiMap& Phi, const TowerPtr& S, const TowerPtr& T,
                                      const ScalingFunction& fS, const ScalingFunction& fT,
                                      int length) {
    if (length < 1) throw std::invalid_argument("extract_immersion: length must be positive");
    if (!S->fully_explicit() || !T->fully_explicit() || !S->pruned() || !T->pruned())
        throw std::invalid_argument("extract_immersion: pruned explicit towers required");
    if (Phi.source().size() != S->level_size(0) || Phi.target().size() != T->level_size(0))
        throw std::invalid_argument("extract_immersion: relation does not match the boundaries");
    if (!Phi.total() || !Phi.inverse().total())
        throw std::invalid_argument("extract_immersion: relation must be total both ways");

    // Greedy level pairs stay below the tops; the top pair needs no
    // oscillation condition (single nodes both sides) and is appended last.
    MultiMap inv = Phi.inverse();
    std::vector<int> A, B;
    int alpha = 0;
    int beta_floor = 0;
    for (int n = 0; n < length; ++n) {
        if (n > 0) {
            // alpha_{n+1}: smallest level with fS(alpha) >= omega_{Phi^-1}(fT(beta_n))
            Rational need = oscillation(inv, fT.values[B.back()]);
            int a = A.back() + 1;
            while (a < S->top_level() && fS.values[a] < need) ++a;
            if (a >= S->top_level())
                throw std::invalid_argument("extract_immersion: source window exhausted at step " +
                                            std::to_string(n));
            alpha = a;
        }
        Rational need = oscillation(Phi, fS.values[alpha]);
        int b = beta_floor;
        while (b < T->top_level() && fT.values[b] < need) ++b;
        if (b >= T->top_level())
            throw std::invalid_argument("extract_immersion: target window exhausted at step " +
                                        std::to_string(n));
        A.push_back(alpha);
        B.push_back(b);
        beta_floor = b + 1;
    }
    A.push_back(S->top_level());
    B.push_back(T->top_level());

    ImmersionExtraction out;
    out.source_levels = A;
    out.target_levels = B;
    out.source_window = std::make_shared<Tower>(level_subtower(*S, A));
    out.target_window = std::make_shared<Tower>(level_subtower(*T, B));

    TowerMap phi;
    phi.source = out.source_window;
    phi.target = out.target_window;
    phi.level_map.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) phi.level_map[i] = static_cast<int>(i);
    phi.node_map.assign(out.source_window->node_count(), -1);

    // phi(s) = unique node at the paired level whose cone contains Phi(cone of s)
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (int p = 0; p < S->level_size(A[i]); ++p) {
            int v = S->node_at(A[i], p);
            std::vector<int> base = cone_slice(*S, v, 0);
            int m = -1;
            for (int u : base)
                for (int q : Phi.image(S->node_pos(u))) {
                    int tb = T->node_at(0, q);
                    m = m < 0 ? tb : T->meet(m, tb);
                }
            if (m < 0 || T->node_level(m) > B[i])
                throw std::invalid_argument(
                    "extract_immersion: image does not fit under a single node at step " +
                    std::to_string(i));
            while (T->node_level(m) < B[i]) m = T->parent(m);
            int sv = out.source_window->node_by_name(S->node_name(v));
            int tv = out.target_window->node_by_name(T->node_name(m));
            phi.node_map[sv] = tv;
        }
    }
    out.map = std::move(phi);

    TowerMapFlags flags = classify_map(out.map);
    if (!flags.monotone || !flags.level_preserving || !flags.immersion)
        throw std::logic_error("extract_immersion: output failed the immersion classifier");

    // window relation equality: d(phi) == (d id_T)^-1 o Phi o d id_S
    {
        std::vector<std::pair<int, int>> lhs, rhs;
        const Tower& SW = *out.source_window;
        const Tower& TW = *out.target_window;
        for (int p = 0; p < SW.level_size(0); ++p) {
            int image = out.map.node_map[SW.node_at(0, p)];
            for (int q = 0; q < TW.level_size(0); ++q)
                if (is_ancestor(TW, image, TW.node_at(0, q))) lhs.emplace_back(p, q);
        }
        for (int p = 0; p < SW.level_size(0); ++p) {
            int orig = S->node_by_name(SW.node_name(SW.node_at(0, p)));
            for (int u : cone_slice(*S, orig, 0))
                for (int q : Phi.image(S->node_pos(u))) {
                    int tb = T->node_at(0, q);
                    int anc = tb;
                    while (T->node_level(anc) < B[0]) anc = T->parent(anc);
                    int tw = TW.node_by_name(T->node_name(anc));
                    rhs.emplace_back(p, TW.node_pos(tw));
                }
        }
        std::sort(lhs.begin(), lhs.end());
        lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());
        if (lhs != rhs)
            throw std::logic_error("extract_immersion: boundary relation mismatch (construction bug)");
    }
    return out;
}

}  // namespace zerodim
