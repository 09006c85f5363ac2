#include "zerodim/synthesis.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zerodim {

namespace {

std::pair<BigInt, BigInt> capacity_from_partitions(const Partition& pd, const Partition& pe) {
    std::vector<long long> counts(pe.blocks.size(), 0);
    std::vector<int> stamp(pd.blocks.size(), -1);
    for (std::size_t b = 0; b < pe.blocks.size(); ++b)
        for (int v : pe.blocks[b]) {
            int db = pd.block_of[v];
            if (stamp[db] != static_cast<int>(b)) {
                stamp[db] = static_cast<int>(b);
                ++counts[b];
            }
        }
    long long lo = counts.empty() ? 0 : counts[0], hi = lo;
    for (long long c : counts) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return {BigInt(lo), BigInt(hi)};
}

// minimal m with 2^m >= v (v >= 1)
long long ceil_log2(const BigInt& v) {
    if (v <= BigInt(1)) return 0;
    BigInt w = v - BigInt(1);
    return static_cast<long long>(w.bit_length());
}

long long floor_log2(const BigInt& v) {
    return static_cast<long long>(v.bit_length()) - 1;
}

}  // namespace

CharacterizationReport characterization_check(const FiniteMetricSpace& X,
                                              const std::vector<Rational>& grid, CharMode mode) {
    if (grid.size() < 3)
        throw std::invalid_argument("characterization_check: degenerate window (fewer than 3 scales)");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(Rational(0) < grid[k]))
            throw std::invalid_argument("characterization_check: scales must be positive");
        if (k > 0 && !(grid[k - 1] < grid[k]))
            throw std::invalid_argument("characterization_check: scales must be strictly increasing");
    }
    const int g = static_cast<int>(grid.size());
    std::vector<Partition> parts;
    parts.reserve(g);
    for (const Rational& s : grid) parts.push_back(components(X, s));

    CharacterizationReport rep;
    rep.mode = mode;
    rep.grid = grid;
    std::vector<std::vector<std::pair<BigInt, BigInt>>> cap(g);
    for (int i = 0; i < g; ++i) {
        cap[i].resize(g);
        for (int j = i; j < g; ++j) {
            cap[i][j] = capacity_from_partitions(parts[i], parts[j]);
            rep.entries.push_back({grid[i], grid[j], cap[i][j].first, cap[i][j].second});
        }
    }
    rep.mesh_witnessed = dimension_zero_report(X, grid).all_witnessed;
    rep.capacity_finite = true;

    for (int i = 0; i + 2 <= g - 1 + 1 && i <= g - 2; ++i)
        if (cap[i][g - 1].first > cap[i][g - 2].first) rep.macro_growth_deltas.push_back(i);
    for (int j = 1; j < g; ++j)
        if (cap[0][j].first > cap[1][j].first) rep.micro_growth_epsilons.push_back(j);

    std::ostringstream detail;
    switch (mode) {
        case CharMode::Universal:
            rep.pass = rep.mesh_witnessed && rep.capacity_finite;
            detail << "Theta finite on all grid pairs; mesh "
                   << (rep.mesh_witnessed ? "witnessed" : "NOT witnessed");
            break;
        case CharMode::Macro:
            rep.pass = rep.mesh_witnessed && !rep.macro_growth_deltas.empty();
            detail << "top-edge theta growth at " << rep.macro_growth_deltas.size()
                   << " delta scales";
            break;
        case CharMode::Micro:
            rep.pass = rep.mesh_witnessed && !rep.micro_growth_epsilons.empty();
            detail << "bottom-edge theta growth at " << rep.micro_growth_epsilons.size()
                   << " eps scales";
            break;
        case CharMode::Bi:
            rep.pass = rep.mesh_witnessed &&
                       static_cast<int>(rep.macro_growth_deltas.size()) == g - 1 &&
                       static_cast<int>(rep.micro_growth_epsilons.size()) == g - 1;
            detail << "growth at " << rep.macro_growth_deltas.size() << "/" << (g - 1)
                   << " top edges and " << rep.micro_growth_epsilons.size() << "/" << (g - 1)
                   << " bottom edges";
            break;
    }
    detail << " (window-relative verdict)";
    rep.detail = detail.str();
    return rep;
}

Schedule build_schedule(const FiniteMetricSpace& X, const std::vector<Rational>& grid,
                        CharMode mode, int up_depth, int down_depth, int base_index) {
    CharacterizationReport rep = characterization_check(X, grid, mode);
    if (!rep.pass)
        throw std::invalid_argument("build_schedule: characterization conditions fail on the window (" +
                                    rep.detail + ")");
    if (base_index < 0 || base_index >= static_cast<int>(grid.size()))
        throw std::invalid_argument("build_schedule: base index out of range");

    Schedule s;
    const Rational& lam0 = grid[base_index];
    s.lambdas.push_back(lam0);
    s.ms.push_back(0);
    Partition p0 = components(X, lam0);

    auto single_block_at = [&](const Rational& lam) { return components(X, lam).block_count() == 1; };

    for (int k = 1; k <= up_depth; ++k) {
        BigInt target1 = BigInt::pow(BigInt(4), k + 5) * BigInt::pow2(s.ms.back());
        bool found = false;
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            if (!(s.lambdas.back() < grid[gi])) continue;
            Partition pk = components(X, grid[gi]);
            auto [theta, Theta] = capacity_from_partitions(p0, pk);
            if (theta >= target1 && (k < up_depth || pk.block_count() == 1)) {
                s.lambdas.push_back(grid[gi]);
                s.ms.push_back(ceil_log2(BigInt::pow(BigInt(4), k) * Theta));
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument(
                "build_schedule: window exhausted at k=" + std::to_string(k) +
                " (need theta_{l0}^{l} >= " + target1.to_string() + " on the grid)");
    }

    if (mode == CharMode::Bi || down_depth > 0) {
        // make sure a top scale exists for the (v) condition at k = 0
        if (up_depth == 0) {
            bool found = false;
            for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                if (!(lam0 < grid[gi])) continue;
                if (single_block_at(grid[gi])) {
                    Partition ptop = components(X, grid[gi]);
                    auto [theta, Theta] = capacity_from_partitions(p0, ptop);
                    (void)theta;
                    s.lambdas.push_back(grid[gi]);
                    s.ms.push_back(floor_log2(Theta));
                    s.top_appended = true;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::invalid_argument(
                    "build_schedule: no single-block scale above the base on the grid");
        }
        Rational lam_cur = lam0;
        long long m_cur = 0;
        Rational lam_up = s.lambdas[1];
        for (int j = 1; j <= down_depth; ++j) {
            Partition pcur = components(X, lam_cur);
            Partition pup = components(X, lam_up);
            auto [tu, Theta_up] = capacity_from_partitions(pcur, pup);
            (void)tu;
            long long gap = ceil_log2(Theta_up);
            bool found = false;
            for (std::size_t gi = grid.size(); gi-- > 0;) {
                if (!(grid[gi] < lam_cur)) continue;
                Partition pdown = components(X, grid[gi]);
                auto [theta_dn, Td] = capacity_from_partitions(pdown, pcur);
                (void)Td;
                if (theta_dn >= BigInt::pow2(gap)) {
                    s.neg_lambdas.push_back(grid[gi]);
                    s.neg_ms.push_back(m_cur - gap);
                    lam_up = lam_cur;
                    lam_cur = grid[gi];
                    m_cur -= gap;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::invalid_argument("build_schedule: window exhausted downward at step " +
                                            std::to_string(j));
        }
    }
    return s;
}

ScheduleAudit audit_schedule(const FiniteMetricSpace& X, const Schedule& s) {
    ScheduleAudit audit;
    audit.pass = true;
    auto check = [&](bool ok, const std::string& line) {
        audit.pass = audit.pass && ok;
        audit.checks.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    };
    const Rational& lam0 = s.lambdas[0];
    int nominal_up = static_cast<int>(s.lambdas.size()) - (s.top_appended ? 1 : 0);
    for (int k = 1; k < nominal_up; ++k) {
        auto [theta, Theta] = capacity(X, lam0, s.lambdas[k]);
        BigInt lhs1 = BigInt::pow(BigInt(4), k + 5) * BigInt::pow2(s.ms[k - 1]);
        check(theta >= lhs1, "theta_{l0}^{l" + std::to_string(k) + "} = " + theta.to_string() +
                                 " >= 4^{k+5} 2^{m_{k-1}} = " + lhs1.to_string());
        BigInt rhs2 = BigInt::pow(BigInt(4), k) * Theta;
        check(BigInt::pow2(s.ms[k]) >= rhs2, "2^{m_" + std::to_string(k) + "} >= 4^k Theta = " +
                                                 rhs2.to_string());
    }
    // downward (v): Theta^{l_{k+1}}_{l_k} <= 2^{m_k - m_{k-1}} <= theta^{l_k}_{l_{k-1}}
    Rational lam_up = s.lambdas.size() > 1 ? s.lambdas[1] : s.lambdas[0];
    Rational lam_cur = lam0;
    long long m_cur = 0;
    for (std::size_t j = 0; j < s.neg_lambdas.size(); ++j) {
        auto [t_up, Theta_up] = capacity(X, lam_cur, lam_up);
        (void)t_up;
        long long gap = m_cur - s.neg_ms[j];
        auto [theta_dn, T_dn] = capacity(X, s.neg_lambdas[j], lam_cur);
        (void)T_dn;
        check(Theta_up <= BigInt::pow2(gap) && BigInt::pow2(gap) <= theta_dn,
              "Theta = " + Theta_up.to_string() + " <= 2^{" + std::to_string(gap) +
                  "} <= theta = " + theta_dn.to_string() + " at downward step " + std::to_string(j + 1));
        lam_up = lam_cur;
        lam_cur = s.neg_lambdas[j];
        m_cur = s.neg_ms[j];
    }
    return audit;
}

namespace {

Tower binary_window_tower(const std::vector<long long>& ms) {
    const int levels = static_cast<int>(ms.size());
    long long top_m = ms.back();
    if (top_m - ms.front() > 22)
        throw std::invalid_argument("binary window: explicit size over 2^22 nodes");
    Tower::Data d;
    d.explicit_base = 0;
    d.parents.resize(levels);
    for (int k = 0; k < levels; ++k) {
        d.labels.push_back(Rational(ms[k]));
        long long width = 1ll << (top_m - ms[k]);
        long long step = k + 1 < levels ? (1ll << (ms[k + 1] - ms[k])) : 1;
        for (long long p = 0; p < width; ++p)
            d.parents[k].push_back(k + 1 < levels ? static_cast<int>(p / step) : -1);
    }
    return Tower::validate(std::move(d));
}

SpacePtr restrict_space(const FiniteMetricSpace& X, const std::vector<int>& points) {
    std::vector<std::string> ids;
    ids.reserve(points.size());
    for (int p : points) ids.push_back(X.point_id(p));
    std::vector<std::vector<Rational>> d(points.size(), std::vector<Rational>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) d[i][j] = X.dist(points[i], points[j]);
    return std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::from_matrix(std::move(ids), d));
}

SpacePtr one_point_space(const std::string& id) {
    return std::make_shared<FiniteMetricSpace>(
        FiniteMetricSpace::from_matrix({id}, {{Rational(0)}}));
}

// The K = 0 plateau members of a two-level explicit tower: the engine groups
// interchangeable base members, so (id, count) stands for the first `count`
// children of the top in position order (the accumulation's tie-break).
std::vector<int> base_plateau_positions(const Tower& T, const KeyLemmaResult& key) {
    BigInt total(0);
    for (auto& [id, cnt] : key.steps[0].plateau_members) total += cnt;
    long long n = total.to_longlong();
    std::vector<int> out;
    out.reserve(n);
    const auto& kids = T.children(T.node_at(T.top_level(), 0));
    for (long long i = 0; i < n; ++i) out.push_back(T.node_pos(kids[i]));
    std::sort(out.begin(), out.end());
    return out;
}

// Balanced downward extension through aligned explicit towers. phi maps
// source nodes to target nodes, defined on (a part of) source level `lev`
// and above; extends through level 0 and audits the surjection
// feasibilities.
void extend_downward(const Tower& S, const Tower& Tt, std::vector<int>& phi, int lev,
                     std::vector<std::string>& log) {
    for (int k = lev; k >= 1; --k) {
        // group covered sources by target
        std::map<int, std::vector<int>> pre;
        for (int p = 0; p < S.level_size(k); ++p) {
            int v = S.node_at(k, p);
            if (phi[v] >= 0) pre[phi[v]].push_back(v);
        }
        long long worst_share = 0;
        for (auto& [y, xs] : pre) {
            const std::vector<int>& tkids = Tt.children(y);
            if (xs.size() > tkids.size())
                throw std::logic_error(
                    "downward extension: |phi^{-1}(y)| exceeds deg(y) at source level " +
                    std::to_string(k));
            // psi_y : pred(y) ->> preimage, balanced round robin
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                std::vector<int> share;
                for (std::size_t j = xi; j < tkids.size(); j += xs.size()) share.push_back(tkids[j]);
                const std::vector<int>& skids = S.children(xs[xi]);
                if (skids.size() < share.size())
                    throw std::logic_error(
                        "downward extension: deg(x) below its target share at source level " +
                        std::to_string(k));
                worst_share = std::max(worst_share, static_cast<long long>(share.size()));
                for (std::size_t j = 0; j < skids.size(); ++j)
                    phi[skids[j]] = share[j % share.size()];
            }
        }
        log.push_back("extend level " + std::to_string(k) + " -> " + std::to_string(k - 1) +
                      ": targets covered = " + std::to_string(pre.size()) +
                      ", max share = " + std::to_string(worst_share));
    }
}

}  // namespace

SynthesisResult synthesize_macro_equivalence(const FiniteMetricSpace& X,
                                             const std::vector<Rational>& grid, int depth) {
    SynthesisResult out;
    out.schedule = build_schedule(X, grid, CharMode::Macro, depth);
    out.log.push_back("stage schedule: " + std::to_string(out.schedule.lambdas.size()) + " scales");

    if (depth == 0) {
        out.domain_points.resize(X.size());
        for (int i = 0; i < X.size(); ++i) out.domain_points[i] = i;
        out.domain = restrict_space(X, out.domain_points);
        out.target_boundary = one_point_space("b0");
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < X.size(); ++i) pairs.emplace_back(i, 0);
        out.relation = std::make_shared<MultiMap>(out.domain, out.target_boundary, std::move(pairs));
        out.certificate = uniformity_certificate(*out.relation, grid);
        out.log.push_back("stage immersion: trivial one-level window");
        return out;
    }

    CanonicalTower ct = canonical_tower(X, out.schedule.lambdas);
    out.log.push_back("stage canonical tower: " + std::to_string(ct.tower.node_count()) + " nodes");
    Tower H = binary_window_tower(out.schedule.ms);
    KeyLemmaResult key = main_immersion(ct.tower, H, depth - 1);
    KeyLemmaAudit ka = audit_immersion(key, ct.tower, H);
    if (!ka.pass) {
        std::string msg = "stage immersion: audit failed:";
        for (auto& f : ka.failures) msg += " " + f;
        throw std::logic_error(msg);
    }
    out.log.push_back("stage immersion: " + std::to_string(key.pieces.size()) + " pieces, audit ok");

    if (depth - 1 > 0)
        throw std::invalid_argument(
            "synthesize: explicit relation materialization is limited to depth-1 windows "
            "(deeper schedules exceed any materializable space)");

    // K = 0: the A_0 plateau maps onto the leftmost target base node
    std::vector<int> positions = base_plateau_positions(ct.tower, key);
    std::set<int> covered(positions.begin(), positions.end());
    for (int i = 0; i < X.size(); ++i)
        if (covered.count(ct.branch_of[i])) out.domain_points.push_back(i);
    out.domain = restrict_space(X, out.domain_points);
    out.target_boundary = one_point_space(H.node_name(H.node_at(0, 0)));
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < out.domain_points.size(); ++i)
        pairs.emplace_back(static_cast<int>(i), 0);
    out.relation = std::make_shared<MultiMap>(out.domain, out.target_boundary, std::move(pairs));
    out.certificate = uniformity_certificate(*out.relation, grid);
    out.immersion = std::move(key);
    out.log.push_back("stage relation: " + std::to_string(out.domain_points.size()) +
                      " covered points");
    return out;
}

SynthesisResult synthesize_bi_equivalence(const FiniteMetricSpace& X,
                                          const std::vector<Rational>& grid, int base_index,
                                          int up_depth, int down_depth) {
    SynthesisResult out;
    out.schedule = build_schedule(X, grid, CharMode::Bi, up_depth, down_depth, base_index);
    ScheduleAudit sa = audit_schedule(X, out.schedule);
    if (!sa.pass) throw std::logic_error("synthesize_bi: schedule audit failed");
    out.log.push_back("stage schedule: audited, " + std::to_string(sa.checks.size()) + " checks");

    std::vector<Rational> L;
    std::vector<long long> M;
    for (std::size_t j = out.schedule.neg_lambdas.size(); j-- > 0;) {
        L.push_back(out.schedule.neg_lambdas[j]);
        M.push_back(out.schedule.neg_ms[j]);
    }
    L.insert(L.end(), out.schedule.lambdas.begin(), out.schedule.lambdas.end());
    M.insert(M.end(), out.schedule.ms.begin(), out.schedule.ms.end());

    CanonicalTower ct = canonical_tower(X, L);
    Tower H = binary_window_tower(M);
    const int neg = static_cast<int>(out.schedule.neg_lambdas.size());
    out.log.push_back("stage towers: source " + std::to_string(ct.tower.node_count()) +
                      " nodes, binary window " + std::to_string(H.node_count()) + " nodes");

    std::vector<int> phi(ct.tower.node_count(), -1);
    int nominal_up = static_cast<int>(out.schedule.lambdas.size()) - (out.schedule.top_appended ? 1 : 0);
    if (nominal_up > 1) {
        std::vector<int> keep;
        for (int k = neg; k < ct.tower.level_count(); ++k) keep.push_back(k);
        Tower TXup = level_subtower(ct.tower, keep);
        Tower Hup = level_subtower(H, keep);
        KeyLemmaResult key = main_immersion(TXup, Hup, nominal_up - 2);
        KeyLemmaAudit ka = audit_immersion(key, TXup, Hup);
        if (!ka.pass) throw std::logic_error("synthesize_bi: upward immersion audit failed");
        if (nominal_up - 2 > 0)
            throw std::invalid_argument("synthesize: explicit relation materialization is limited "
                                        "to depth-1 upward windows");
        for (int pos : base_plateau_positions(TXup, key))
            phi[ct.tower.node_at(neg, pos)] = H.node_at(neg, 0);
        out.immersion = std::move(key);
        out.log.push_back("stage upward immersion: audited");
    } else {
        // trivial upward window: balanced surjection of the lambda_0 level
        int src = ct.tower.level_size(neg);
        int tgt = H.level_size(neg);
        if (src < tgt)
            throw std::invalid_argument("synthesize_bi: lambda_0 level smaller than the binary level");
        for (int p = 0; p < src; ++p)
            phi[ct.tower.node_at(neg, p)] = H.node_at(neg, p % tgt);
        out.log.push_back("stage upward: balanced surjection of " + std::to_string(src) +
                          " components onto " + std::to_string(tgt) + " nodes");
    }

    extend_downward(ct.tower, H, phi, neg, out.log);

    // relation: X point -> boundary point of the binary window
    std::vector<int> base_target(ct.tower.level_size(0), -1);
    for (int p = 0; p < ct.tower.level_size(0); ++p)
        base_target[p] = phi[ct.tower.node_at(0, p)];
    for (int i = 0; i < X.size(); ++i)
        if (base_target[ct.branch_of[i]] >= 0) out.domain_points.push_back(i);
    out.domain = restrict_space(X, out.domain_points);

    ScalingFunction fH;
    for (long long m : M) fH.values.push_back(Rational::pow2(m));
    out.target_boundary = std::make_shared<FiniteMetricSpace>(boundary(H, fH));
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < out.domain_points.size(); ++i) {
        int bpos = ct.branch_of[out.domain_points[i]];
        pairs.emplace_back(static_cast<int>(i), H.node_pos(base_target[bpos]));
    }
    out.relation = std::make_shared<MultiMap>(out.domain, out.target_boundary, std::move(pairs));
    // the window grid must span both metrics
    std::vector<Rational> cert_grid = grid;
    for (const Rational& v : out.target_boundary->values())
        if (Rational(0) < v) cert_grid.push_back(v);
    std::sort(cert_grid.begin(), cert_grid.end());
    cert_grid.erase(std::unique(cert_grid.begin(), cert_grid.end()), cert_grid.end());
    out.certificate = uniformity_certificate(*out.relation, cert_grid);
    out.log.push_back("stage relation: " + std::to_string(out.domain_points.size()) +
                      " covered points onto " + std::to_string(out.target_boundary->size()) +
                      " boundary points");
    return out;
}

MicroSynthesisResult synthesize_micro_equivalence(const SpacePtr& X, const SpacePtr& Y,
                                                  const std::vector<Rational>& gridX,
                                                  const std::vector<Rational>& gridY,
                                                  int down_depth) {
    MicroSynthesisResult out;
    auto single_scale = [](const FiniteMetricSpace& S, const std::vector<Rational>& grid) {
        for (const Rational& s : grid)
            if (components(S, s).block_count() == 1) return s;
        throw std::invalid_argument("micro synthesis: no single-block scale on the grid");
    };
    Rational ax_top = single_scale(*X, gridX);
    Rational by_top = single_scale(*Y, gridY);

    // alpha_0 / beta_0: the largest grid scales below the tops
    auto below = [](const std::vector<Rational>& grid, const Rational& top) {
        Rational best;
        bool found = false;
        for (const Rational& s : grid)
            if (s < top) {
                best = s;
                found = true;
            }
        if (!found) throw std::invalid_argument("micro synthesis: no scale below the top");
        return best;
    };
    std::vector<Rational> alphas{below(gridX, ax_top)};
    std::vector<Rational> betas{below(gridY, by_top)};

    // downward per (iii) theta^{a_k}_{a_{k-1}}(X) >= Theta^{b_k}_{b_{k-1}}(Y)
    // and (iv) theta^{b_k}_{b_{k-1}}(Y) >= Theta^{a_{k+1}}_{a_k}(X)
    Rational a_up = ax_top;
    for (int j = 1; j <= down_depth; ++j) {
        auto [tX, TX] = capacity(*X, alphas.back(), a_up);
        (void)tX;
        bool found = false;
        Rational bprev;
        for (std::size_t gi = gridY.size(); gi-- > 0;) {
            if (!(gridY[gi] < betas.back())) continue;
            auto [tY, TY] = capacity(*Y, gridY[gi], betas.back());
            (void)TY;
            if (tY >= TX) {
                bprev = gridY[gi];
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("micro synthesis: Y window exhausted at step " +
                                        std::to_string(j));
        auto [tY2, TY2] = capacity(*Y, bprev, betas.back());
        (void)tY2;
        bool found2 = false;
        Rational aprev;
        for (std::size_t gi = gridX.size(); gi-- > 0;) {
            if (!(gridX[gi] < alphas.back())) continue;
            auto [tX2, TX2] = capacity(*X, gridX[gi], alphas.back());
            (void)TX2;
            if (tX2 >= TY2) {
                aprev = gridX[gi];
                found2 = true;
                break;
            }
        }
        if (!found2)
            throw std::invalid_argument("micro synthesis: X window exhausted at step " +
                                        std::to_string(j));
        a_up = alphas.back();
        alphas.push_back(aprev);
        betas.push_back(bprev);
        out.log.push_back("step " + std::to_string(j) + ": alpha=" + aprev.to_string() +
                          " beta=" + bprev.to_string());
    }

    std::vector<Rational> A(alphas.rbegin(), alphas.rend());
    A.push_back(ax_top);
    std::vector<Rational> B(betas.rbegin(), betas.rend());
    B.push_back(by_top);
    out.alphas = A;
    out.betas = B;

    CanonicalTower ctx = canonical_tower(*X, A);
    CanonicalTower cty = canonical_tower(*Y, B);
    const int topk = ctx.tower.top_level();
    if (cty.tower.top_level() != topk)
        throw std::logic_error("micro synthesis: window level counts differ");

    std::vector<int> phi(ctx.tower.node_count(), -1);
    phi[ctx.tower.node_at(topk, 0)] = cty.tower.node_at(topk, 0);
    int src = ctx.tower.level_size(topk - 1);
    int tgt = cty.tower.level_size(topk - 1);
    if (src < tgt)
        throw std::invalid_argument(
            "micro synthesis: the alpha_0 level is smaller than the beta_0 level (" +
            std::to_string(src) + " < " + std::to_string(tgt) + ")");
    for (int p = 0; p < src; ++p)
        phi[ctx.tower.node_at(topk - 1, p)] = cty.tower.node_at(topk - 1, p % tgt);
    extend_downward(ctx.tower, cty.tower, phi, topk - 1, out.log);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < X->size(); ++i) {
        int tb = phi[ctx.tower.node_at(0, ctx.branch_of[i])];
        for (int yj = 0; yj < Y->size(); ++yj)
            if (cty.branch_of[yj] == cty.tower.node_pos(tb)) pairs.emplace_back(i, yj);
    }
    out.relation = std::make_shared<MultiMap>(X, Y, std::move(pairs));
    std::vector<Rational> grid = gridX;
    grid.insert(grid.end(), gridY.begin(), gridY.end());
    for (const Rational& v : X->values())
        if (Rational(0) < v) grid.push_back(v);
    for (const Rational& v : Y->values())
        if (Rational(0) < v) grid.push_back(v);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    out.certificate = uniformity_certificate(*out.relation, grid);
    return out;
}

UniversalityResult universality_embed(const FiniteMetricSpace& X, const std::vector<Rational>& L) {
    UniversalityResult out;
    CanonicalTower ct = canonical_tower(X, L);
    out.source_tower = std::make_shared<Tower>(std::move(ct.tower));
    DegreeProfile prof = degree_profile(*out.source_tower);

    const int levels = out.source_tower->level_count();
    std::vector<BigInt> steps(levels, BigInt(1));
    BigInt width(1);
    for (int k = levels - 1; k >= 1; --k) {
        steps[k] = prof.Deg(k - 1, k) < BigInt(2) ? BigInt(2) : prof.Deg(k - 1, k);
        width *= steps[k];
        if (width > BigInt(1 << 22))
            throw std::invalid_argument("universality_embed: receiving tower exceeds the node budget");
    }
    Tower::Data d;
    d.explicit_base = 0;
    d.parents.resize(levels);
    std::vector<long long> sizes(levels, 1);
    for (int k = levels - 2; k >= 0; --k) sizes[k] = sizes[k + 1] * steps[k + 1].to_longlong();
    for (int k = 0; k < levels; ++k) {
        d.labels.push_back(out.source_tower->level_label(k));
        long long step = k + 1 < levels ? steps[k + 1].to_longlong() : 1;
        for (long long p = 0; p < sizes[k]; ++p)
            d.parents[k].push_back(k + 1 < levels ? static_cast<int>(p / step) : -1);
    }
    out.receiving = std::make_shared<Tower>(Tower::validate(std::move(d)));

    std::vector<int> idmap(levels);
    for (int k = 0; k < levels; ++k) idmap[k] = k;
    out.embedding = build_embedding(out.source_tower, out.receiving, idmap);

    ScalingFunction f = ScalingFunction::identity(out.source_tower->level_labels());
    BoundaryMap bm = boundary_map(out.embedding, f, f);
    out.source_boundary = bm.source_boundary;
    out.target_boundary = bm.target_boundary;
    out.boundary_relation = std::make_shared<MultiMap>(bm.relation());
    out.certificate = uniformity_certificate(*out.boundary_relation, L);
    return out;
}

namespace {

std::map<BigInt, int> factorize(BigInt n) {
    std::map<BigInt, int> out;
    if (n <= BigInt(1)) return out;
    BigInt d(2);
    long long guard = 0;
    while (d * d <= n) {
        if (++guard > 2000000)
            throw std::invalid_argument("factorize: value too large for trial division");
        BigInt q, r;
        BigInt::divmod(n, d, q, r);
        if (r.is_zero()) {
            ++out[d];
            n = q;
        } else {
            d += d == BigInt(2) ? BigInt(1) : BigInt(2);
        }
    }
    if (n > BigInt(1)) ++out[n];
    return out;
}

}  // namespace

PrimeProfile f_invariant(const FiniteMetricSpace& X, const std::vector<Rational>& window) {
    PrimeProfile prof;
    prof.open_ended = true;
    for (const Rational& s : window) {
        if (!(Rational(0) < s)) throw std::invalid_argument("f_invariant: scales must be positive");
        Partition p = components(X, s);
        for (const auto& blk : p.blocks)
            for (auto& [prime, e] : factorize(BigInt(blk.size()))) {
                auto it = prof.exponents.find(prime);
                if (it == prof.exponents.end() || it->second < e) prof.exponents[prime] = e;
            }
    }
    return prof;
}

PrimeProfile chain_profile(const GroupChain& chain) {
    chain.validate();
    PrimeProfile prof;
    prof.open_ended = true;
    for (auto& [prime, e] : factorize(chain.orders.back())) prof.exponents[prime] = e;
    return prof;
}

GroupChain zf_chain(const PrimeProfile& profile, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("zf_chain: negative cutoff");
    std::vector<std::pair<BigInt, int>> remaining;
    for (auto& [p, e] : profile.exponents)
        remaining.emplace_back(p, e < 0 ? cutoff : e);
    GroupChain chain;
    chain.orders.push_back(BigInt(1));
    bool more = true;
    while (more) {
        more = false;
        for (auto& [p, e] : remaining) {
            if (e <= 0) continue;
            chain.orders.push_back(chain.orders.back() * p);
            --e;
            more = more || e > 0;
        }
    }
    chain.validate();
    return chain;
}

namespace {

std::string profile_to_string(const PrimeProfile& p) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [prime, e] : p.exponents) {
        if (!first) os << ", ";
        first = false;
        os << prime << ":" << (e < 0 ? std::string("inf") : std::to_string(e));
        if (p.open_ended && e >= 0) os << "+";
    }
    os << "}";
    return os.str();
}

void distinct_witness(ClassifyResult& out) {
    // smallest prime present on exactly one side, else smallest with a
    // differing exponent
    std::set<BigInt> primes;
    for (auto& [p, e] : out.profile_a.exponents) primes.insert(p);
    for (auto& [p, e] : out.profile_b.exponents) primes.insert(p);
    BigInt one_sided(0), differing(0);
    for (const BigInt& p : primes) {
        bool in_a = out.profile_a.exponents.count(p) > 0;
        bool in_b = out.profile_b.exponents.count(p) > 0;
        if (in_a != in_b && one_sided.is_zero()) one_sided = p;
        int ea = in_a ? out.profile_a.exponents.at(p) : 0;
        int eb = in_b ? out.profile_b.exponents.at(p) : 0;
        if (ea != eb && differing.is_zero()) differing = p;
    }
    out.witness_prime = one_sided.is_zero() ? differing : one_sided;
    std::ostringstream cert;
    cert << "profiles " << profile_to_string(out.profile_a) << " vs "
         << profile_to_string(out.profile_b) << " differ at prime " << out.witness_prime
         << "; under a bi-uniform equivalence every component cardinality of one side divides a "
            "component cardinality of the other (divisibility lemma), which fails for this prime "
            "power on the window";
    out.certificate = cert.str();
}

}  // namespace

ClassifyResult classify_pair(const GroupChain& a, const GroupChain& b) {
    ClassifyResult out;
    out.profile_a = chain_profile(a);
    out.profile_b = chain_profile(b);
    if (out.profile_a.same_exponents(out.profile_b)) {
        out.equivalent = true;
        int cutoff = 0;
        for (auto& [p, e] : out.profile_a.exponents) cutoff += e;
        GroupChain zf = zf_chain(out.profile_a, cutoff);
        if (zf.orders.back() > BigInt(1000000))
            throw std::invalid_argument("classify_pair: normalized chain too large to materialize");
        long long width = zf.orders.back().to_longlong();
        out.witness_source = std::make_shared<Tower>(group_chain_tower(zf, width));
        out.witness_target = std::make_shared<Tower>(group_chain_tower(zf, width));
        IsoDecision dec = decide_homogeneous_iso(out.witness_source, out.witness_target);
        if (!dec.iso) throw std::logic_error("classify_pair: normalized towers failed to match");
        out.witness = std::move(dec.iso);
        out.certificate = "both chains realize Z_f with profile " + profile_to_string(out.profile_a) +
                          "; tower isomorphism constructed on the normalized chain";
        return out;
    }
    out.equivalent = false;
    distinct_witness(out);
    return out;
}

ClassifyResult classify_pair(const FiniteMetricSpace& X, const std::vector<Rational>& window_x,
                             const FiniteMetricSpace& Y, const std::vector<Rational>& window_y,
                             bool vertex_transitive) {
    if (!vertex_transitive)
        throw std::invalid_argument(
            "classify_pair: the iff claim needs vertex-transitive inputs; use f_invariant for the "
            "bare invariant");
    ClassifyResult out;
    out.profile_a = f_invariant(X, window_x);
    out.profile_b = f_invariant(Y, window_y);
    if (out.profile_a.same_exponents(out.profile_b)) {
        out.equivalent = true;
        out.certificate = "window profiles agree: " + profile_to_string(out.profile_a);
        return out;
    }
    out.equivalent = false;
    distinct_witness(out);
    return out;
}

}  // namespace zerodim
