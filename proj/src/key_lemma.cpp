#include "zerodim/key_lemma.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace zerodim {

Rational epsilon_product(int a, int b) {
    BigInt num(1), den(1);
    for (int i = a; i <= b; ++i) {
        BigInt p = BigInt::pow(BigInt(4), static_cast<unsigned long long>(i));
        num *= p + BigInt(1);
        den *= p - BigInt(1);
    }
    return Rational(std::move(num), std::move(den));
}

AdmissibilityBounds admissible_ratio_bounds(int k) {
    static std::map<int, AdmissibilityBounds> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    Rational p = epsilon_product(k + 1, kEpsilonHorizon);
    AdmissibilityBounds b{Rational(8) / p, Rational(16) * p};
    cache[k] = b;
    return b;
}

RatioCheck ratio_bounds_check(const BigInt& plateau_deg0, const BigInt& h0k, int k) {
    RatioCheck out;
    out.ratio = Rational(plateau_deg0, h0k);
    out.bounds = admissible_ratio_bounds(k);
    out.pass = out.bounds.lower <= out.ratio && out.ratio <= out.bounds.upper;
    return out;
}

std::vector<QuotaRow> choose_quota(const std::vector<std::pair<BigInt, BigInt>>& plateau,
                                   const BigInt& deg_w) {
    BigInt total(0);
    for (auto& [w, n] : plateau) {
        if (!(BigInt(0) < w) || !(BigInt(0) < n))
            throw std::invalid_argument("choose_quota: weights and counts must be positive");
        total += w * n;
    }
    if (total.is_zero()) throw std::invalid_argument("choose_quota: empty plateau");

    struct Cls {
        std::size_t idx;
        BigInt floor_d;
        Rational frac;
    };
    std::vector<Cls> cls;
    BigInt floor_sum(0);
    for (std::size_t i = 0; i < plateau.size(); ++i) {
        Rational target(deg_w * plateau[i].first, total);
        BigInt f = target.floor();
        cls.push_back({i, f, target - Rational(f)});
        floor_sum += f * plateau[i].second;
    }
    BigInt rem = deg_w - floor_sum;
    std::vector<std::size_t> order(cls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        int c = cls[a].frac.compare(cls[b].frac);
        if (c != 0) return c > 0;
        return cls[a].idx < cls[b].idx;
    });

    std::vector<BigInt> bumped(cls.size(), BigInt(0));
    for (std::size_t oi : order) {
        if (rem.is_zero()) break;
        BigInt take = plateau[cls[oi].idx].second < rem ? plateau[cls[oi].idx].second : rem;
        bumped[oi] = take;
        rem -= take;
    }
    if (!rem.is_zero()) throw std::logic_error("choose_quota: remainder not exhausted");

    std::vector<QuotaRow> rows;
    for (std::size_t i = 0; i < plateau.size(); ++i) {
        BigInt hi = bumped[i];
        BigInt lo = plateau[i].second - hi;
        if (!hi.is_zero()) rows.push_back({plateau[i].first, hi, cls[i].floor_d + BigInt(1)});
        if (!lo.is_zero()) rows.push_back({plateau[i].first, lo, cls[i].floor_d});
    }
    return rows;
}

std::vector<SplitShape> split_balanced(const std::vector<std::pair<BigInt, BigInt>>& items,
                                       const BigInt& bins) {
    if (!(BigInt(0) < bins)) throw std::invalid_argument("split_balanced: need at least one bin");

    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        int c = items[a].first.compare(items[b].first);
        if (c != 0) return c > 0;  // heaviest first
        return a < b;
    });

    struct BinCls {
        std::vector<std::pair<int, BigInt>> contents;  // (item class, per-bin count)
        BigInt weight;
        BigInt count;
        std::size_t birth;
    };
    std::vector<BinCls> bc{{{}, BigInt(0), bins, 0}};
    std::size_t births = 1;
    for (std::size_t oi : order) {
        const BigInt& w = items[oi].first;
        const BigInt& n = items[oi].second;
        BigInt q, r;
        BigInt::divmod(n, bins, q, r);
        if (!q.is_zero())
            for (auto& b : bc) {
                b.contents.emplace_back(static_cast<int>(oi), q);
                b.weight += q * w;
            }
        if (r.is_zero()) continue;
        // extras to the lightest bins first
        std::sort(bc.begin(), bc.end(), [](const BinCls& a, const BinCls& b) {
            int c = a.weight.compare(b.weight);
            if (c != 0) return c < 0;
            return a.birth < b.birth;
        });
        std::vector<BinCls> next;
        for (auto& b : bc) {
            if (r.is_zero() || b.count <= BigInt(0)) {
                next.push_back(std::move(b));
                continue;
            }
            BigInt take = b.count < r ? b.count : r;
            r -= take;
            BinCls bumped = b;
            bumped.count = take;
            bumped.birth = births++;
            bool merged = false;
            for (auto& [ci, cc] : bumped.contents)
                if (ci == static_cast<int>(oi)) {
                    cc += BigInt(1);
                    merged = true;
                }
            if (!merged) bumped.contents.emplace_back(static_cast<int>(oi), BigInt(1));
            bumped.weight += w;
            if (take < b.count) {
                BinCls rest = std::move(b);
                rest.count = rest.count - take;
                next.push_back(std::move(rest));
            }
            next.push_back(std::move(bumped));
        }
        bc = std::move(next);
    }

    // canonicalize and merge identical shapes
    std::map<std::string, SplitShape> shapes;
    for (auto& b : bc) {
        std::sort(b.contents.begin(), b.contents.end());
        std::ostringstream key;
        for (auto& [ci, cc] : b.contents) key << ci << ":" << cc.to_string() << ";";
        auto it = shapes.find(key.str());
        if (it == shapes.end())
            shapes.emplace(key.str(), SplitShape{b.contents, b.count, b.weight});
        else
            it->second.bins += b.count;
    }
    std::vector<SplitShape> out;
    for (auto& [k, s] : shapes) out.push_back(std::move(s));
    return out;
}

namespace {

// member id space per level: node position for explicit levels, flavor
// index for counted layers
BigInt member_weight(const Tower& T, int level, int id) {
    if (level >= T.explicit_base()) return T.deg0(T.node_at(level, id));
    return T.layer(level)[id].deg0;
}

std::vector<std::pair<int, BigInt>> member_children(const Tower& T, int level, int id) {
    std::vector<std::pair<int, BigInt>> out;
    if (level > T.explicit_base()) {
        const auto& kids = T.children(T.node_at(level, id));
        if (level - 1 == 0) {
            // minimal-level children are interchangeable unit members
            out.emplace_back(0, BigInt(kids.size()));
            return out;
        }
        for (int c : kids) out.emplace_back(T.node_pos(c), BigInt(1));
        std::sort(out.begin(), out.end());
        return out;
    }
    if (level == T.explicit_base()) {
        out = T.bundle(T.node_at(level, id));
    } else {
        out = T.layer(level)[id].children;
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct GSet {
    int level = 0;
    std::vector<std::pair<int, BigInt>> members;  // (member id, count), sorted by id
};

BigInt gset_deg0(const Tower& T, const GSet& g) {
    BigInt total(0);
    for (auto& [id, c] : g.members) total += c * member_weight(T, g.level, id);
    return total;
}

struct Engine {
    const Tower& T;
    const Tower& H;
    std::vector<BigInt> h0;      // deg0^k(H)
    std::vector<BigInt> h_step;  // h_step[k] = deg_{k-1}^k(H)
    std::vector<BigInt> DegT0;   // Deg_0^k(T)
    KeyLemmaResult result;
    std::map<std::string, int> memo;

    Engine(const Tower& t, const Tower& h) : T(t), H(h) {
        if (!H.homogeneous()) throw std::invalid_argument("key lemma: H must be homogeneous");
        DegreeProfile ph = degree_profile(H);
        DegreeProfile pt = degree_profile(T);
        h0.resize(H.level_count());
        h_step.assign(H.level_count(), BigInt(1));
        h0[0] = BigInt(1);
        for (int k = 1; k < H.level_count(); ++k) {
            h_step[k] = ph.deg(k - 1, k);
            h0[k] = h0[k - 1] * h_step[k];
        }
        DegT0.resize(T.level_count());
        DegT0[0] = BigInt(1);
        for (int k = 1; k < T.level_count(); ++k) DegT0[k] = pt.Deg(0, k);
        result.h_step = h_step;
    }

    std::string key_of(const GSet& g) const {
        std::ostringstream os;
        os << g.level << "|";
        for (auto& [id, c] : g.members) os << id << ":" << c.to_string() << ";";
        return os.str();
    }

    void log(const std::string& line) { result.audit_log.push_back(line); }

    int make_piece(const GSet& plateau, bool root) {
        std::string key = key_of(plateau);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        Piece piece;
        piece.level = plateau.level;
        piece.deg0_total = gset_deg0(T, plateau);
        RatioCheck rc = ratio_bounds_check(piece.deg0_total, h0[plateau.level], plateau.level);
        piece.ratio = rc.ratio;
        {
            std::ostringstream os;
            os << "piece level=" << plateau.level << " deg0=" << piece.deg0_total
               << " ratio=" << piece.ratio.to_string() << " bounds=[" << rc.bounds.lower.to_string()
               << "," << rc.bounds.upper.to_string() << "] " << (rc.pass ? "ok" : "FAIL");
            log(os.str());
        }
        if (!rc.pass) {
            std::string msg = "key lemma: ratio " + piece.ratio.to_string() +
                              " outside the admissibility window at level " +
                              std::to_string(plateau.level);
            if (root) throw std::invalid_argument(msg);
            throw std::logic_error(msg + " (propagation failure)");
        }

        if (plateau.level > 0) {
            const BigInt& deg_w = h_step[plateau.level];
            std::vector<std::pair<BigInt, BigInt>> classes;
            classes.reserve(plateau.members.size());
            for (auto& [id, c] : plateau.members)
                classes.emplace_back(member_weight(T, plateau.level, id), c);
            std::vector<QuotaRow> rows = choose_quota(classes, deg_w);
            // rows follow class order; map them back to member ids
            std::size_t ri = 0;
            for (std::size_t ci = 0; ci < plateau.members.size(); ++ci) {
                int id = plateau.members[ci].first;
                BigInt seen(0);
                while (ri < rows.size() && seen < plateau.members[ci].second) {
                    const QuotaRow& row = rows[ri++];
                    seen += row.members;
                    piece.quotas.push_back(row);
                    if (!(BigInt(0) < row.d))
                        throw std::invalid_argument(
                            "key lemma: zero quota at level " + std::to_string(plateau.level) +
                            " (quota positivity fails; hypotheses too weak)");
                    // split the children of this member class into d groups
                    auto kids = member_children(T, plateau.level, id);
                    std::vector<std::pair<BigInt, BigInt>> kid_classes;
                    kid_classes.reserve(kids.size());
                    for (auto& [kid, kc] : kids)
                        kid_classes.emplace_back(member_weight(T, plateau.level - 1, kid), kc);
                    auto shapes = split_balanced(kid_classes, row.d);
                    for (auto& sh : shapes) {
                        // |deg0(group) - deg0(member)/d| <= Deg_0^{level-1}(T)
                        Rational dev = Rational(sh.weight) - Rational(row.weight, row.d);
                        if (dev.is_negative()) dev = -dev;
                        if (!(dev <= Rational(DegT0[plateau.level - 1])))
                            throw std::logic_error(
                                "key lemma: plateau split deviation exceeds Deg at level " +
                                std::to_string(plateau.level - 1));
                        GSet sub;
                        sub.level = plateau.level - 1;
                        for (auto& [ki, cc] : sh.items) sub.members.emplace_back(kids[ki].first, cc);
                        std::sort(sub.members.begin(), sub.members.end());
                        int child = make_piece(sub, false);
                        piece.edges.push_back({child, row.members * sh.bins});
                    }
                }
                if (seen != plateau.members[ci].second)
                    throw std::logic_error("key lemma: quota rows out of sync");
            }
            BigInt mult_sum(0), deg0_sum(0);
            for (auto& e : piece.edges) {
                mult_sum += e.multiplicity;
                deg0_sum += e.multiplicity * result.pieces[e.piece].deg0_total;
            }
            if (mult_sum != deg_w)
                throw std::logic_error("key lemma: group count does not equal deg(w)");
            if (deg0_sum != piece.deg0_total)
                throw std::logic_error("key lemma: base count not conserved in recursion");
        }

        int idx = static_cast<int>(result.pieces.size());
        result.pieces.push_back(std::move(piece));
        memo[key] = idx;
        return idx;
    }

    std::vector<BigInt> piece_cover(int piece, int down_to) const {
        // covered targets per level for one piece, computed over the DAG
        std::map<int, std::vector<BigInt>> memo_cov;
        std::function<const std::vector<BigInt>&(int)> go = [&](int p) -> const std::vector<BigInt>& {
            auto it = memo_cov.find(p);
            if (it != memo_cov.end()) return it->second;
            const Piece& pc = result.pieces[p];
            std::vector<BigInt> cov(pc.level + 1, BigInt(0));
            cov[pc.level] = BigInt(1);
            for (auto& e : pc.edges) {
                const std::vector<BigInt>& sub = go(e.piece);
                for (int j = 0; j < static_cast<int>(sub.size()); ++j)
                    cov[j] += e.multiplicity * sub[j];
            }
            return memo_cov.emplace(p, std::move(cov)).first->second;
        };
        std::vector<BigInt> cov = go(piece);
        cov.resize(std::max<std::size_t>(cov.size(), down_to + 1), BigInt(0));
        return cov;
    }
};

}  // namespace

HypothesisReport check_hypotheses(const Tower& T, const Tower& H, int K) {
    if (!H.homogeneous()) throw std::invalid_argument("check_hypotheses: H must be homogeneous");
    if (K + 1 > T.level_count() || K + 1 > H.level_count())
        throw std::invalid_argument("check_hypotheses: towers need levels 0..K");
    DegreeProfile pt = degree_profile(T);
    DegreeProfile ph = degree_profile(H);
    HypothesisReport rep;
    rep.pass = true;
    for (int k = 1; k <= K; ++k) {
        HypothesisRow row;
        row.k = k;
        row.t_k = pt.deg(0, k);
        row.T_k = pt.Deg(0, k);
        row.h_k = ph.deg(0, k);
        row.h_km1 = ph.deg(0, k - 1);
        row.cond1 = row.t_k >= BigInt::pow(BigInt(4), k + 5) * row.h_km1;
        row.cond2 = row.h_k >= BigInt::pow(BigInt(4), k) * row.T_k;
        rep.pass = rep.pass && row.cond1 && row.cond2;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

KeyLemmaResult admissible_immersion(const Tower& T, const Tower& H, const PlateauSpec& plateau) {
    Engine eng(T, H);
    if (plateau.level < 0 || plateau.level >= T.level_count() || plateau.level >= H.level_count())
        throw std::invalid_argument("admissible_immersion: plateau level out of range");
    GSet g;
    g.level = plateau.level;
    g.members = plateau.members;
    std::sort(g.members.begin(), g.members.end());
    eng.result.root_piece = eng.make_piece(g, true);
    eng.result.image_counts = eng.piece_cover(eng.result.root_piece, 0);
    return std::move(eng.result);
}

KeyLemmaResult main_immersion(const Tower& T, const Tower& H, int K) {
    if (K < 0) throw std::invalid_argument("main_immersion: depth must be nonnegative");
    if (T.level_count() < K + 2 || H.level_count() < K + 2)
        throw std::invalid_argument("main_immersion: towers need levels 0..K+1");
    HypothesisReport hyp = check_hypotheses(T, H, K + 1);
    if (!hyp.pass) {
        std::string msg = "main_immersion: Key Lemma hypotheses fail:";
        for (auto& r : hyp.rows) {
            if (!r.cond1)
                msg += " [k=" + std::to_string(r.k) + " cond1: deg0^k(T)=" + r.t_k.to_string() +
                       " < 4^{k+5} deg0^{k-1}(H)]";
            if (!r.cond2)
                msg += " [k=" + std::to_string(r.k) + " cond2: deg0^k(H)=" + r.h_k.to_string() +
                       " < 4^k Deg0^k(T)]";
        }
        throw std::invalid_argument(msg);
    }

    Engine eng(T, H);
    eng.result.K = K;

    // leftmost branch a_0 <= a_1 <= ... <= a_{K+1} = top
    std::vector<int> branch(K + 2, 0);
    branch[K + 1] = 0;  // top node position
    {
        int lev = T.top_level();
        int id = 0;
        while (lev > 0) {
            auto kids = member_children(T, lev, id);
            if (kids.empty()) throw std::invalid_argument("main_immersion: branch hits a leaf");
            id = kids[0].first;
            --lev;
            if (lev <= K + 1) branch[lev] = id;
        }
    }

    // the 11..13 plateaus A_k inside pred(a_{k+1})
    std::vector<GSet> A(K + 1);
    std::vector<Rational> Aratio(K + 1);
    for (int k = 0; k <= K; ++k) {
        const BigInt& hk = eng.h0[k];
        BigInt branch_weight = member_weight(T, k + 1, branch[k + 1]);
        if (branch_weight < BigInt::pow(BigInt(4), k + 6) * hk)
            throw std::invalid_argument(
                "main_immersion: deg0(a_{k+1}) >= 4^{k+6} deg0^k(H) fails at k=" + std::to_string(k));
        if (BigInt::pow(BigInt(4), k) * eng.DegT0[k] > hk)
            throw std::invalid_argument(
                "main_immersion: Deg0^k(T) <= 4^{-k} deg0^k(H) fails at k=" + std::to_string(k));

        auto pool = member_children(T, k + 1, branch[k + 1]);
        GSet a;
        a.level = k;
        BigInt cur = member_weight(T, k, branch[k]);
        a.members.emplace_back(branch[k], BigInt(1));
        BigInt target = BigInt(11) * hk;
        for (auto& [id, cnt] : pool) {
            if (cur >= target) break;
            BigInt avail = cnt - (id == branch[k] ? BigInt(1) : BigInt(0));
            if (avail.is_zero() || avail.is_negative()) continue;
            BigInt w = member_weight(T, k, id);
            BigInt need = Rational(target - cur, w).ceil();
            if (avail < need) need = avail;
            bool merged = false;
            for (auto& [mid, mc] : a.members)
                if (mid == id) {
                    mc += need;
                    merged = true;
                }
            if (!merged) a.members.emplace_back(id, need);
            cur += need * w;
        }
        std::sort(a.members.begin(), a.members.end());
        Aratio[k] = Rational(cur, hk);
        if (!(Rational(11) <= Aratio[k]) || !(Aratio[k] <= Rational(13)))
            throw std::invalid_argument("main_immersion: the 11..13 ratio window is unreachable at k=" +
                                        std::to_string(k) + " (ratio " + Aratio[k].to_string() + ")");
        A[k] = std::move(a);
        eng.log("A_" + std::to_string(k) + " deg0=" + cur.to_string() +
                " ratio=" + Aratio[k].to_string());
    }

    // phi_0 and the upward extension steps
    eng.result.steps.resize(K + 1);
    {
        MainStep st;
        st.level = 0;
        st.plateau_deg0 = gset_deg0(T, A[0]);
        st.ratio = Aratio[0];
        st.plateau_members = A[0].members;
        st.residual.push_back({eng.make_piece(A[0], true), BigInt(1)});
        eng.result.steps[0] = std::move(st);
    }
    for (int k = 1; k <= K; ++k) {
        MainStep st;
        st.level = k;
        st.plateau_deg0 = gset_deg0(T, A[k]);
        st.ratio = Aratio[k];
        st.plateau_members = A[k].members;

        BigInt NB = eng.h_step[k] - BigInt(1);
        if (!(BigInt(0) < NB))
            throw std::invalid_argument("main_immersion: deg_{k-1}^k(H) must exceed 1 at k=" +
                                        std::to_string(k));

        // per-parent pools: the branch instance loses A_{k-1}
        struct Pool {
            std::vector<std::pair<int, BigInt>> items;  // (member id at level k-1, count)
            BigInt weight;
            BigInt parents;  // identical parent instances sharing this pool
        };
        std::vector<Pool> pools;
        {
            Pool bp;
            bp.parents = BigInt(1);
            std::map<int, BigInt> m;
            for (auto& [id, c] : member_children(T, k, branch[k])) m[id] = c;
            for (auto& [id, c] : A[k - 1].members) {
                auto it = m.find(id);
                if (it == m.end() || it->second < c)
                    throw std::logic_error("main_immersion: A_{k-1} not inside pred(a_k)");
                it->second -= c;
                if (it->second.is_zero()) m.erase(it);
            }
            for (auto& [id, c] : m) bp.items.emplace_back(id, c);
            bp.weight = BigInt(0);
            for (auto& [id, c] : bp.items) bp.weight += c * member_weight(T, k - 1, id);
            pools.push_back(std::move(bp));
        }
        for (auto& [id, c] : A[k].members) {
            BigInt others = c - (id == branch[k] ? BigInt(1) : BigInt(0));
            if (others.is_zero()) continue;
            Pool p;
            p.parents = others;
            p.items = member_children(T, k, id);
            p.weight = BigInt(0);
            for (auto& [cid, cc] : p.items) p.weight += cc * member_weight(T, k - 1, cid);
            pools.push_back(std::move(p));
        }

        BigInt residual_total(0);
        for (auto& p : pools) residual_total += p.parents * p.weight;

        // apportion the NB groups to parent instances by pool weight
        std::vector<std::pair<BigInt, BigInt>> classes;
        for (auto& p : pools) classes.emplace_back(p.weight, p.parents);
        std::vector<QuotaRow> napp = choose_quota(classes, NB);
        std::size_t ri = 0;
        for (auto& p : pools) {
            BigInt seen(0);
            while (ri < napp.size() && seen < p.parents) {
                const QuotaRow& row = napp[ri++];
                seen += row.members;
                if (!(BigInt(0) < row.d))
                    throw std::invalid_argument(
                        "main_immersion: a parent receives no residual group at k=" +
                        std::to_string(k));
                std::vector<std::pair<BigInt, BigInt>> kid_classes;
                for (auto& [id, c] : p.items)
                    kid_classes.emplace_back(member_weight(T, k - 1, id), c);
                auto shapes = split_balanced(kid_classes, row.d);
                for (auto& sh : shapes) {
                    Rational dev = Rational(sh.weight) - Rational(residual_total, NB);
                    if (dev.is_negative()) dev = -dev;
                    if (!(dev <= Rational(eng.DegT0[k - 1])))
                        throw std::logic_error(
                            "main_immersion: residual split deviation exceeds Deg at k=" +
                            std::to_string(k));
                    GSet sub;
                    sub.level = k - 1;
                    for (auto& [ki, cc] : sh.items) sub.members.emplace_back(p.items[ki].first, cc);
                    std::sort(sub.members.begin(), sub.members.end());
                    int child = eng.make_piece(sub, false);
                    st.residual.push_back({child, row.members * sh.bins});
                }
            }
        }

        BigInt mult_sum(0), deg0_sum(0);
        for (auto& e : st.residual) {
            mult_sum += e.multiplicity;
            deg0_sum += e.multiplicity * eng.result.pieces[e.piece].deg0_total;
        }
        if (mult_sum != NB)
            throw std::logic_error("main_immersion: residual group count mismatch at k=" +
                                   std::to_string(k));
        if (deg0_sum != residual_total)
            throw std::logic_error("main_immersion: residual base count mismatch at k=" +
                                   std::to_string(k));
        if (eng.result.steps[k - 1].plateau_deg0 + residual_total != st.plateau_deg0)
            throw std::logic_error("main_immersion: cone base count mismatch at k=" +
                                   std::to_string(k));
        eng.log("step " + std::to_string(k) + " residual_groups=" + NB.to_string() +
                " residual_deg0=" + residual_total.to_string());
        eng.result.steps[k] = std::move(st);
    }

    // per-level image counts of phi_K: b_j itself is hit by the plateau A_j
    // (for j = 0 the A_0 piece sits in steps[0].residual), everything else by
    // the residual pieces of the steps above j
    eng.result.image_counts.assign(K + 1, BigInt(0));
    for (int j = 0; j <= K; ++j) {
        BigInt total = j >= 1 ? BigInt(1) : BigInt(0);
        for (int k = 0; k <= K; ++k) {
            int plevel = (k == 0) ? 0 : k - 1;
            if (plevel < j) continue;
            for (auto& e : eng.result.steps[k].residual) {
                std::vector<BigInt> cov = eng.piece_cover(e.piece, j);
                total += e.multiplicity * cov[j];
            }
        }
        eng.result.image_counts[j] = total;
    }
    return std::move(eng.result);
}

KeyLemmaAudit audit_immersion(const KeyLemmaResult& r, const Tower& T, const Tower& H) {
    KeyLemmaAudit audit;
    audit.pass = true;
    auto fail = [&](const std::string& s) {
        audit.pass = false;
        audit.failures.push_back(s);
    };

    DegreeProfile ph = degree_profile(H);
    DegreeProfile pt = degree_profile(T);
    std::vector<BigInt> h0(H.level_count()), h_step(H.level_count(), BigInt(1));
    h0[0] = BigInt(1);
    for (int k = 1; k < H.level_count(); ++k) {
        h_step[k] = ph.deg(k - 1, k);
        h0[k] = h0[k - 1] * h_step[k];
        if (k < static_cast<int>(r.h_step.size()) && r.h_step[k] != h_step[k])
            fail("recorded h_step differs from H at k=" + std::to_string(k));
    }

    for (std::size_t pi = 0; pi < r.pieces.size(); ++pi) {
        const Piece& p = r.pieces[pi];
        ++audit.pieces_checked;
        RatioCheck rc = ratio_bounds_check(p.deg0_total, h0[p.level], p.level);
        if (!rc.pass) fail("piece " + std::to_string(pi) + ": ratio outside the admissibility window");
        if (p.ratio != rc.ratio) fail("piece " + std::to_string(pi) + ": recorded ratio differs");
        if (p.level == 0) {
            if (!p.edges.empty()) fail("level-0 piece with children");
            continue;
        }
        BigInt mult_sum(0), deg0_sum(0), quota_sum(0), quota_weight(0);
        for (auto& e : p.edges) {
            if (e.piece < 0 || e.piece >= static_cast<int>(r.pieces.size()) ||
                r.pieces[e.piece].level != p.level - 1) {
                fail("piece " + std::to_string(pi) + ": bad edge");
                continue;
            }
            mult_sum += e.multiplicity;
            deg0_sum += e.multiplicity * r.pieces[e.piece].deg0_total;
        }
        for (auto& q : p.quotas) {
            ++audit.quota_rows_checked;
            quota_sum += q.members * q.d;
            quota_weight += q.members * q.weight;
            // |d - deg_w * weight / total| <= 1  <=>  |d*total - deg_w*weight| <= total
            BigInt lhs = q.d * p.deg0_total - h_step[p.level] * q.weight;
            if (lhs.is_negative()) lhs = -lhs;
            if (!(lhs <= p.deg0_total))
                fail("piece " + std::to_string(pi) + ": quota deviates by more than 1");
            if (!(BigInt(0) < q.d)) fail("piece " + std::to_string(pi) + ": nonpositive quota");
        }
        if (quota_sum != h_step[p.level])
            fail("piece " + std::to_string(pi) + ": quotas do not sum to deg(w)");
        if (quota_weight != p.deg0_total)
            fail("piece " + std::to_string(pi) + ": quota weights do not cover the plateau");
        if (mult_sum != h_step[p.level])
            fail("piece " + std::to_string(pi) + ": edge multiplicities do not sum to deg(w)");
        if (deg0_sum != p.deg0_total) fail("piece " + std::to_string(pi) + ": base count leak");
    }

    if (r.K >= 0) {
        for (int k = 0; k <= r.K; ++k) {
            const MainStep& st = r.steps[k];
            if (!(Rational(11) <= st.ratio && st.ratio <= Rational(13)))
                fail("step " + std::to_string(k) + ": plateau ratio outside 11..13");
            BigInt residual_deg0(0), residual_groups(0);
            for (auto& e : st.residual) {
                residual_deg0 += e.multiplicity * r.pieces[e.piece].deg0_total;
                residual_groups += e.multiplicity;
            }
            if (k == 0) {
                if (residual_deg0 != st.plateau_deg0)
                    fail("step 0: the A_0 piece does not carry the plateau");
            } else {
                // cone base counts: deg0(A_k) = deg0(A_{k-1}) + residual
                if (r.steps[k - 1].plateau_deg0 + residual_deg0 != st.plateau_deg0)
                    fail("step " + std::to_string(k) + ": cone base count not conserved");
                if (residual_groups + BigInt(1) != h_step[k])
                    fail("step " + std::to_string(k) +
                         ": residual groups do not fill pred(b_k) minus the branch");
            }
        }
        // coverage: phi_K hits every node of the target cone
        for (int j = 0; j <= r.K; ++j) {
            BigInt expect(1);
            for (int i = j + 1; i <= r.K; ++i) expect *= h_step[i];
            if (j >= static_cast<int>(r.image_counts.size()) || r.image_counts[j] != expect)
                fail("image count at level " + std::to_string(j) + " differs from the target cone");
        }
    }
    (void)pt;
    return audit;
}

std::vector<std::pair<int, int>> explicit_admissible_immersion(const Tower& T, const Tower& H,
                                                               const std::vector<int>& plateau_nodes,
                                                               int target_vertex) {
    if (!T.fully_explicit() || !H.fully_explicit())
        throw std::invalid_argument("explicit_admissible_immersion: explicit towers required");
    std::vector<std::pair<int, int>> out;

    std::function<void(const std::vector<int>&, int)> go = [&](const std::vector<int>& plateau,
                                                               int w) {
        const int k = T.node_level(plateau.front());
        for (int v : plateau) out.emplace_back(v, w);
        if (k == 0) return;
        std::vector<std::pair<BigInt, BigInt>> classes;
        classes.reserve(plateau.size());
        for (int v : plateau) classes.emplace_back(T.deg0(v), BigInt(1));
        BigInt deg_w = BigInt(H.children(w).size());
        std::vector<QuotaRow> rows = choose_quota(classes, deg_w);
        // target children consumed in position order across the whole plateau
        std::vector<int> targets = H.children(w);
        std::sort(targets.begin(), targets.end(),
                  [&](int a, int b) { return H.node_pos(a) < H.node_pos(b); });
        std::size_t tnext = 0;

        std::size_t ri = 0;
        for (std::size_t ci = 0; ci < plateau.size(); ++ci) {
            const QuotaRow& row = rows[ri++];
            if (row.members != BigInt(1)) throw std::logic_error("explicit quota rows must be unit");
            long long d = row.d.to_longlong();
            // children of this member grouped by deg0, members in pos order
            std::vector<int> kids = T.children(plateau[ci]);
            std::sort(kids.begin(), kids.end(),
                      [&](int a, int b) { return T.node_pos(a) < T.node_pos(b); });
            std::map<std::string, std::pair<BigInt, std::vector<int>>> by_w;
            for (int c : kids) {
                auto& slot = by_w[T.deg0(c).to_string()];
                slot.first = T.deg0(c);
                slot.second.push_back(c);
            }
            std::vector<std::pair<BigInt, BigInt>> kid_classes;
            std::vector<std::vector<int>*> kid_members;
            for (auto& [s, slot] : by_w) {
                kid_classes.emplace_back(slot.first, BigInt(slot.second.size()));
                kid_members.push_back(&slot.second);
            }
            auto shapes = split_balanced(kid_classes, BigInt(d));
            // materialize bins: shapes in returned order, each repeated
            std::vector<std::size_t> consumed(kid_classes.size(), 0);
            for (auto& sh : shapes) {
                long long reps = sh.bins.to_longlong();
                for (long long rep = 0; rep < reps; ++rep) {
                    std::vector<int> group;
                    for (auto& [ki, cc] : sh.items) {
                        long long take = cc.to_longlong();
                        for (long long t = 0; t < take; ++t)
                            group.push_back((*kid_members[ki])[consumed[ki]++]);
                    }
                    if (group.empty()) throw std::logic_error("explicit split produced an empty bin");
                    if (tnext >= targets.size())
                        throw std::logic_error("explicit split exceeds deg(w)");
                    go(group, targets[tnext++]);
                }
            }
        }
        if (tnext != targets.size()) throw std::logic_error("explicit split missed target children");
    };

    go(plateau_nodes, target_vertex);
    return out;
}

}  // namespace zerodim
