#include "zerodim/tower.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zerodim {

ScalingFunction ScalingFunction::identity(const std::vector<Rational>& level_labels) {
    return ScalingFunction{level_labels};
}

ScalingFunction ScalingFunction::dyadic(int levels) {
    ScalingFunction f;
    for (int k = 0; k < levels; ++k) f.values.push_back(Rational::pow2(k));
    return f;
}

void ScalingFunction::validate(int levels) const {
    if (static_cast<int>(values.size()) != levels)
        throw std::invalid_argument("scaling: one value per level required");
    for (int k = 0; k < levels; ++k) {
        if (!(Rational(0) < values[k])) throw std::invalid_argument("scaling: values must be positive");
        if (k > 0 && !(values[k - 1] < values[k]))
            throw std::invalid_argument("scaling: values must be strictly increasing");
    }
}

Tower Tower::validate(Data d) {
    Tower T;
    const int levels = static_cast<int>(d.labels.size());
    if (levels == 0) throw std::invalid_argument("tower: no levels");
    for (int k = 1; k < levels; ++k)
        if (!(d.labels[k - 1] < d.labels[k]))
            throw std::invalid_argument("tower: level labels must be strictly increasing");
    if (d.explicit_base < 0 || d.explicit_base >= levels)
        throw std::invalid_argument("tower: explicit base out of range");
    const int eb = d.explicit_base;
    const int nexp = levels - eb;
    if (static_cast<int>(d.parents.size()) != nexp)
        throw std::invalid_argument("tower: one parent table per explicit level required");

    T.labels_ = std::move(d.labels);
    T.explicit_base_ = eb;

    // Counted layers below the cutoff.
    T.layers_.resize(eb);
    if (static_cast<int>(d.layers.size()) > eb)
        throw std::invalid_argument("tower: more layers than counted levels");
    for (std::size_t k = 0; k < d.layers.size(); ++k) T.layers_[k] = std::move(d.layers[k]);
    if (eb > 0 && T.layers_[0].empty()) T.layers_[0].push_back(Flavor{BigInt(1), {}});
    for (int k = 0; k < eb; ++k) {
        if (T.layers_[k].empty()) throw std::invalid_argument("tower: empty counted layer");
        for (auto& f : T.layers_[k]) {
            if (k == 0) {
                if (!f.children.empty())
                    throw std::invalid_argument("tower: level-0 flavors cannot have children");
                f.deg0 = BigInt(1);
                continue;
            }
            if (f.children.empty())
                throw std::invalid_argument("tower: counted flavor above level 0 with no children");
            f.deg0 = BigInt(0);
            for (auto& [cf, cnt] : f.children) {
                if (cf < 0 || cf >= static_cast<int>(T.layers_[k - 1].size()))
                    throw std::invalid_argument("tower: flavor child reference out of range");
                if (!(BigInt(0) < cnt))
                    throw std::invalid_argument("tower: flavor child count must be positive");
                f.deg0 += cnt * T.layers_[k - 1][cf].deg0;
            }
        }
    }

    // Explicit nodes, bottom level first, positions in table order.
    T.level_nodes_.resize(nexp);
    for (int i = 0; i < nexp; ++i) {
        const int k = eb + i;
        const int cnt = static_cast<int>(d.parents[i].size());
        if (cnt == 0) throw std::invalid_argument("tower: empty explicit level");
        if (k == levels - 1 && cnt != 1)
            throw std::invalid_argument("tower: disconnected maximal nodes (top level must be a single node)");
        for (int p = 0; p < cnt; ++p) {
            int v = static_cast<int>(T.level_of_.size());
            T.level_of_.push_back(k);
            T.pos_of_.push_back(p);
            T.parent_.push_back(-1);
            T.level_nodes_[i].push_back(v);
            std::string nm;
            if (i < static_cast<int>(d.names.size()) && p < static_cast<int>(d.names[i].size()))
                nm = d.names[i][p];
            if (nm.empty()) nm = "l" + std::to_string(k) + "n" + std::to_string(p);
            T.names_.push_back(std::move(nm));
        }
    }
    {
        std::vector<std::string> sorted = T.names_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("tower: duplicate node names");
    }
    T.children_.assign(T.node_count(), {});
    for (int i = 0; i < nexp; ++i) {
        const int k = eb + i;
        for (int p = 0; p < static_cast<int>(d.parents[i].size()); ++p) {
            int par = d.parents[i][p];
            int v = T.level_nodes_[i][p];
            if (k == levels - 1) {
                if (par != -1) throw std::invalid_argument("tower: top node cannot have a parent");
                continue;
            }
            if (par < 0)
                throw std::invalid_argument(
                    "tower: node below the top level without a parent (level gap)");
            if (par >= static_cast<int>(d.parents[i + 1].size()))
                throw std::invalid_argument("tower: parent position out of range");
            int pv = T.level_nodes_[i + 1][par];
            T.parent_[v] = pv;
            T.children_[pv].push_back(v);
        }
    }

    // Bundles on the base explicit level.
    const int base_count = static_cast<int>(T.level_nodes_[0].size());
    if (eb == 0) {
        if (!d.bundles.empty()) throw std::invalid_argument("tower: bundles on a fully explicit tower");
    } else {
        if (static_cast<int>(d.bundles.size()) != base_count)
            throw std::invalid_argument("tower: one bundle per base node required");
        T.bundles_ = std::move(d.bundles);
        for (auto& b : T.bundles_)
            for (auto& [f, cnt] : b) {
                if (f < 0 || f >= static_cast<int>(T.layers_[eb - 1].size()))
                    throw std::invalid_argument("tower: bundle flavor reference out of range");
                if (!(BigInt(0) < cnt))
                    throw std::invalid_argument("tower: bundle multiplicity must be positive");
            }
    }

    // Drop flavors that no bundle instantiates; min/max degree scans must
    // only see members that exist.
    if (eb > 0) {
        std::vector<std::vector<BigInt>> inst(eb);
        for (int k = 0; k < eb; ++k) inst[k].assign(T.layers_[k].size(), BigInt(0));
        for (auto& b : T.bundles_)
            for (auto& [f, cnt] : b) inst[eb - 1][f] += cnt;
        for (int k = eb - 1; k > 0; --k)
            for (std::size_t f = 0; f < T.layers_[k].size(); ++f)
                if (!inst[k][f].is_zero())
                    for (auto& [cf, cnt] : T.layers_[k][f].children)
                        inst[k - 1][cf] += inst[k][f] * cnt;
        for (int k = eb - 1; k >= 0; --k) {
            std::vector<int> remap(T.layers_[k].size(), -1);
            std::vector<Flavor> kept;
            for (std::size_t f = 0; f < T.layers_[k].size(); ++f)
                if (!inst[k][f].is_zero()) {
                    remap[f] = static_cast<int>(kept.size());
                    kept.push_back(std::move(T.layers_[k][f]));
                }
            if (kept.empty())
                throw std::invalid_argument("tower: counted layer with no instantiated flavors");
            if (k == eb - 1) {
                for (auto& b : T.bundles_)
                    for (auto& [f, cnt] : b) f = remap[f];
            } else {
                for (auto& fl : T.layers_[k + 1])
                    for (auto& [cf, cnt] : fl.children) cf = remap[cf];
            }
            T.layers_[k] = std::move(kept);
        }
    }

    // deg0 bottom-up.
    T.deg0_.assign(T.node_count(), BigInt(0));
    for (int i = 0; i < nexp; ++i)
        for (int p = 0; p < static_cast<int>(T.level_nodes_[i].size()); ++p) {
            int v = T.level_nodes_[i][p];
            if (i == 0) {
                if (eb == 0) {
                    T.deg0_[v] = BigInt(1);
                } else {
                    for (auto& [f, cnt] : T.bundles_[p]) T.deg0_[v] += cnt * T.layers_[eb - 1][f].deg0;
                }
            } else {
                for (int c : T.children_[v]) T.deg0_[v] += T.deg0_[c];
            }
        }

    // pruned: every member above the minimal level has a child.
    T.pruned_ = true;
    for (int i = (eb == 0 ? 1 : 0); i < nexp && T.pruned_; ++i)
        for (int v : T.level_nodes_[i]) {
            bool has = (i == 0) ? !T.bundles_[T.pos_of_[v]].empty() : !T.children_[v].empty();
            if (!has) {
                T.pruned_ = false;
                break;
            }
        }

    // homogeneous: equal child counts within every level.
    T.homogeneous_ = true;
    for (int k = 1; k < levels && T.homogeneous_; ++k) {
        BigInt expect(-1);
        auto check = [&](const BigInt& got) {
            if (expect.is_negative())
                expect = got;
            else if (expect != got)
                T.homogeneous_ = false;
        };
        if (k > eb) {
            for (int v : T.level_nodes_[k - eb]) check(BigInt(T.children_[v].size()));
        } else if (k == eb && eb > 0) {
            for (int p = 0; p < base_count; ++p) {
                BigInt total(0);
                for (auto& [f, cnt] : T.bundles_[p]) total += cnt;
                check(total);
            }
        } else {
            for (auto& f : T.layers_[k]) {
                BigInt total(0);
                for (auto& [cf, cnt] : f.children) total += cnt;
                check(total);
            }
        }
    }
    return T;
}

Tower Tower::build_explicit(std::vector<Rational> labels, std::vector<std::vector<int>> parents) {
    Data d;
    d.labels = std::move(labels);
    d.explicit_base = 0;
    d.parents = std::move(parents);
    return validate(std::move(d));
}

int Tower::node_by_name(const std::string& name) const {
    for (int v = 0; v < node_count(); ++v)
        if (names_[v] == name) return v;
    return -1;
}

const std::vector<std::pair<int, BigInt>>& Tower::bundle(int v) const {
    static const std::vector<std::pair<int, BigInt>> empty;
    if (explicit_base_ == 0 || level_of_[v] != explicit_base_) return empty;
    return bundles_[pos_of_[v]];
}

int Tower::meet(int x, int y) const {
    while (level_of_[x] < level_of_[y]) x = parent_[x];
    while (level_of_[y] < level_of_[x]) y = parent_[y];
    while (x != y) {
        x = parent_[x];
        y = parent_[y];
    }
    return x;
}

BigInt Tower::flavor_descendant_count(int k, int f, int lambda) const {
    if (lambda > k) return BigInt(0);
    if (lambda == k) return BigInt(1);
    // counts per flavor, swept down from layer k
    std::vector<BigInt> cur(layers_[k].size(), BigInt(0));
    cur[f] = BigInt(1);
    for (int j = k; j > lambda; --j) {
        std::vector<BigInt> next(layers_[j - 1].size(), BigInt(0));
        for (std::size_t g = 0; g < layers_[j].size(); ++g) {
            if (cur[g].is_zero()) continue;
            for (auto& [cf, cnt] : layers_[j][g].children) next[cf] += cur[g] * cnt;
        }
        cur = std::move(next);
    }
    BigInt total(0);
    for (auto& c : cur) total += c;
    return total;
}

BigInt Tower::descendant_count(int v, int lambda) const {
    const int lv = level_of_[v];
    if (lambda > lv) return BigInt(0);
    if (lambda == lv) return BigInt(1);
    if (lambda >= explicit_base_) {
        // sweep explicit levels down to lambda within the cone
        std::vector<int> frontier{v};
        for (int k = lv; k > lambda; --k) {
            std::vector<int> next;
            for (int u : frontier)
                for (int c : children_[u]) next.push_back(c);
            frontier = std::move(next);
        }
        return BigInt(frontier.size());
    }
    // into the counted region: gather base explicit nodes of the cone first
    std::vector<int> frontier{v};
    for (int k = lv; k > explicit_base_; --k) {
        std::vector<int> next;
        for (int u : frontier)
            for (int c : children_[u]) next.push_back(c);
        frontier = std::move(next);
    }
    BigInt total(0);
    for (int u : frontier)
        for (auto& [f, cnt] : bundles_[pos_of_[u]])
            total += cnt * flavor_descendant_count(explicit_base_ - 1, f, lambda);
    return total;
}

BigInt Tower::total_level_size(int k) const {
    if (k >= explicit_base_) return BigInt(level_size(k));
    const int top = top_level();
    return descendant_count(level_nodes_[top - explicit_base_][0], k);
}

std::vector<long long> Tower::level_labeling(int theta) const {
    const int lt = level_of_[theta];
    std::vector<long long> out(level_count());
    for (int k = 0; k < level_count(); ++k) {
        if (k >= explicit_base_ && level_size(k) > 0) {
            int x = node_at(k, 0);
            int m = meet(x, theta);
            long long card_x = level_of_[m] - k + 1;        // |[x, x^theta]|
            long long card_t = level_of_[m] - lt + 1;       // |[theta, x^theta]|
            out[k] = card_t - card_x;                       // = k - lev(theta)
        } else {
            out[k] = static_cast<long long>(k) - lt;
        }
    }
    return out;
}

DegreeProfile::DegreeProfile(int levels) {
    table_.resize(levels);
    for (int l = 0; l < levels; ++l) table_[l].resize(l + 1, {BigInt(0), BigInt(0)});
}

DegreeProfile degree_profile(const Tower& T) {
    const int levels = T.level_count();
    const int eb = T.explicit_base();
    DegreeProfile prof(levels);
    for (int lambda = 0; lambda < levels; ++lambda) {
        prof.entry(lambda, lambda) = {BigInt(1), BigInt(1)};
        // flavor counts at layers above lambda
        std::vector<std::vector<BigInt>> fc(eb);
        for (int k = lambda + 1; k < eb; ++k) {
            fc[k].resize(T.layer(k).size());
            for (std::size_t f = 0; f < T.layer(k).size(); ++f) {
                BigInt total(0);
                for (auto& [cf, cnt] : T.layer(k)[f].children)
                    total += cnt * (k - 1 == lambda ? BigInt(1)
                                                    : (k - 1 < eb ? fc[k - 1][cf] : BigInt(0)));
                fc[k][f] = total;
            }
            BigInt lo = fc[k][0], hi = fc[k][0];
            for (auto& c : fc[k]) {
                if (c < lo) lo = c;
                if (hi < c) hi = c;
            }
            prof.entry(lambda, k) = {lo, hi};
        }
        // explicit sweep
        std::vector<BigInt> cnt(T.node_count(), BigInt(0));
        for (int k = std::max(lambda, eb); k < levels; ++k) {
            BigInt lo, hi;
            bool first = true;
            for (int p = 0; p < T.level_size(k); ++p) {
                int v = T.node_at(k, p);
                BigInt c(0);
                if (k == lambda) {
                    c = BigInt(1);
                } else if (k == eb && eb > 0) {
                    for (auto& [f, m] : T.bundle(v))
                        c += m * (eb - 1 == lambda ? BigInt(1)
                                                   : (lambda < eb - 1 ? T.flavor_descendant_count(eb - 1, f, lambda)
                                                                      : BigInt(0)));
                } else {
                    for (int ch : T.children(v)) c += cnt[ch];
                }
                cnt[v] = c;
                if (first) {
                    lo = c;
                    hi = c;
                    first = false;
                } else {
                    if (c < lo) lo = c;
                    if (hi < c) hi = c;
                }
            }
            if (k > lambda) prof.entry(lambda, k) = {lo, hi};
        }
    }
    return prof;
}

namespace {

// positions of each base node's ancestor on every level
std::vector<std::vector<int>> ancestor_table(const Tower& T) {
    const int levels = T.level_count();
    const int n = T.level_size(0);
    std::vector<std::vector<int>> anc(levels, std::vector<int>(n));
    for (int p = 0; p < n; ++p) {
        int v = T.node_at(0, p);
        for (int k = 0; k < levels; ++k) {
            anc[k][p] = T.node_pos(v);
            if (k + 1 < levels) v = T.parent(v);
        }
    }
    return anc;
}

FiniteMetricSpace boundary_impl(const Tower& T, const ScalingFunction& f, bool parallel) {
    f.validate(T.level_count());
    if (!T.fully_explicit())
        throw std::invalid_argument("boundary: tower has a counted (bundled) lowest level");
    if (!T.pruned()) throw std::invalid_argument("boundary: tower must be pruned");
    const int n = T.level_size(0);
    std::vector<std::string> ids(n);
    for (int p = 0; p < n; ++p) ids[p] = T.node_name(T.node_at(0, p));
    std::vector<Rational> values;
    values.push_back(Rational(0));
    for (int k = 1; k < T.level_count(); ++k) values.push_back(f.values[k]);
    std::vector<int> idx(static_cast<std::size_t>(n) * n, 0);
    auto anc = ancestor_table(T);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
#endif
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int lo = 1, hi = T.level_count() - 1;
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                if (anc[mid][i] == anc[mid][j])
                    hi = mid;
                else
                    lo = mid + 1;
            }
            idx[static_cast<std::size_t>(i) * n + j] = lo;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            idx[static_cast<std::size_t>(j) * n + i] = idx[static_cast<std::size_t>(i) * n + j];
    return FiniteMetricSpace::from_value_index_matrix(std::move(ids), std::move(values),
                                                      std::move(idx), /*check_ultrametric=*/false);
}

}  // namespace

FiniteMetricSpace boundary(const Tower& T, const ScalingFunction& f) {
    return boundary_impl(T, f, true);
}

namespace reference {

FiniteMetricSpace boundary_serial(const Tower& T, const ScalingFunction& f) {
    f.validate(T.level_count());
    if (!T.fully_explicit())
        throw std::invalid_argument("boundary: tower has a counted (bundled) lowest level");
    if (!T.pruned()) throw std::invalid_argument("boundary: tower must be pruned");
    const int n = T.level_size(0);
    std::vector<std::string> ids(n);
    for (int p = 0; p < n; ++p) ids[p] = T.node_name(T.node_at(0, p));
    std::vector<Rational> values;
    values.push_back(Rational(0));
    for (int k = 1; k < T.level_count(); ++k) values.push_back(f.values[k]);
    std::vector<int> idx(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int m = T.meet(T.node_at(0, i), T.node_at(0, j));
            idx[static_cast<std::size_t>(i) * n + j] = T.node_level(m);
            idx[static_cast<std::size_t>(j) * n + i] = T.node_level(m);
        }
    return FiniteMetricSpace::from_value_index_matrix(std::move(ids), std::move(values),
                                                      std::move(idx), /*check_ultrametric=*/false);
}

}  // namespace reference

Tower level_subtower(const Tower& T, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("level_subtower: empty level set");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < T.explicit_base() || keep[i] > T.top_level())
            throw std::invalid_argument("level_subtower: level outside the explicit window");
        if (i > 0 && keep[i - 1] >= keep[i])
            throw std::invalid_argument("level_subtower: levels must be ascending");
    }
    if (keep.back() != T.top_level())
        throw std::invalid_argument("level_subtower: must contain the top level");

    Tower::Data d;
    d.explicit_base = 0;
    for (int k : keep) d.labels.push_back(T.level_label(k));
    d.parents.resize(keep.size());
    d.names.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const int k = keep[i];
        for (int p = 0; p < T.level_size(k); ++p) {
            int v = T.node_at(k, p);
            d.names[i].push_back(T.node_name(v));
            if (i + 1 == keep.size()) {
                d.parents[i].push_back(-1);
            } else {
                int u = v;
                while (T.node_level(u) < keep[i + 1]) u = T.parent(u);
                d.parents[i].push_back(T.node_pos(u));
            }
        }
    }
    return Tower::validate(std::move(d));
}

CanonicalTower canonical_tower(const FiniteMetricSpace& X, const std::vector<Rational>& L) {
    if (L.empty()) throw std::invalid_argument("canonical_tower: empty level set");
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (!(Rational(0) < L[k]))
            throw std::invalid_argument("canonical_tower: levels must be positive");
        if (k > 0 && !(L[k - 1] < L[k]))
            throw std::invalid_argument("canonical_tower: levels must be strictly increasing");
    }
    std::vector<Partition> parts;
    parts.reserve(L.size());
    for (const Rational& lam : L) parts.push_back(components(X, lam));
    if (parts.back().block_count() != 1)
        throw std::invalid_argument(
            "canonical_tower: top level is not a single node (need max L >= diameter)");

    Tower::Data d;
    d.labels = L;
    d.explicit_base = 0;
    d.parents.resize(L.size());
    d.names.resize(L.size());
    for (std::size_t k = 0; k < L.size(); ++k) {
        for (int b = 0; b < parts[k].block_count(); ++b) {
            d.names[k].push_back(X.point_id(parts[k].blocks[b][0]) + "@" + L[k].to_string());
            if (k + 1 == L.size())
                d.parents[k].push_back(-1);
            else
                d.parents[k].push_back(parts[k + 1].block_of[parts[k].blocks[b][0]]);
        }
    }
    CanonicalTower out{Tower::validate(std::move(d)), parts[0].block_of};
    return out;
}

CanonicalBoundCheck canonical_map_bound_check(const FiniteMetricSpace& X,
                                              const std::vector<Rational>& L) {
    CanonicalTower ct = canonical_tower(X, L);
    const Tower& T = ct.tower;
    CanonicalBoundCheck out;
    for (int x = 0; x < X.size() && out.pass; ++x)
        for (int y = x + 1; y < X.size(); ++y) {
            Rational rhs;
            bool has_rhs = false;
            for (const Rational& lam : L)
                if (X.dist(x, y) <= lam) {
                    rhs = lam;
                    has_rhs = true;
                    break;
                }
            if (!has_rhs) continue;  // inf over empty set: trivially satisfied
            if (ct.branch_of[x] == ct.branch_of[y]) continue;  // distance 0
            int m = T.meet(T.node_at(0, ct.branch_of[x]), T.node_at(0, ct.branch_of[y]));
            if (!(T.level_label(T.node_level(m)) <= rhs)) {
                out.pass = false;
                out.witness_x = x;
                out.witness_y = y;
                break;
            }
        }
    return out;
}

void GroupChain::validate() const {
    if (orders.empty()) throw std::invalid_argument("group chain: empty order list");
    if (!orders[0].is_one()) throw std::invalid_argument("group chain: o_0 must be 1");
    for (std::size_t k = 1; k < orders.size(); ++k) {
        if (!(orders[k - 1] < orders[k]))
            throw std::invalid_argument("group chain: orders must strictly increase");
        if (!orders[k - 1].divides(orders[k]))
            throw std::invalid_argument("group chain: divisibility violated (" +
                                        orders[k - 1].to_string() + " does not divide " +
                                        orders[k].to_string() + ")");
    }
}

Tower group_chain_tower(const GroupChain& chain, long long width_cutoff) {
    chain.validate();
    const int levels = chain.length();
    const BigInt& top = chain.orders.back();
    int eb = levels - 1;
    while (eb > 0) {
        BigInt width = top / chain.orders[eb - 1];
        if (width > BigInt(width_cutoff)) break;
        --eb;
    }
    Tower::Data d;
    d.explicit_base = eb;
    for (int k = 0; k < levels; ++k) d.labels.push_back(Rational(k));
    d.parents.resize(levels - eb);
    for (int k = eb; k < levels; ++k) {
        long long width = (top / chain.orders[k]).to_longlong();
        long long step = k + 1 < levels ? (chain.orders[k + 1] / chain.orders[k]).to_longlong() : 1;
        for (long long p = 0; p < width; ++p)
            d.parents[k - eb].push_back(k + 1 < levels ? static_cast<int>(p / step) : -1);
    }
    d.layers.resize(eb);
    for (int k = 0; k < eb; ++k) {
        Tower::Flavor f;
        f.deg0 = chain.orders[k];
        if (k > 0) f.children.emplace_back(0, chain.orders[k] / chain.orders[k - 1]);
        d.layers[k].push_back(std::move(f));
    }
    if (eb > 0) {
        long long base_count = (top / chain.orders[eb]).to_longlong();
        d.bundles.assign(base_count, {{0, chain.orders[eb] / chain.orders[eb - 1]}});
    }
    return Tower::validate(std::move(d));
}

}  // namespace zerodim
