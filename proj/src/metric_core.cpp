#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zerodim/metric_space.hpp"

namespace zerodim {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // roots stay the smallest member
    }
};

Partition finish_partition(const FiniteMetricSpace& X, const Rational& s, UnionFind& uf) {
    const int n = X.size();
    Partition p;
    p.space = &X;
    p.scale = s;
    p.block_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (p.block_of[r] < 0) {
            p.block_of[r] = static_cast<int>(p.blocks.size());
            p.blocks.emplace_back();
        }
        p.block_of[i] = p.block_of[r];
        p.blocks[p.block_of[i]].push_back(i);
    }
    return p;
}

}  // namespace

Partition components(const FiniteMetricSpace& X, const Rational& s) {
    if (s.is_negative()) throw std::invalid_argument("components: negative scale");
    const int n = X.size();
    const int t = X.threshold_index(s);
    UnionFind global(n);
#ifdef _OPENMP
    if (static_cast<long long>(n) * n > 1 << 16) {
        int nthreads = omp_get_max_threads();
        std::vector<UnionFind> local(nthreads, UnionFind(n));
#pragma omp parallel
        {
            UnionFind& uf = local[omp_get_thread_num()];
#pragma omp for schedule(static)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (X.value_index(i, j) <= t) uf.unite(i, j);
        }
        for (auto& uf : local)
            for (int i = 0; i < n; ++i) global.unite(i, uf.find(i));
        return finish_partition(X, s, global);
    }
#endif
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (X.value_index(i, j) <= t) global.unite(i, j);
    return finish_partition(X, s, global);
}

namespace reference {

Partition components_chain_search(const FiniteMetricSpace& X, const Rational& s) {
    if (s.is_negative()) throw std::invalid_argument("components: negative scale");
    const int n = X.size();
    const int t = X.threshold_index(s);
    Partition p;
    p.space = &X;
    p.scale = s;
    p.block_of.assign(n, -1);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
        if (p.block_of[i] >= 0) continue;
        int id = static_cast<int>(p.blocks.size());
        p.blocks.emplace_back();
        stack.push_back(i);
        p.block_of[i] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            p.blocks[id].push_back(v);
            for (int w = 0; w < n; ++w)
                if (p.block_of[w] < 0 && X.value_index(v, w) <= t) {
                    p.block_of[w] = id;
                    stack.push_back(w);
                }
        }
        std::sort(p.blocks[id].begin(), p.blocks[id].end());
    }
    return p;
}

}  // namespace reference

Rational mesh(const Partition& p) {
    const FiniteMetricSpace& X = *p.space;
    int best = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(max : best)
#endif
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const auto& blk = p.blocks[b];
        int local = 0;
        for (std::size_t i = 0; i < blk.size(); ++i)
            for (std::size_t j = i + 1; j < blk.size(); ++j)
                local = std::max(local, X.value_index(blk[i], blk[j]));
        best = std::max(best, local);
    }
    return X.values()[best];
}

std::pair<BigInt, BigInt> capacity(const FiniteMetricSpace& X, const Rational& delta,
                                   const Rational& eps) {
    if (!(Rational(0) < delta) || !(delta <= eps))
        throw std::invalid_argument("capacity: requires 0 < delta <= eps");
    Partition pd = components(X, delta);
    Partition pe = components(X, eps);
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

DimensionZeroReport dimension_zero_report(const FiniteMetricSpace& X,
                                          const std::vector<Rational>& scales) {
    if (scales.empty()) throw std::invalid_argument("report: empty scale list");
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(Rational(0) < scales[k]))
            throw std::invalid_argument("report: scales must be positive");
        if (k > 0 && !(scales[k - 1] < scales[k]))
            throw std::invalid_argument("report: scales must be strictly increasing");
    }
    DimensionZeroReport rep;
    rep.all_witnessed = true;
    for (const Rational& delta : scales) {
        DimensionZeroRow row;
        row.delta = delta;
        row.mesh_value = mesh(components(X, delta));
        for (const Rational& eps : scales)
            if (row.mesh_value <= eps) {
                row.witnessed = true;
                row.witness_eps = eps;
                break;
            }
        rep.all_witnessed = rep.all_witnessed && row.witnessed;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::vector<int> separated_net(const FiniteMetricSpace& X, const Rational& S) {
    if (!(Rational(0) < S)) throw std::invalid_argument("net: separation must be positive");
    const int st = X.threshold_index(S);
    std::vector<int> net;
    for (int i = 0; i < X.size(); ++i) {
        bool ok = true;
        for (int m : net)
            if (X.value_index(i, m) < st || X.values()[X.value_index(i, m)] < S) {
                ok = false;
                break;
            }
        if (ok) net.push_back(i);
    }
    return net;
}

Rational largeness_radius(const FiniteMetricSpace& X, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("largeness_radius: empty subset");
    int worst = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : worst)
#endif
    for (int i = 0; i < X.size(); ++i) {
        int nearest = X.value_index(i, subset[0]);
        for (std::size_t k = 1; k < subset.size() && nearest > 0; ++k)
            nearest = std::min(nearest, X.value_index(i, subset[k]));
        worst = std::max(worst, nearest);
    }
    return X.values()[worst];
}

}  // namespace zerodim
