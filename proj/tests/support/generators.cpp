#include "support/generators.hpp"

#include <algorithm>
#include <string>

namespace zdtest {

using namespace zerodim;

Tower random_tower(Rng& rng, int max_levels, int max_base) {
    const int levels = 2 + static_cast<int>(rng() % (max_levels - 1));
    std::vector<int> sizes(levels);
    sizes[levels - 1] = 1;
    for (int k = levels - 2; k >= 0; --k) {
        int grow = 1 + static_cast<int>(rng() % 3);
        sizes[k] = std::min(max_base, sizes[k + 1] * grow + static_cast<int>(rng() % 3));
        sizes[k] = std::max(sizes[k], sizes[k + 1]);  // every parent keeps a child
    }
    std::vector<std::vector<int>> parents(levels);
    parents[levels - 1] = {-1};
    for (int k = levels - 2; k >= 0; --k) {
        parents[k].resize(sizes[k]);
        for (int p = 0; p < sizes[k + 1]; ++p) parents[k][p] = p;
        for (int p = sizes[k + 1]; p < sizes[k]; ++p)
            parents[k][p] = static_cast<int>(rng() % sizes[k + 1]);
    }
    std::vector<Rational> labels;
    for (int k = 0; k < levels; ++k) labels.push_back(Rational(k));
    Tower::Data d;
    d.labels = std::move(labels);
    d.explicit_base = 0;
    d.parents = std::move(parents);
    return Tower::validate(std::move(d));
}

ScalingFunction random_scaling(Rng& rng, int levels) {
    ScalingFunction f;
    Rational cur(static_cast<long long>(1 + rng() % 3), static_cast<long long>(1 + rng() % 4));
    for (int k = 0; k < levels; ++k) {
        f.values.push_back(cur);
        cur += Rational(static_cast<long long>(1 + rng() % 5), static_cast<long long>(1 + rng() % 3));
    }
    return f;
}

FiniteMetricSpace random_ultrametric(Rng& rng, int max_points) {
    for (;;) {
        Tower T = random_tower(rng, 5, max_points);
        if (T.level_size(0) >= 2 && T.level_size(0) <= max_points)
            return boundary(T, random_scaling(rng, T.level_count()));
    }
}

FiniteMetricSpace random_metric(Rng& rng, int max_points) {
    const int n = 2 + static_cast<int>(rng() % (max_points - 1));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Rational w(static_cast<long long>(64 + rng() % 65), 64);
            d[i][j] = w;
            d[j][i] = w;
        }
    return FiniteMetricSpace::from_matrix(std::move(ids), d);
}

FiniteMetricSpace line_space(const std::vector<long long>& coords) {
    std::vector<std::string> ids;
    std::vector<Rational> cs;
    for (long long c : coords) {
        ids.push_back(std::to_string(c));
        cs.push_back(Rational(c));
    }
    return FiniteMetricSpace::line(std::move(ids), cs);
}

FiniteMetricSpace chain_space(const GroupChain& chain) {
    Tower T = group_chain_tower(chain, chain.orders.back().to_longlong());
    ScalingFunction f;
    f.values.push_back(Rational(1, 2));
    for (int k = 1; k < T.level_count(); ++k) f.values.push_back(Rational(k));
    return boundary(T, f);
}

std::pair<Tower, Tower> key_lemma_instance(int K) {
    // two flavors per counted level of T; deg0 of the branch flavor sits at
    // the condition-(1) equality point, the sibling flavor slightly above
    const int top = K + 1;
    std::vector<std::vector<Tower::Flavor>> layers(top);
    layers[0].push_back(Tower::Flavor{BigInt(1), {}});
    layers[0].push_back(Tower::Flavor{BigInt(1), {}});

    std::vector<BigInt> h(top + 2);
    h[0] = BigInt(1);
    std::vector<BigInt> Tmax(top + 1);
    Tmax[0] = BigInt(1);
    BigInt d_prev0(1), d_prev1(1);
    for (int k = 1; k <= K; ++k) {
        BigInt t_k = BigInt::pow(BigInt(4), k + 5) * h[k - 1];
        BigInt c0 = (Rational(t_k, d_prev0)).ceil();
        BigInt c1 = (Rational(t_k, d_prev1)).ceil() + BigInt(3);
        Tower::Flavor f0, f1;
        f0.children.emplace_back(0, c0);
        f0.deg0 = c0 * d_prev0;
        f1.children.emplace_back(1, c1);
        f1.deg0 = c1 * d_prev1;
        layers[k].push_back(f0);
        layers[k].push_back(f1);
        d_prev0 = f0.deg0;
        d_prev1 = f1.deg0;
        Tmax[k] = d_prev0 < d_prev1 ? d_prev1 : d_prev0;
        // h_k: smallest multiple of h_{k-1} at or above 4^k Tmax[k]
        BigInt need = BigInt::pow(BigInt(4), k) * Tmax[k];
        h[k] = h[k - 1] * Rational(need, h[k - 1]).ceil();
    }
    // top bundle: enough branch copies for condition (1) at k = K+1
    BigInt t_top = BigInt::pow(BigInt(4), top + 5) * h[K];
    BigInt n0 = Rational(t_top, d_prev0).ceil();
    BigInt n1(5);
    Tower::Data d;
    d.explicit_base = top;
    for (int k = 0; k <= top; ++k) d.labels.push_back(Rational(k));
    d.parents = {{-1}};
    d.layers = std::move(layers);
    d.bundles = {{{0, n0}, {1, n1}}};
    Tower T = Tower::validate(std::move(d));

    BigInt T_top = T.deg0(T.node_at(top, 0));
    BigInt need_top = BigInt::pow(BigInt(4), top) * T_top;
    h[top] = h[K] * Rational(need_top, h[K]).ceil();

    GroupChain orders;
    for (int k = 0; k <= top; ++k) orders.orders.push_back(h[k]);
    Tower H = group_chain_tower(orders, 4);
    return {std::move(T), std::move(H)};
}

std::pair<Tower, Tower> random_key_lemma_instance(int K, Rng& rng) {
    const int top = K + 1;
    std::vector<std::vector<Tower::Flavor>> layers(top);
    const int unit_flavors = 2;
    for (int f = 0; f < unit_flavors; ++f) layers[0].push_back(Tower::Flavor{BigInt(1), {}});

    std::vector<BigInt> h(top + 2);
    h[0] = BigInt(1);
    std::vector<BigInt> prev_deg0{BigInt(1), BigInt(1)};
    for (int k = 1; k <= K; ++k) {
        BigInt t_k = BigInt::pow(BigInt(4), k + 5) * h[k - 1];
        std::vector<BigInt> deg0s;
        const int flavors = 2 + static_cast<int>(rng() % 2);
        for (int f = 0; f < flavors; ++f) {
            // mixed children across the layer below, total weight >= t_k
            Tower::Flavor fl;
            BigInt need = t_k + t_k * BigInt(rng() % 8) / BigInt(64);  // up to ~12% slack
            BigInt got(0);
            for (std::size_t cf = 0; cf < layers[k - 1].size(); ++cf) {
                bool last = cf + 1 == layers[k - 1].size();
                const BigInt& w = layers[k - 1][cf].deg0;
                BigInt cnt;
                if (last) {
                    BigInt missing = need - got;
                    cnt = missing <= BigInt(0) ? BigInt(1) : Rational(missing, w).ceil();
                } else {
                    cnt = Rational(need, w * BigInt(layers[k - 1].size() * 2)).ceil() +
                          BigInt(rng() % 5);
                }
                if (cnt <= BigInt(0)) cnt = BigInt(1);
                fl.children.emplace_back(static_cast<int>(cf), cnt);
                got += cnt * w;
            }
            fl.deg0 = got;
            deg0s.push_back(got);
            layers[k].push_back(std::move(fl));
        }
        BigInt Tmax = deg0s[0];
        for (auto& d : deg0s)
            if (Tmax < d) Tmax = d;
        BigInt need = BigInt::pow(BigInt(4), k) * Tmax;
        need += need * BigInt(rng() % 8) / BigInt(64);
        h[k] = h[k - 1] * Rational(need, h[k - 1]).ceil();
        prev_deg0 = deg0s;
    }
    BigInt t_top = BigInt::pow(BigInt(4), top + 5) * h[K];
    Tower::Data d;
    d.explicit_base = top;
    for (int k = 0; k <= top; ++k) d.labels.push_back(Rational(k));
    d.parents = {{-1}};
    d.bundles.resize(1);
    {
        BigInt got(0);
        for (std::size_t f = 0; f < layers[K].size(); ++f) {
            bool last = f + 1 == layers[K].size();
            const BigInt& w = layers[K][f].deg0;
            BigInt cnt = last && got < t_top ? Rational(t_top - got, w).ceil()
                                             : BigInt(1 + rng() % 7);
            d.bundles[0].emplace_back(static_cast<int>(f), cnt);
            got += cnt * w;
        }
    }
    d.layers = std::move(layers);
    Tower T = Tower::validate(std::move(d));

    BigInt T_top = T.deg0(T.node_at(top, 0));
    BigInt need_top = BigInt::pow(BigInt(4), top) * T_top;
    h[top] = h[K] * Rational(need_top, h[K]).ceil();

    GroupChain orders;
    for (int k = 0; k <= top; ++k) orders.orders.push_back(h[k]);
    Tower H = group_chain_tower(orders, 4);
    return {std::move(T), std::move(H)};
}

std::pair<BigInt, BigInt> oracle_capacity(const FiniteMetricSpace& X, const Rational& delta,
                                          const Rational& eps) {
    Partition pd = reference::components_chain_search(X, delta);
    Partition pe = reference::components_chain_search(X, eps);
    BigInt lo, hi;
    bool first = true;
    for (const auto& blk : pe.blocks) {
        std::vector<int> seen;
        for (int v : blk) seen.push_back(pd.block_of[v]);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        BigInt c(seen.size());
        if (first) {
            lo = c;
            hi = c;
            first = false;
        } else {
            if (c < lo) lo = c;
            if (hi < c) hi = c;
        }
    }
    return {lo, hi};
}

}  // namespace zdtest
