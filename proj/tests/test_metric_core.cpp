#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"
#include "zerodim/metric_space.hpp"

using namespace zerodim;
using zdtest::line_space;
using zdtest::oracle_capacity;
using zdtest::random_metric;
using zdtest::random_tower;
using zdtest::random_scaling;
using zdtest::random_ultrametric;

namespace {

bool same_partition(const Partition& a, const Partition& b) {
    return a.block_of == b.block_of && a.blocks == b.blocks;
}

}  // namespace

TEST_CASE("components of the line space at s=1") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    Partition p = components(X, Rational(1));
    REQUIRE(p.block_count() == 2);
    CHECK(p.blocks[0] == std::vector<int>{0, 1, 2});
    CHECK(p.blocks[1] == std::vector<int>{3});
    CHECK(same_partition(p, reference::components_chain_search(X, Rational(1))));
}

TEST_CASE("scale at or above the diameter gives a single block") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    CHECK(components(X, Rational(10)).block_count() == 1);
    CHECK(components(X, Rational(100)).block_count() == 1);
}

TEST_CASE("bi-cube components at s = 2^0") {
    FiniteMetricSpace X = FiniteMetricSpace::bicube(-2, 2);
    REQUIRE(X.size() == 32);
    Partition p = components(X, Rational(1));
    REQUIRE(p.block_count() == 4);
    for (const auto& b : p.blocks) CHECK(b.size() == 8);
    CHECK(same_partition(p, reference::components_chain_search(X, Rational(1))));
}

TEST_CASE("union-find components agree with chain search on random spaces") {
    zdtest::Rng rng(101);
    for (int iter = 0; iter < 60; ++iter) {
        FiniteMetricSpace X = iter % 2 ? random_metric(rng, 40) : random_ultrametric(rng, 40);
        for (int s = 0; s < 3; ++s) {
            Rational scale(static_cast<long long>(rng() % 5), static_cast<long long>(1 + rng() % 3));
            CHECK(same_partition(components(X, scale),
                                 reference::components_chain_search(X, scale)));
        }
    }
}

TEST_CASE("mesh of the line partition and degenerate partitions") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    CHECK(mesh(components(X, Rational(1))) == Rational(2));
    CHECK(mesh(components(X, Rational(1, 2))) == Rational(0));   // singletons
    CHECK(mesh(components(X, Rational(100))) == X.diameter());   // one block
}

TEST_CASE("capacity of the line space") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    auto [theta, Theta] = capacity(X, Rational(1), Rational(8));
    CHECK(theta == BigInt(2));
    CHECK(Theta == BigInt(2));
}

TEST_CASE("capacity diagonal law") {
    zdtest::Rng rng(5);
    FiniteMetricSpace X = random_ultrametric(rng, 20);
    for (int i = 1; i < static_cast<int>(X.values().size()); ++i) {
        auto [theta, Theta] = capacity(X, X.values()[i], X.values()[i]);
        CHECK(theta == BigInt(1));
        CHECK(Theta == BigInt(1));
    }
}

TEST_CASE("bi-cube capacities match 2^{l-k}") {
    FiniteMetricSpace X = FiniteMetricSpace::bicube(-2, 2);
    auto [theta, Theta] = capacity(X, Rational(1), Rational(4));
    CHECK(theta == BigInt(4));
    CHECK(Theta == BigInt(4));
    auto [ot, oT] = oracle_capacity(X, Rational(1), Rational(4));
    CHECK(theta == ot);
    CHECK(Theta == oT);
}

TEST_CASE("capacity rejects delta above eps") {
    FiniteMetricSpace X = line_space({0, 1});
    CHECK_THROWS_AS(capacity(X, Rational(2), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(capacity(X, Rational(0), Rational(1)), std::invalid_argument);
}

TEST_CASE("capacity multiplicativity over an intermediate scale") {
    zdtest::Rng rng(23);
    for (int iter = 0; iter < 30; ++iter) {
        FiniteMetricSpace X = random_ultrametric(rng, 25);
        const auto& vals = X.values();
        if (vals.size() < 4) continue;
        Rational delta = vals[1], mu = vals[vals.size() / 2], eps = vals.back();
        Partition pd = components(X, delta);
        Partition pm = components(X, mu);
        Partition pe = components(X, eps);
        for (const auto& eblk : pe.blocks) {
            std::vector<int> mids, dids;
            for (int v : eblk) {
                mids.push_back(pm.block_of[v]);
                dids.push_back(pd.block_of[v]);
            }
            std::sort(mids.begin(), mids.end());
            mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
            std::sort(dids.begin(), dids.end());
            dids.erase(std::unique(dids.begin(), dids.end()), dids.end());
            BigInt total(0);
            for (int mb : mids) {
                std::vector<int> sub;
                for (int v : pm.blocks[mb]) sub.push_back(pd.block_of[v]);
                std::sort(sub.begin(), sub.end());
                sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
                total += BigInt(sub.size());
            }
            CHECK(total == BigInt(dids.size()));
        }
    }
}

TEST_CASE("dimension zero report on ultrametric, line, and fine windows") {
    zdtest::Rng rng(31);
    FiniteMetricSpace U = random_ultrametric(rng, 20);
    std::vector<Rational> scales;
    for (std::size_t i = 1; i < U.values().size(); ++i) scales.push_back(U.values()[i]);
    DimensionZeroReport rep = dimension_zero_report(U, scales);
    for (const auto& row : rep.rows) CHECK(row.mesh_value <= row.delta);  // components are balls
    CHECK(rep.all_witnessed);

    FiniteMetricSpace L = line_space({0, 1, 2, 3, 4, 5});
    DimensionZeroReport lrep = dimension_zero_report(L, {Rational(1)});
    CHECK(lrep.rows[0].mesh_value == Rational(5));

    DimensionZeroReport tiny = dimension_zero_report(L, {Rational(1, 2)});
    CHECK(tiny.rows[0].mesh_value == Rational(0));

    CHECK_THROWS_AS(dimension_zero_report(L, {}), std::invalid_argument);
    CHECK_THROWS_AS(dimension_zero_report(L, {Rational(2), Rational(1)}), std::invalid_argument);
}

TEST_CASE("separated net follows input order and is maximal") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    CHECK(separated_net(X, Rational(2)) == std::vector<int>{0, 2, 3});
    CHECK(separated_net(X, Rational(1)).size() == 4);   // everything already separated
    CHECK(separated_net(X, Rational(100)) == std::vector<int>{0});
}

TEST_CASE("net separation and largeness on random spaces") {
    zdtest::Rng rng(41);
    for (int iter = 0; iter < 50; ++iter) {
        FiniteMetricSpace X = iter % 2 ? random_metric(rng, 30) : random_ultrametric(rng, 30);
        Rational S(static_cast<long long>(1 + rng() % 4), static_cast<long long>(1 + rng() % 3));
        std::vector<int> net = separated_net(X, S);
        for (std::size_t i = 0; i < net.size(); ++i)
            for (std::size_t j = i + 1; j < net.size(); ++j) CHECK(X.dist(net[i], net[j]) >= S);
        CHECK(largeness_radius(X, net) < S);
    }
}

TEST_CASE("largeness radius examples") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    std::vector<int> all{0, 1, 2, 3};
    CHECK(largeness_radius(X, all) == Rational(0));
    CHECK(largeness_radius(X, {0, 3}) == Rational(2));
    CHECK(largeness_radius(X, {0}) == Rational(10));
    CHECK_THROWS_AS(largeness_radius(X, {}), std::invalid_argument);
}

TEST_CASE("partitions refine as the scale grows") {
    zdtest::Rng rng(53);
    for (int iter = 0; iter < 40; ++iter) {
        FiniteMetricSpace X = iter % 2 ? random_metric(rng, 30) : random_ultrametric(rng, 30);
        Rational s1(static_cast<long long>(rng() % 4), static_cast<long long>(1 + rng() % 3));
        Rational s2 = s1 + Rational(static_cast<long long>(rng() % 3), 2);
        Partition p1 = components(X, s1);
        Partition p2 = components(X, s2);
        for (const auto& blk : p1.blocks) {
            int target = p2.block_of[blk[0]];
            for (int v : blk) CHECK(p2.block_of[v] == target);
        }
    }
}

TEST_CASE("ultrametric components coincide with closed balls") {
    zdtest::Rng rng(61);
    for (int iter = 0; iter < 30; ++iter) {
        FiniteMetricSpace X = random_ultrametric(rng, 25);
        REQUIRE(X.is_ultrametric());
        Rational s = X.values()[rng() % X.values().size()];
        Partition p = components(X, s);
        for (int x = 0; x < X.size(); ++x)
            for (int y = 0; y < X.size(); ++y)
                CHECK((p.block_of[x] == p.block_of[y]) == (X.dist(x, y) <= s));
    }
}

TEST_CASE("matrix loader validates the axioms") {
    CHECK_THROWS(FiniteMetricSpace::from_matrix({"a", "b"}, {{Rational(0), Rational(1)},
                                                             {Rational(2), Rational(0)}}));
    CHECK_THROWS(FiniteMetricSpace::from_matrix({"a", "b"}, {{Rational(1), Rational(1)},
                                                             {Rational(1), Rational(0)}}));
    CHECK_THROWS(FiniteMetricSpace::from_matrix({"a", "b"}, {{Rational(0), Rational(0)},
                                                             {Rational(0), Rational(0)}}));
}

TEST_CASE("bicube is ultrametric on small widths") {
    FiniteMetricSpace X = FiniteMetricSpace::bicube(-1, 2);
    for (int i = 0; i < X.size(); ++i)
        for (int j = 0; j < X.size(); ++j)
            for (int k = 0; k < X.size(); ++k)
                CHECK(X.dist(i, j) <= std::max(X.dist(i, k), X.dist(k, j)));
}
