#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"
#include "zerodim/io.hpp"
#include "zerodim/tower.hpp"

using namespace zerodim;
using zdtest::line_space;
using zdtest::oracle_capacity;
using zdtest::random_scaling;
using zdtest::random_tower;

namespace {

// p,q,r -> u,v -> w with pred(u) = {p,q}, pred(v) = {r}
Tower example_tower() {
    return Tower::build_explicit({Rational(0), Rational(1), Rational(2)},
                                 {{0, 0, 1}, {0, 0}, {-1}});
}

Tower binary_tower(int depth) {
    std::vector<Rational> labels;
    std::vector<std::vector<int>> parents(depth + 1);
    for (int k = 0; k <= depth; ++k) {
        labels.push_back(Rational(k));
        int width = 1 << (depth - k);
        for (int p = 0; p < width; ++p) parents[k].push_back(k == depth ? -1 : p / 2);
    }
    return Tower::build_explicit(std::move(labels), std::move(parents));
}

}  // namespace

TEST_CASE("example tower validates with the right flags") {
    Tower T = example_tower();
    CHECK(T.pruned());
    CHECK(!T.homogeneous());
    CHECK(T.level_size(0) == 3);
    CHECK(T.deg0(T.node_at(2, 0)) == BigInt(3));
}

TEST_CASE("binary tower is homogeneous with degree 2") {
    Tower T = binary_tower(4);
    CHECK(T.pruned());
    CHECK(T.homogeneous());
    DegreeProfile prof = degree_profile(T);
    for (int k = 0; k < 4; ++k) CHECK(prof.deg(k, k + 1) == BigInt(2));
}

TEST_CASE("invalid towers are rejected") {
    // two maximal nodes on top
    CHECK_THROWS_AS(Tower::build_explicit({Rational(0), Rational(1)}, {{0, 1}, {-1, -1}}),
                    std::invalid_argument);
    // a node below the top with no parent (level gap)
    CHECK_THROWS_AS(Tower::build_explicit({Rational(0), Rational(1)}, {{0, -1}, {-1}}),
                    std::invalid_argument);
    // duplicate ids in the file format
    json j;
    j["levels"] = {0, 1};
    j["nodes"] = json::array();
    j["nodes"].push_back({{"id", "x"}, {"level", 0}, {"parent", "t"}});
    j["nodes"].push_back({{"id", "x"}, {"level", 0}, {"parent", "t"}});
    j["nodes"].push_back({{"id", "t"}, {"level", 1}, {"parent", nullptr}});
    CHECK_THROWS_AS(tower_from_json(j), std::invalid_argument);
    // a parent two levels up
    json g;
    g["levels"] = {0, 1, 2};
    g["nodes"] = json::array();
    g["nodes"].push_back({{"id", "x"}, {"level", 0}, {"parent", "t"}});
    g["nodes"].push_back({{"id", "m"}, {"level", 1}, {"parent", "t"}});
    g["nodes"].push_back({{"id", "t"}, {"level", 2}, {"parent", nullptr}});
    CHECK_THROWS_AS(tower_from_json(g), std::invalid_argument);
}

TEST_CASE("meets in the example tower") {
    Tower T = example_tower();
    int p = T.node_at(0, 0), q = T.node_at(0, 1), r = T.node_at(0, 2);
    CHECK(T.meet(p, p) == p);
    CHECK(T.meet(p, q) == T.node_at(1, 0));
    CHECK(T.meet(p, r) == T.node_at(2, 0));
    CHECK(T.meet(q, r) == T.node_at(2, 0));
}

TEST_CASE("level labeling relative to a base point") {
    Tower T = example_tower();
    std::vector<long long> base = T.level_labeling(T.node_at(0, 0));
    CHECK(base == std::vector<long long>{0, 1, 2});
    std::vector<long long> mid = T.level_labeling(T.node_at(1, 0));
    CHECK(mid == std::vector<long long>{-1, 0, 1});
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(mid[k] == base[k] - 1);
}

TEST_CASE("degree profile of the example, binary, and single-branch towers") {
    Tower T = example_tower();
    DegreeProfile prof = degree_profile(T);
    CHECK(prof.deg(0, 2) == BigInt(3));
    CHECK(prof.Deg(0, 2) == BigInt(3));
    CHECK(prof.deg(0, 1) == BigInt(1));
    CHECK(prof.Deg(0, 1) == BigInt(2));
    CHECK(prof.deg(1, 1) == BigInt(1));

    Tower B = binary_tower(3);
    DegreeProfile bp = degree_profile(B);
    for (int k = 0; k <= 3; ++k)
        for (int l = k; l <= 3; ++l) {
            CHECK(bp.deg(k, l) == BigInt::pow2(l - k));
            CHECK(bp.Deg(k, l) == BigInt::pow2(l - k));
        }

    Tower single = Tower::build_explicit({Rational(0), Rational(1), Rational(2)},
                                         {{0}, {0}, {-1}});
    DegreeProfile sp = degree_profile(single);
    for (int k = 0; k <= 2; ++k)
        for (int l = k; l <= 2; ++l) {
            CHECK(sp.deg(k, l) == BigInt(1));
            CHECK(sp.Deg(k, l) == BigInt(1));
        }
}

TEST_CASE("boundary of the example tower under an explicit scaling") {
    Tower T = example_tower();
    ScalingFunction f{{Rational(1), Rational(2), Rational(4)}};
    FiniteMetricSpace B = boundary(T, f);
    REQUIRE(B.size() == 3);
    CHECK(B.dist(0, 1) == Rational(2));
    CHECK(B.dist(0, 2) == Rational(4));
    CHECK(B.dist(1, 2) == Rational(4));
    CHECK(B.is_ultrametric());
}

TEST_CASE("boundary of a single branch is a point") {
    Tower single = Tower::build_explicit({Rational(0), Rational(1)}, {{0}, {-1}});
    FiniteMetricSpace B = boundary(single, ScalingFunction{{Rational(1), Rational(2)}});
    CHECK(B.size() == 1);
}

TEST_CASE("binary tower boundary under dyadic scaling reproduces bi-cube capacities") {
    Tower B3 = binary_tower(3);
    FiniteMetricSpace B = boundary(B3, ScalingFunction::dyadic(4));
    for (int k = 1; k <= 3; ++k)
        for (int l = k; l <= 3; ++l) {
            auto [theta, Theta] = capacity(B, Rational::pow2(k), Rational::pow2(l));
            CHECK(theta == BigInt::pow2(l - k));
            CHECK(Theta == BigInt::pow2(l - k));
            auto [ot, oT] = oracle_capacity(B, Rational::pow2(k), Rational::pow2(l));
            CHECK(ot == theta);
            CHECK(oT == Theta);
        }
}

TEST_CASE("parallel boundary agrees with the serial reference") {
    zdtest::Rng rng(211);
    for (int iter = 0; iter < 25; ++iter) {
        Tower T = random_tower(rng, 6, 40);
        ScalingFunction f = random_scaling(rng, T.level_count());
        FiniteMetricSpace a = boundary(T, f);
        FiniteMetricSpace b = reference::boundary_serial(T, f);
        REQUIRE(a.size() == b.size());
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < a.size(); ++j) CHECK(a.dist(i, j) == b.dist(i, j));
    }
}

TEST_CASE("partition coincidence under different scalings") {
    zdtest::Rng rng(223);
    for (int iter = 0; iter < 15; ++iter) {
        Tower T = random_tower(rng, 5, 30);
        ScalingFunction f = random_scaling(rng, T.level_count());
        ScalingFunction g = random_scaling(rng, T.level_count());
        FiniteMetricSpace Bf = boundary(T, f);
        FiniteMetricSpace Bg = boundary(T, g);
        for (int k = 0; k < T.level_count(); ++k) {
            Partition pf = components(Bf, f.values[k]);
            Partition pg = components(Bg, g.values[k]);
            CHECK(pf.block_of == pg.block_of);
        }
    }
}

TEST_CASE("level subtower composition") {
    Tower B4 = binary_tower(4);
    Tower sub = level_subtower(B4, {0, 2, 4});
    CHECK(sub.level_count() == 3);
    CHECK(sub.homogeneous());
    DegreeProfile prof = degree_profile(sub);
    CHECK(prof.deg(0, 1) == BigInt(4));
    CHECK(prof.deg(1, 2) == BigInt(4));
    // base-to-top totals preserved
    CHECK(sub.deg0(sub.node_at(2, 0)) == BigInt(16));

    Tower all = level_subtower(B4, {0, 1, 2, 3, 4});
    CHECK(all.node_count() == B4.node_count());

    Tower top = level_subtower(B4, {4});
    CHECK(top.node_count() == 1);

    CHECK_THROWS_AS(level_subtower(B4, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(level_subtower(B4, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("canonical tower of the line space") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    CanonicalTower ct = canonical_tower(X, {Rational(1), Rational(8)});
    CHECK(ct.tower.level_size(0) == 2);
    CHECK(ct.tower.level_size(1) == 1);
    DegreeProfile prof = degree_profile(ct.tower);
    CHECK(prof.deg(0, 1) == BigInt(2));
    CHECK(ct.branch_of[0] == ct.branch_of[2]);
    CHECK(ct.branch_of[0] != ct.branch_of[3]);
}

TEST_CASE("canonical tower round trip on ultrametric spaces") {
    zdtest::Rng rng(227);
    for (int iter = 0; iter < 15; ++iter) {
        FiniteMetricSpace X = zdtest::random_ultrametric(rng, 25);
        std::vector<Rational> L(X.values().begin() + 1, X.values().end());
        CanonicalTower ct = canonical_tower(X, L);
        // component partitions pull back along the canonical map at every level
        for (std::size_t k = 0; k < L.size(); ++k) {
            Partition px = components(X, L[k]);
            FiniteMetricSpace B = boundary(ct.tower, ScalingFunction::identity(ct.tower.level_labels()));
            Partition pb = components(B, L[k]);
            for (int x = 0; x < X.size(); ++x)
                for (int y = 0; y < X.size(); ++y)
                    CHECK((px.block_of[x] == px.block_of[y]) ==
                          (pb.block_of[ct.branch_of[x]] == pb.block_of[ct.branch_of[y]]));
        }
    }
}

TEST_CASE("canonical tower rejects windows that cannot reach the top") {
    FiniteMetricSpace X = line_space({0, 10, 20});
    CHECK_THROWS_AS(canonical_tower(X, {Rational(1), Rational(2)}), std::invalid_argument);
}

TEST_CASE("canonical map distance bound") {
    FiniteMetricSpace X = line_space({0, 1, 2, 10});
    CHECK(canonical_map_bound_check(X, {Rational(1), Rational(8)}).pass);

    zdtest::Rng rng(229);
    for (int iter = 0; iter < 10; ++iter) {
        FiniteMetricSpace U = zdtest::random_ultrametric(rng, 20);
        std::vector<Rational> L(U.values().begin() + 1, U.values().end());
        CHECK(canonical_map_bound_check(U, L).pass);

        // for ultrametric inputs with the full value set the bound is an
        // equality: components are balls
        CanonicalTower ct = canonical_tower(U, L);
        for (int x = 0; x < U.size(); ++x)
            for (int y = x + 1; y < U.size(); ++y) {
                Rational rhs;
                for (const Rational& lam : L)
                    if (U.dist(x, y) <= lam) {
                        rhs = lam;
                        break;
                    }
                Rational lhs(0);
                if (ct.branch_of[x] != ct.branch_of[y]) {
                    int m = ct.tower.meet(ct.tower.node_at(0, ct.branch_of[x]),
                                          ct.tower.node_at(0, ct.branch_of[y]));
                    lhs = ct.tower.level_label(ct.tower.node_level(m));
                }
                if (ct.branch_of[x] != ct.branch_of[y]) CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("group chain towers") {
    GroupChain c126{{BigInt(1), BigInt(2), BigInt(6)}};
    Tower T = group_chain_tower(c126, 100);
    CHECK(T.homogeneous());
    DegreeProfile prof = degree_profile(T);
    CHECK(prof.deg(0, 1) == BigInt(2));
    CHECK(prof.deg(1, 2) == BigInt(3));

    GroupChain c8{{BigInt(1), BigInt(2), BigInt(4), BigInt(8)}};
    Tower B = group_chain_tower(c8, 100);
    DegreeProfile bp = degree_profile(B);
    for (int k = 0; k < 3; ++k) CHECK(bp.deg(k, k + 1) == BigInt(2));

    GroupChain bad{{BigInt(1), BigInt(3), BigInt(5)}};
    CHECK_THROWS_AS(group_chain_tower(bad, 100), std::invalid_argument);
}

TEST_CASE("counted group chain towers agree with explicit ones on degree profiles") {
    GroupChain c{{BigInt(1), BigInt(3), BigInt(12), BigInt(48)}};
    Tower full = group_chain_tower(c, 1000);    // fully explicit
    Tower counted = group_chain_tower(c, 4);    // bundles below the cutoff
    CHECK(full.fully_explicit());
    CHECK(!counted.fully_explicit());
    DegreeProfile a = degree_profile(full);
    DegreeProfile b = degree_profile(counted);
    for (int l = 0; l < a.levels(); ++l)
        for (int lam = 0; lam <= l; ++lam) {
            CHECK(a.deg(lam, l) == b.deg(lam, l));
            CHECK(a.Deg(lam, l) == b.Deg(lam, l));
        }
    CHECK(counted.total_level_size(0) == BigInt(48));
}

TEST_CASE("degrees equal boundary capacities by independent computation") {
    zdtest::Rng rng(233);
    for (int iter = 0; iter < 20; ++iter) {
        Tower T = random_tower(rng, 5, 40);
        ScalingFunction f = random_scaling(rng, T.level_count());
        FiniteMetricSpace B = boundary(T, f);
        DegreeProfile prof = degree_profile(T);
        for (int k = 0; k < T.level_count(); ++k)
            for (int n = k; n < T.level_count(); ++n) {
                auto [theta, Theta] = capacity(B, f.values[k], f.values[n]);
                CHECK(theta == prof.deg(k, n));
                CHECK(Theta == prof.Deg(k, n));
            }
    }
}

TEST_CASE("bundled tower file round trip with layers") {
    json j;
    j["levels"] = {0, 1, 2, 3};
    j["nodes"] = json::array();
    j["nodes"].push_back({{"id", "top"}, {"level", 3}, {"parent", nullptr}});
    j["nodes"].push_back({{"id", "a"}, {"level", 2}, {"parent", "top"}});
    j["nodes"].push_back({{"id", "b"}, {"level", 2}, {"parent", "top"}});
    j["bundles"] = json::array();
    j["bundles"].push_back(
        {{"node", "a"}, {"fibers", json::array({json::array({"7", "100"})})}});
    j["bundles"].push_back(
        {{"node", "b"},
         {"fibers", json::array({json::array({"7", "50"}), json::array({"9", "10"})})}});
    j["layers"] = json::array();
    json layer;
    layer["level"] = 1;
    layer["flavors"] = json::array();
    layer["flavors"].push_back(
        {{"deg0", "7"}, {"children", json::array({json::array({"1", "7"})})}});
    layer["flavors"].push_back(
        {{"deg0", "9"}, {"children", json::array({json::array({"1", "9"})})}});
    j["layers"].push_back(layer);

    Tower T = tower_from_json(j);
    CHECK(T.explicit_base() == 2);
    CHECK(T.deg0(T.node_by_name("a")) == BigInt(700));
    CHECK(T.deg0(T.node_by_name("b")) == BigInt(350 + 90));
    CHECK(T.total_level_size(1) == BigInt(160));
    CHECK(T.total_level_size(0) == BigInt(700 + 440));

    json round = tower_to_json(T);
    Tower T2 = tower_from_json(round);
    CHECK(T2.deg0(T2.node_by_name("a")) == T.deg0(T.node_by_name("a")));
    CHECK(T2.total_level_size(0) == T.total_level_size(0));
    DegreeProfile p1 = degree_profile(T), p2 = degree_profile(T2);
    for (int l = 0; l < p1.levels(); ++l)
        for (int lam = 0; lam <= l; ++lam) CHECK(p1.deg(lam, l) == p2.deg(lam, l));
}
