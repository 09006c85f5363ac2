#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"
#include "zerodim/morphism.hpp"

using namespace zerodim;
using zdtest::random_scaling;
using zdtest::random_tower;

namespace {

TowerPtr binary_tower(int depth) {
    std::vector<Rational> labels;
    std::vector<std::vector<int>> parents(depth + 1);
    for (int k = 0; k <= depth; ++k) {
        labels.push_back(Rational(k));
        int width = 1 << (depth - k);
        for (int p = 0; p < width; ++p) parents[k].push_back(k == depth ? -1 : p / 2);
    }
    return std::make_shared<Tower>(Tower::build_explicit(std::move(labels), std::move(parents)));
}

TowerPtr uniform_tower(int depth, int arity) {
    std::vector<Rational> labels;
    std::vector<std::vector<int>> parents(depth + 1);
    int width = 1;
    for (int k = depth; k >= 0; --k) {
        labels.insert(labels.begin(), Rational(k));
        parents[k].resize(width);
        for (int p = 0; p < width; ++p) parents[k][p] = k == depth ? -1 : p / arity;
        width *= arity;
    }
    return std::make_shared<Tower>(Tower::build_explicit(std::move(labels), std::move(parents)));
}

TowerPtr single_branch(int depth) { return uniform_tower(depth, 1); }

TowerMap identity_map(const TowerPtr& T) {
    TowerMap phi;
    phi.source = T;
    phi.target = T;
    for (int k = 0; k < T->level_count(); ++k) phi.level_map.push_back(k);
    phi.node_map.resize(T->node_count());
    for (int v = 0; v < T->node_count(); ++v) phi.node_map[v] = v;
    return phi;
}

}  // namespace

TEST_CASE("identity map classifies as an isomorphism") {
    TowerPtr B = binary_tower(3);
    TowerMapFlags flags = classify_map(identity_map(B));
    CHECK(flags.level_preserving);
    CHECK(flags.monotone);
    CHECK(flags.embedding);
    CHECK(flags.immersion);
    CHECK(flags.isomorphism);
}

TEST_CASE("collapsing a binary tower onto a single branch is not an immersion") {
    TowerPtr B = binary_tower(3);
    TowerPtr S = single_branch(3);
    TowerMap phi;
    phi.source = B;
    phi.target = S;
    for (int k = 0; k <= 3; ++k) phi.level_map.push_back(k);
    phi.node_map.resize(B->node_count());
    for (int v = 0; v < B->node_count(); ++v)
        phi.node_map[v] = S->node_at(B->node_level(v), 0);
    TowerMapFlags flags = classify_map(phi);
    CHECK(flags.level_preserving);
    CHECK(flags.monotone);
    CHECK(!flags.embedding);
    CHECK(!flags.immersion);  // two base nodes with meet at the top merge
}

TEST_CASE("merging only sibling pairs is an immersion") {
    TowerPtr B = binary_tower(3);
    // target: same upper structure, base level halved (each parent one child)
    std::vector<Rational> labels{Rational(0), Rational(1), Rational(2), Rational(3)};
    std::vector<std::vector<int>> parents(4);
    parents[3] = {-1};
    parents[2] = {0, 0};
    parents[1] = {0, 0, 1, 1};
    parents[0] = {0, 1, 2, 3};
    TowerPtr T = std::make_shared<Tower>(Tower::build_explicit(labels, parents));
    TowerMap phi;
    phi.source = B;
    phi.target = T;
    for (int k = 0; k <= 3; ++k) phi.level_map.push_back(k);
    phi.node_map.resize(B->node_count());
    for (int v = 0; v < B->node_count(); ++v) {
        int lev = B->node_level(v);
        int pos = B->node_pos(v);
        phi.node_map[v] = T->node_at(lev, lev == 0 ? pos / 2 : pos);
    }
    TowerMapFlags flags = classify_map(phi);
    CHECK(flags.level_preserving);
    CHECK(flags.monotone);
    CHECK(flags.immersion);
    CHECK(!flags.embedding);

    // the level map reaches the target base, so the boundary relation is
    // single valued
    BoundaryMap bm = boundary_map(phi, ScalingFunction::dyadic(4), ScalingFunction::dyadic(4));
    CHECK(bm.relation().single_valued());
    CHECK(bm.relation().surjective());
}

TEST_CASE("boundary map of the identity is the identity relation") {
    TowerPtr B = binary_tower(3);
    ScalingFunction f = ScalingFunction::dyadic(4);
    BoundaryMap bm = boundary_map(identity_map(B), f, f);
    MultiMap rel = bm.relation();
    CHECK(rel.single_valued());
    for (int p = 0; p < B->level_size(0); ++p) CHECK(rel.image(p) == std::vector<int>{p});
}

TEST_CASE("a map hitting only level >= 1 induces a multi-valued boundary relation") {
    TowerPtr S = single_branch(2);
    TowerPtr B = binary_tower(3);
    TowerMap phi;
    phi.source = S;
    phi.target = B;
    phi.level_map = {1, 2, 3};
    phi.node_map.resize(S->node_count());
    for (int v = 0; v < S->node_count(); ++v)
        phi.node_map[v] = B->node_at(S->node_level(v) + 1, 0);
    REQUIRE(classify_map(phi).monotone);
    BoundaryMap bm = boundary_map(phi, ScalingFunction::dyadic(3), ScalingFunction::dyadic(4));
    MultiMap rel = bm.relation();
    CHECK(rel.image(0).size() == 2);  // both branches below the level-1 image node
}

TEST_CASE("boundary properties of an immersion and of a subtower inclusion") {
    TowerPtr B4 = binary_tower(4);
    ScalingFunction f = ScalingFunction::dyadic(5);
    // subtower inclusion T^L -> T for L = {0, 2, 4}
    Tower sub = level_subtower(*B4, {0, 2, 4});
    TowerPtr S = std::make_shared<Tower>(std::move(sub));
    TowerMap inc;
    inc.source = S;
    inc.target = B4;
    inc.level_map = {0, 2, 4};
    inc.node_map.resize(S->node_count());
    for (int v = 0; v < S->node_count(); ++v)
        inc.node_map[v] = B4->node_by_name(S->node_name(v));
    TowerMapFlags flags = classify_map(inc);
    CHECK(flags.embedding);
    CHECK(flags.immersion);
    ScalingFunction fs{{f.values[0], f.values[2], f.values[4]}};
    BoundaryPropertyReport rep = check_boundary_properties(inc, fs, f);
    CHECK(rep.forward_level_bound);
    CHECK(rep.immersion_inverse_bound);
    CHECK(rep.image_down_cofinal);
    CHECK(rep.surjective);
    CHECK(rep.certificate.macro_equivalence);
}

TEST_CASE("build_embedding into a wider tower") {
    TowerPtr S = binary_tower(2);
    TowerPtr T = uniform_tower(2, 4);
    std::vector<int> lm{0, 1, 2};
    TowerMap phi = build_embedding(S, T, lm);
    TowerMapFlags flags = classify_map(phi);
    CHECK(flags.embedding);
    CHECK(!flags.isomorphism);
    // image hits exactly 2 of the 4 children of every internal image node
    for (int k = 1; k <= 2; ++k)
        for (int p = 0; p < S->level_size(k); ++p) {
            int image = phi.node_map[S->node_at(k, p)];
            int hits = 0;
            for (int c : T->children(image))
                for (int v = 0; v < S->node_count(); ++v)
                    if (phi.node_map[v] == c) ++hits;
            CHECK(hits == 2);
        }
}

TEST_CASE("build_embedding identity isomorphism and degree failures") {
    TowerPtr B = binary_tower(3);
    std::vector<int> lm{0, 1, 2, 3};
    TowerMap iso = build_embedding(B, B, lm, /*isomorphism_mode=*/true);
    CHECK(classify_map(iso).isomorphism);

    TowerPtr S3 = uniform_tower(2, 3);
    TowerPtr T2 = binary_tower(2);
    CHECK_THROWS_AS(build_embedding(S3, T2, std::vector<int>{0, 1, 2}), std::invalid_argument);
}

TEST_CASE("random embeddings always pass the classifier") {
    zdtest::Rng rng(307);
    for (int iter = 0; iter < 30; ++iter) {
        int depth = 1 + static_cast<int>(rng() % 3);
        int a = 1 + static_cast<int>(rng() % 2);
        TowerPtr S = uniform_tower(depth, a);
        TowerPtr T = uniform_tower(depth, a + 1 + static_cast<int>(rng() % 2));
        std::vector<int> lm;
        for (int k = 0; k <= depth; ++k) lm.push_back(k);
        TowerMap phi = build_embedding(S, T, lm);
        TowerMapFlags flags = classify_map(phi);
        CHECK(flags.embedding);
        CHECK(flags.immersion);
        // embeddings reflect the order: x < x' iff phi(x) < phi(x')
        for (int v = 0; v < S->node_count(); ++v) {
            int p = S->parent(v);
            if (p < 0) continue;
            int fv = phi.node_map[v], fp = phi.node_map[p];
            int u = fv;
            while (T->node_level(u) < T->node_level(fp)) u = T->parent(u);
            CHECK(u == fp);
        }
    }
}

TEST_CASE("homogeneous isomorphism decision") {
    GroupChain c126{{BigInt(1), BigInt(2), BigInt(6)}};
    auto A = std::make_shared<Tower>(group_chain_tower(c126, 100));
    auto B = std::make_shared<Tower>(group_chain_tower(c126, 100));
    IsoDecision dec = decide_homogeneous_iso(A, B);
    REQUIRE(dec.iso.has_value());
    CHECK(classify_map(*dec.iso).isomorphism);

    GroupChain c136{{BigInt(1), BigInt(3), BigInt(6)}};
    auto C = std::make_shared<Tower>(group_chain_tower(c136, 100));
    IsoDecision dec2 = decide_homogeneous_iso(A, C);
    CHECK(!dec2.iso.has_value());
    CHECK(dec2.mismatch_step == 0);  // degree sequences (2,3) vs (3,2)

    TowerPtr B4 = binary_tower(4);
    auto Sub = std::make_shared<Tower>(level_subtower(*B4, {0, 2, 4}));
    IsoDecision dec3 = decide_homogeneous_iso(B4, Sub);
    CHECK(!dec3.iso.has_value());
    CHECK(dec3.mismatch_step == -2);  // different level counts
}

TEST_CASE("extract_immersion recovers a window from the identity boundary relation") {
    TowerPtr B = binary_tower(4);
    ScalingFunction f = ScalingFunction::dyadic(5);
    auto Bd = std::make_shared<FiniteMetricSpace>(boundary(*B, f));
    MultiMap id = MultiMap::identity(Bd);
    ImmersionExtraction ex = extract_immersion(id, B, B, f, f, 2);
    TowerMapFlags flags = classify_map(ex.map);
    CHECK(flags.immersion);
    CHECK(flags.monotone);
    // injective on the window for the identity relation
    CHECK(classify_map(ex.map).embedding);
}

TEST_CASE("extract_immersion round trip through a known immersion") {
    TowerPtr B = binary_tower(4);
    ScalingFunction f = ScalingFunction::dyadic(5);
    Tower sub = level_subtower(*B, {0, 2, 4});
    TowerPtr S = std::make_shared<Tower>(std::move(sub));
    TowerMap inc;
    inc.source = S;
    inc.target = B;
    inc.level_map = {0, 2, 4};
    inc.node_map.resize(S->node_count());
    for (int v = 0; v < S->node_count(); ++v)
        inc.node_map[v] = B->node_by_name(S->node_name(v));
    ScalingFunction fs{{f.values[0], f.values[2], f.values[4]}};
    BoundaryMap bm = boundary_map(inc, fs, f);
    MultiMap Phi = bm.relation();
    ImmersionExtraction ex = extract_immersion(Phi, S, B, fs, f, 2);
    CHECK(classify_map(ex.map).immersion);
}

TEST_CASE("extraction from identity relations on random towers") {
    zdtest::Rng rng(613);
    int done = 0;
    for (int iter = 0; iter < 60 && done < 20; ++iter) {
        Tower raw = random_tower(rng, 6, 25);
        if (raw.level_count() < 4) continue;
        auto T = std::make_shared<Tower>(std::move(raw));
        ScalingFunction f = random_scaling(rng, T->level_count());
        auto B = std::make_shared<FiniteMetricSpace>(boundary(*T, f));
        MultiMap id = MultiMap::identity(B);
        ImmersionExtraction ex;
        try {
            ex = extract_immersion(id, T, T, f, f, 2);
        } catch (const std::invalid_argument&) {
            continue;  // window genuinely too short for this tower
        }
        TowerMapFlags flags = classify_map(ex.map);
        CHECK(flags.immersion);
        CHECK(flags.monotone);
        CHECK(flags.level_preserving);
        ++done;
    }
    CHECK(done >= 10);
}

TEST_CASE("extract_immersion errors when the window is too short") {
    TowerPtr B = binary_tower(3);
    ScalingFunction f = ScalingFunction::dyadic(4);
    auto Bd = std::make_shared<FiniteMetricSpace>(boundary(*B, f));
    MultiMap id = MultiMap::identity(Bd);
    CHECK_THROWS_AS(extract_immersion(id, B, B, f, f, 10), std::invalid_argument);
}

TEST_CASE("single-valued boundary criterion for level-reaching maps") {
    // if for every target level there is a source level mapping below it,
    // the boundary map is single-valued on the window
    TowerPtr B = binary_tower(3);
    TowerMap id = identity_map(B);
    ScalingFunction f = ScalingFunction::dyadic(4);
    BoundaryMap bm = boundary_map(id, f, f);
    CHECK(bm.relation().single_valued());
}
