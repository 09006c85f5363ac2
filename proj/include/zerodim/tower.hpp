#ifndef ZERODIM_TOWER_HPP
#define ZERODIM_TOWER_HPP

#include <string>
#include <utility>
#include <vector>

#include "zerodim/metric_space.hpp"

namespace zerodim {

/// Strictly increasing positive threshold per level index; induces the
/// boundary ultrametric rho_f.
struct ScalingFunction {
    std::vector<Rational> values;

    static ScalingFunction identity(const std::vector<Rational>& level_labels);
    static ScalingFunction dyadic(int levels);  // 2^k
    void validate(int levels) const;
};

/// Leveled partial order with single parents, a single top node in the
/// represented window, and an optional counted region below the explicit
/// cutoff.
///
/// Explicit nodes live on levels [explicit_base, top]. Below that, each
/// level carries a small table of "flavors" (level-0 descendant count plus a
/// children multiset over the layer underneath); explicit base nodes hold
/// bundles: multisets of flavor instances. Counted consistency deg0 = sum of
/// children deg0 holds by construction.
class Tower {
public:
    struct Flavor {
        BigInt deg0;
        std::vector<std::pair<int, BigInt>> children;  // (flavor index one layer down, count)
    };

    struct Data {
        std::vector<Rational> labels;                       // ascending level labels
        int explicit_base = 0;                              // lowest explicit level index
        std::vector<std::vector<int>> parents;              // per explicit level: pos -> parent pos above
        std::vector<std::vector<std::string>> names;        // optional, per explicit level
        std::vector<std::vector<std::pair<int, BigInt>>> bundles;  // per base pos (flavor, count)
        std::vector<std::vector<Flavor>> layers;            // layers[k] for k < explicit_base
    };

    /// Validates single-parent links, window up-directedness (single top),
    /// counted wiring; caches deg0, pruned and homogeneous flags.
    static Tower validate(Data d);

    /// Fully explicit tower from per-level parent tables.
    static Tower build_explicit(std::vector<Rational> labels, std::vector<std::vector<int>> parents);

    int level_count() const { return static_cast<int>(labels_.size()); }
    const Rational& level_label(int k) const { return labels_[k]; }
    const std::vector<Rational>& level_labels() const { return labels_; }
    int top_level() const { return level_count() - 1; }
    int explicit_base() const { return explicit_base_; }
    bool fully_explicit() const { return explicit_base_ == 0; }

    int node_count() const { return static_cast<int>(level_of_.size()); }
    int level_size(int k) const { return static_cast<int>(level_nodes_[k - explicit_base_].size()); }
    int node_at(int k, int pos) const { return level_nodes_[k - explicit_base_][pos]; }
    int node_level(int v) const { return level_of_[v]; }
    int node_pos(int v) const { return pos_of_[v]; }
    int parent(int v) const { return parent_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    const std::string& node_name(int v) const { return names_[v]; }
    int node_by_name(const std::string& name) const;  // -1 when absent
    const BigInt& deg0(int v) const { return deg0_[v]; }
    const std::vector<std::pair<int, BigInt>>& bundle(int v) const;

    const std::vector<Flavor>& layer(int k) const { return layers_[k]; }

    bool pruned() const { return pruned_; }
    bool homogeneous() const { return homogeneous_; }

    /// Smallest common upper bound of two explicit nodes.
    int meet(int x, int y) const;

    /// Number of level-lambda descendants of an explicit node
    /// (|pred_lambda(v)|); lambda may point into the counted region.
    BigInt descendant_count(int v, int lambda) const;
    BigInt flavor_descendant_count(int k, int f, int lambda) const;
    /// Total number of level-k members (explicit or counted instances).
    BigInt total_level_size(int k) const;

    /// e_theta labels per level: theta's level gets 0, labels increase with
    /// levels; computed from meet-interval cardinalities.
    std::vector<long long> level_labeling(int theta) const;

private:
    std::vector<Rational> labels_;
    int explicit_base_ = 0;
    std::vector<std::vector<int>> level_nodes_;  // per explicit level (offset by explicit_base) in pos order
    std::vector<int> level_of_, pos_of_, parent_;
    std::vector<std::vector<int>> children_;
    std::vector<std::string> names_;
    std::vector<BigInt> deg0_;
    std::vector<std::vector<std::pair<int, BigInt>>> bundles_;  // per base-level pos
    std::vector<std::vector<Flavor>> layers_;
    bool pruned_ = false, homogeneous_ = false;
};

/// deg / Deg table over level-index pairs lambda <= l.
class DegreeProfile {
public:
    explicit DegreeProfile(int levels);
    const BigInt& deg(int lambda, int l) const { return table_[l][lambda].first; }
    const BigInt& Deg(int lambda, int l) const { return table_[l][lambda].second; }
    int levels() const { return static_cast<int>(table_.size()); }
    std::pair<BigInt, BigInt>& entry(int lambda, int l) { return table_[l][lambda]; }

private:
    std::vector<std::vector<std::pair<BigInt, BigInt>>> table_;
};

/// Exact min/max descendant counts for every level pair; counted flavors
/// contribute through their multiset totals.
DegreeProfile degree_profile(const Tower& T);

/// Boundary ultrametric on the lowest-level nodes: rho(p, q) =
/// scaling(level of meet). Requires a pruned fully explicit tower.
/// Meet matrix is OpenMP-parallel.
FiniteMetricSpace boundary(const Tower& T, const ScalingFunction& f);

namespace reference {
/// Serial meet-matrix boundary, the reference twin of boundary().
FiniteMetricSpace boundary_serial(const Tower& T, const ScalingFunction& f);
}

/// Nodes on the kept levels with parent links composed across skipped
/// levels. keep must be ascending explicit level indices including the top.
Tower level_subtower(const Tower& T, const std::vector<int>& keep);

struct CanonicalTower {
    Tower tower;
    std::vector<int> branch_of;  // point -> base-level node pos (the canonical map C_L)
};

/// Canonical L-tower: nodes are (component, lambda) pairs ordered by
/// inclusion. The top partition must be a single block (guaranteed when
/// max L >= diameter).
CanonicalTower canonical_tower(const FiniteMetricSpace& X, const std::vector<Rational>& L);

struct CanonicalBoundCheck {
    bool pass = true;
    int witness_x = -1, witness_y = -1;
};

/// dist(C_L(x), C_L(y)) <= inf{lambda in L : lambda >= d(x,y)} for all
/// pairs, under the identity scaling.
CanonicalBoundCheck canonical_map_bound_check(const FiniteMetricSpace& X,
                                              const std::vector<Rational>& L);

struct GroupChain {
    std::vector<BigInt> orders;  // 1 = o_0 | o_1 | ... strictly increasing

    void validate() const;
    int length() const { return static_cast<int>(orders.size()); }
};

/// Coset tower of a locally finite chain: homogeneous, deg_{k}^{k+1} =
/// o_{k+1}/o_k; levels whose node count exceeds width_cutoff are counted.
Tower group_chain_tower(const GroupChain& chain, long long width_cutoff);

}  // namespace zerodim

#endif
