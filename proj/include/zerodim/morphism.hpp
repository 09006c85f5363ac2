#ifndef ZERODIM_MORPHISM_HPP
#define ZERODIM_MORPHISM_HPP

#include <memory>
#include <optional>
#include <vector>

#include "zerodim/multimap.hpp"
#include "zerodim/tower.hpp"

namespace zerodim {

using TowerPtr = std::shared_ptr<const Tower>;

/// Level-preserving map between explicit towers: node_map is total on the
/// source's explicit nodes, level_map injective and monotone on level
/// indices.
struct TowerMap {
    TowerPtr source, target;
    std::vector<int> level_map;  // source level index -> target level index
    std::vector<int> node_map;   // source node index -> target node index
};

struct TowerMapFlags {
    bool level_preserving = false;
    bool monotone = false;
    bool embedding = false;
    bool immersion = false;
    bool isomorphism = false;
};

/// Evaluates all classification flags exactly. The immersion condition
/// lev(x ^ x') <= lev(x) + 1 for merged same-level nodes reduces to "every
/// preimage lies within one node's children".
TowerMapFlags classify_map(const TowerMap& phi);

struct BoundaryMap {
    SpacePtr source_boundary, target_boundary;
    std::vector<std::pair<int, int>> pairs;  // base pos -> base pos

    MultiMap relation() const { return MultiMap(source_boundary, target_boundary, pairs); }
};

/// Induced multi-map between boundaries: a source branch relates to every
/// target branch below the image of its base node.
BoundaryMap boundary_map(const TowerMap& phi, const ScalingFunction& fS, const ScalingFunction& fT);

struct BoundaryPropertyReport {
    UniformityCertificate certificate;
    bool forward_level_bound = false;   // omega_{d phi}(fS(nu)) <= fT(level_map(nu)) for all nu
    bool immersion_inverse_bound = false;  // omega_{(d phi)^-1}(fT(level_map(nu))) <= fS(nu+1)
    bool image_down_cofinal = false;    // target base level inside the image
    bool surjective = false;
};

/// Oscillation certificates of the boundary map plus the conclusions of the
/// boundary-property conclusions, cross-checked exactly on the window.
BoundaryPropertyReport check_boundary_properties(const TowerMap& phi, const ScalingFunction& fS,
                                                 const ScalingFunction& fT);

/// Tower embedding with prescribed level map, built by downward recursion
/// with child assignment in ascending identifier order. Requires
/// Deg_l^{l+1}(S) <= deg_{f(l)}^{f(l+1)}(T) on every non-maximal level; in
/// isomorphism mode additionally deg_l^{l+1}(S) >= Deg_{f(l)}^{f(l+1)}(T)
/// with f onto the target levels.
TowerMap build_embedding(const TowerPtr& S, const TowerPtr& T, const std::vector<int>& level_map,
                         bool isomorphism_mode = false);

struct IsoDecision {
    std::optional<TowerMap> iso;
    int mismatch_step = -1;  // first differing per-step degree (source level index), -2 = length mismatch
};

/// Homogeneous towers are isomorphic iff their per-step degree sequences
/// match after bottom alignment.
IsoDecision decide_homogeneous_iso(const TowerPtr& S, const TowerPtr& T);

struct ImmersionExtraction {
    std::vector<int> source_levels, target_levels;  // chosen A and B (tops included)
    TowerPtr source_window, target_window;          // level subtowers
    TowerMap map;
};

/// From a macro-uniform embedding between boundaries, greedily picks level
/// windows A, B satisfying the oscillation inequalities and induces the
/// tower immersion phi(s) = unique node whose cone contains Phi(cone of s).
/// Asserts d(phi) = (d id_T)^-1 o Phi o d id_S on the window.
ImmersionExtraction extract_immersion(const MultiMap& Phi, const TowerPtr& S, const TowerPtr& T,
                                      const ScalingFunction& fS, const ScalingFunction& fT,
                                      int length);

}  // namespace zerodim

#endif
