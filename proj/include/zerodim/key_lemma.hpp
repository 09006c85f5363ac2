#ifndef ZERODIM_KEY_LEMMA_HPP
#define ZERODIM_KEY_LEMMA_HPP

#include <string>
#include <vector>

#include "zerodim/morphism.hpp"
#include "zerodim/tower.hpp"

namespace zerodim {

/// Horizon for the exact epsilon product prefixes; the tail beyond it only
/// tightens the bounds (prefixes are monotone and stay below 2).
constexpr int kEpsilonHorizon = 96;

/// prod_{i=a}^{b} (1 + 4^-i) / (1 - 4^-i); 1 for a > b.
Rational epsilon_product(int a, int b);

struct AdmissibilityBounds {
    Rational lower;  // 8 * prod (1-eps)/(1+eps) over i in (k, horizon]
    Rational upper;  // 16 * prod (1+eps)/(1-eps) over the same range
};
AdmissibilityBounds admissible_ratio_bounds(int k);

struct RatioCheck {
    bool pass = false;
    Rational ratio;
    AdmissibilityBounds bounds;
};
/// deg0(plateau) / deg0^k(H) against the admissibility window at level k.
RatioCheck ratio_bounds_check(const BigInt& plateau_deg0, const BigInt& h0k, int k);

/// Largest-remainder apportionment over member classes given in identifier
/// order: each class is (weight, member count); every member's quota d
/// satisfies |d - deg_w * weight / total| <= 1 and the quotas sum to deg_w
/// exactly. Classes may split into two rows (d and d+1).
struct QuotaRow {
    BigInt weight;
    BigInt members;
    BigInt d;
};
std::vector<QuotaRow> choose_quota(const std::vector<std::pair<BigInt, BigInt>>& plateau,
                                   const BigInt& deg_w);

/// Near-equal split of a weighted multiset into `bins` groups: classes are
/// distributed round-robin in descending weight order, extras to the
/// lightest groups first. Returns the distinct group shapes with
/// multiplicities; items reference positions in the input class list.
struct SplitShape {
    std::vector<std::pair<int, BigInt>> items;  // (input class index, count per group)
    BigInt bins;
    BigInt weight;
};
std::vector<SplitShape> split_balanced(const std::vector<std::pair<BigInt, BigInt>>& items,
                                       const BigInt& bins);

struct HypothesisRow {
    int k;
    BigInt t_k, T_k, h_k, h_km1;  // deg0^k(T), Deg0^k(T), deg0^k(H), deg0^{k-1}(H)
    bool cond1 = false;           // t_k >= 4^{k+5} h_{k-1}
    bool cond2 = false;           // h_k >= 4^k T_k
};
struct HypothesisReport {
    std::vector<HypothesisRow> rows;
    bool pass = false;
};
/// Both Key Lemma inequalities for k = 1..K, exact.
HypothesisReport check_hypotheses(const Tower& T, const Tower& H, int K);

/// One memoized admissible-immersion piece: the counted image of a trapezium
/// plateau onto the cone of one target vertex at the same level.
struct Piece {
    int level = 0;
    BigInt deg0_total;
    Rational ratio;  // deg0_total / h0(level)
    std::vector<QuotaRow> quotas;
    struct Edge {
        int piece = -1;
        BigInt multiplicity;  // number of target children receiving this shape
    };
    std::vector<Edge> edges;
};

struct MainStep {
    int level = 0;
    BigInt plateau_deg0;
    Rational ratio;  // the 11..13 accumulation ratio
    std::vector<std::pair<int, BigInt>> plateau_members;  // (member id, count)
    std::vector<Piece::Edge> residual;
};

struct KeyLemmaResult {
    int K = -1;                     // -1 for bare admissible runs
    std::vector<BigInt> h_step;     // h_step[k] = deg_{k-1}^k(H), index 0 unused
    std::vector<Piece> pieces;
    int root_piece = -1;            // admissible runs
    std::vector<MainStep> steps;    // main runs: steps[k] builds phi_k
    std::vector<BigInt> image_counts;  // covered target nodes per level (0..K)
    std::vector<std::string> audit_log;
};

/// The Key Lemma construction phi_K : cone(A_K) -> cone(b_K) on counted
/// towers: nested 11..13 plateaus along the leftmost branches, residual
/// splits across pred(b_{k+1}) \ {b_k}, admissible recursion with quota
/// apportionment and plateau splitting, all in grouped big-integer
/// arithmetic with shape memoization. Towers need levels 0..K+1 and the
/// hypotheses through K+1.
KeyLemmaResult main_immersion(const Tower& T, const Tower& H, int K);

struct PlateauSpec {
    int level = 0;
    std::vector<std::pair<int, BigInt>> members;  // (node pos or flavor index, count)
};
/// A single admissible immersion from a trapezium plateau of T onto the
/// cone of an H vertex at the same level.
KeyLemmaResult admissible_immersion(const Tower& T, const Tower& H, const PlateauSpec& plateau);

struct KeyLemmaAudit {
    bool pass = false;
    long long pieces_checked = 0;
    long long quota_rows_checked = 0;
    std::vector<std::string> failures;
};
/// Independent re-verification of a construction record: quota deviations
/// and sums, ratio windows, count conservation, target coverage per level.
KeyLemmaAudit audit_immersion(const KeyLemmaResult& r, const Tower& T, const Tower& H);

/// Element-wise admissible immersion for fully explicit towers (the node
/// enumeration route): maps every node of the trapezium cone to a node of
/// the target cone. Returns (source node, target node) assignments.
std::vector<std::pair<int, int>> explicit_admissible_immersion(const Tower& T, const Tower& H,
                                                               const std::vector<int>& plateau_nodes,
                                                               int target_vertex);

}  // namespace zerodim

#endif
