#ifndef ZERODIM_SYNTHESIS_HPP
#define ZERODIM_SYNTHESIS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zerodim/key_lemma.hpp"
#include "zerodim/morphism.hpp"

namespace zerodim {

enum class CharMode { Universal, Micro, Macro, Bi };

struct CapacityEntry {
    Rational delta, eps;
    BigInt theta, Theta;
};

/// Window-relative evaluation of the characterization conditions: capacity
/// finiteness plus monotone growth of theta toward the window edges as the
/// finite surrogate for the limit conditions.
struct CharacterizationReport {
    CharMode mode = CharMode::Universal;
    std::vector<Rational> grid;
    std::vector<CapacityEntry> entries;          // all delta <= eps grid pairs
    bool mesh_witnessed = false;                 // dimension-zero window check
    bool capacity_finite = true;                 // recorded; always true on finite data
    std::vector<int> macro_growth_deltas;        // delta indices with top-edge growth
    std::vector<int> micro_growth_epsilons;      // eps indices with bottom-edge growth
    bool pass = false;
    std::string detail;
};

CharacterizationReport characterization_check(const FiniteMetricSpace& X,
                                              const std::vector<Rational>& grid, CharMode mode);

/// lambda_k / m_k sequences for the equivalence pipelines. Upward entries
/// satisfy theta_{l0}^{lk} >= 4^{k+5} 2^{m_{k-1}} and 2^{m_k} >= 4^k
/// Theta_{l0}^{lk}; downward entries satisfy Theta^{l_{k+1}}_{l_k} <=
/// 2^{m_k - m_{k-1}} <= theta^{l_k}_{l_{k-1}}.
struct Schedule {
    std::vector<Rational> lambdas;      // lambda_0 .. lambda_d ascending
    std::vector<long long> ms;          // m_0 = 0 .. m_d
    std::vector<Rational> neg_lambdas;  // lambda_{-1}, lambda_{-2}, ... descending
    std::vector<long long> neg_ms;
    bool top_appended = false;          // lambda_d added as the single-block scale
};

Schedule build_schedule(const FiniteMetricSpace& X, const std::vector<Rational>& grid,
                        CharMode mode, int up_depth, int down_depth = 0, int base_index = 0);

struct ScheduleAudit {
    bool pass = false;
    std::vector<std::string> checks;  // one line per inequality, prefixed ok/FAIL
};
/// Re-verifies every schedule inequality from the space, independent of the
/// builder.
ScheduleAudit audit_schedule(const FiniteMetricSpace& X, const Schedule& s);

struct SynthesisResult {
    Schedule schedule;
    std::vector<int> domain_points;  // indices into X covered by the window
    SpacePtr domain;                 // the induced subspace
    SpacePtr target_boundary;        // boundary of the binary-tower window
    std::shared_ptr<MultiMap> relation;
    UniformityCertificate certificate;
    std::optional<KeyLemmaResult> immersion;  // the Key Lemma stage (depth >= 1)
    std::vector<std::string> log;
};

/// The one-sided pipeline: canonical tower on the schedule scales, Key Lemma
/// immersion into the binary window, boundary composition, certificate.
SynthesisResult synthesize_macro_equivalence(const FiniteMetricSpace& X,
                                             const std::vector<Rational>& grid, int depth);

/// The two-sided pipeline: the macro stage on nonnegative indices extended
/// downward by balanced surjections through the negative scales.
SynthesisResult synthesize_bi_equivalence(const FiniteMetricSpace& X,
                                          const std::vector<Rational>& grid, int base_index,
                                          int up_depth, int down_depth);

struct MicroSynthesisResult {
    std::vector<Rational> alphas, betas;  // chosen scales, ascending
    std::shared_ptr<MultiMap> relation;   // X => Y
    UniformityCertificate certificate;
    std::vector<std::string> log;
};

/// Two-space micro pipeline: aligned canonical towers, a balanced surjective
/// top map, and the same downward extension engine driven by the
/// theta/Theta cross conditions.
MicroSynthesisResult synthesize_micro_equivalence(const SpacePtr& X, const SpacePtr& Y,
                                                  const std::vector<Rational>& gridX,
                                                  const std::vector<Rational>& gridY,
                                                  int down_depth);

struct UniversalityResult {
    TowerPtr source_tower;  // canonical L-tower of X
    TowerPtr receiving;     // homogeneous tower with степ degrees max(2, Deg)
    TowerMap embedding;
    SpacePtr source_boundary, target_boundary;
    std::shared_ptr<MultiMap> boundary_relation;
    UniformityCertificate certificate;
};

/// Universality construction: embed the canonical tower into a homogeneous
/// receiving tower with per-step degrees max(2, Deg), then pass to
/// boundaries.
UniversalityResult universality_embed(const FiniteMetricSpace& X, const std::vector<Rational>& L);

/// Per-prime exponent evidence; open_ended marks ">=" window semantics.
struct PrimeProfile {
    std::map<BigInt, int> exponents;  // -1 encodes an unbounded entry
    bool open_ended = false;

    bool same_exponents(const PrimeProfile& other) const { return exponents == other.exponents; }
};

/// Max prime-power exponents dividing component cardinalities over the
/// window scales.
PrimeProfile f_invariant(const FiniteMetricSpace& X, const std::vector<Rational>& window);
/// Profile of a group chain (exponents of the realized orders).
PrimeProfile chain_profile(const GroupChain& chain);

/// Canonical chain realizing a profile: one cyclic p-factor per round,
/// primes ascending; unbounded entries truncated at the cutoff.
GroupChain zf_chain(const PrimeProfile& profile, int cutoff);

struct ClassifyResult {
    bool equivalent = false;  // on window evidence
    PrimeProfile profile_a, profile_b;
    BigInt witness_prime;    // 0 when equivalent
    std::string certificate;
    std::optional<TowerMap> witness;  // tower isomorphism after Z_f normalization
    TowerPtr witness_source, witness_target;
};

ClassifyResult classify_pair(const GroupChain& a, const GroupChain& b);
/// Space variant; rejects inputs not flagged vertex-transitive (the iff
/// claim needs isometric homogeneity).
ClassifyResult classify_pair(const FiniteMetricSpace& X, const std::vector<Rational>& window_x,
                             const FiniteMetricSpace& Y, const std::vector<Rational>& window_y,
                             bool vertex_transitive);

}  // namespace zerodim

#endif
