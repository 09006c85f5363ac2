#ifndef ZERODIM_MULTIMAP_HPP
#define ZERODIM_MULTIMAP_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerodim/metric_space.hpp"

namespace zerodim {

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Finite relation between two metric spaces with exact set semantics.
/// Pairs are stored sorted and deduplicated; totality/surjectivity cached.
class MultiMap {
public:
    MultiMap(SpacePtr source, SpacePtr target, std::vector<std::pair<int, int>> pairs);

    const FiniteMetricSpace& source() const { return *source_; }
    const FiniteMetricSpace& target() const { return *target_; }
    const SpacePtr& source_ptr() const { return source_; }
    const SpacePtr& target_ptr() const { return target_; }

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    const std::vector<int>& image(int x) const { return images_[x]; }
    const std::vector<int>& preimage(int y) const { return preimages_[y]; }

    bool total() const { return total_; }       // every source point has an image
    bool surjective() const { return surj_; }   // every target point is hit
    bool single_valued() const;

    static MultiMap identity(const SpacePtr& X);
    static MultiMap full(const SpacePtr& X, const SpacePtr& Y);
    MultiMap inverse() const;
    /// Relational composition psi o phi : X => Z (phi : X => Y, psi : Y => Z).
    static MultiMap compose(const MultiMap& phi, const MultiMap& psi);

    friend bool operator==(const MultiMap& a, const MultiMap& b) { return a.pairs_ == b.pairs_; }

private:
    SpacePtr source_, target_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::vector<int>> images_, preimages_;
    bool total_ = false, surj_ = false;
};

/// omega_Phi(delta): largest image diameter over sets of diameter <= delta,
/// computed pairwise (the diameter of a union of images is attained on a
/// pair). Requires a total relation. OpenMP-parallel over source pairs.
Rational oscillation(const MultiMap& phi, const Rational& delta);

/// The same supremum without the totality requirement (empty images
/// contribute nothing); certificates of non-surjective embeddings need the
/// inverse side.
Rational oscillation_partial(const MultiMap& phi, const Rational& delta);

namespace reference {
Rational oscillation_serial(const MultiMap& phi, const Rational& delta);
}

/// Single-valued selection f(x) in Phi(x), lexicographically least target id.
MultiMap selection(const MultiMap& phi);

/// dist(Phi,Psi) = least r with Phi(x) in B_r(Psi(x)) and vice versa, all x.
ExtRational multimap_distance(const MultiMap& phi, const MultiMap& psi);

struct ComponentImageCheck {
    bool pass = false;
    // counterexample when !pass: source point, image point, escaping image point
    int witness_x = -1, witness_y = -1, witness_escape = -1;
};

/// Verifies Phi(C_delta(x)) lies in C_eps(y) for every x and y in Phi(x).
/// Requires eps >= oscillation(phi, delta); rejects otherwise.
ComponentImageCheck component_image_check(const MultiMap& phi, const Rational& delta,
                                          const Rational& eps);

struct CapacityMonotonicityCheck {
    bool pass = false;
    BigInt theta_x, Theta_x, theta_y, Theta_y;
};

/// Capacity transport: theta_delta^eps(X) <= theta_{delta'}^{eps'}(Y) (and
/// the same for Theta) for total surjective relations with eps' >=
/// omega_Phi(eps) and delta >= omega_{Phi^{-1}}(delta'). Hypothesis
/// violations throw.
CapacityMonotonicityCheck capacity_monotonicity_check(const MultiMap& phi, const Rational& delta,
                                                      const Rational& eps, const Rational& delta2,
                                                      const Rational& eps2);

struct UniformityCertificate {
    std::vector<Rational> grid;
    std::vector<Rational> omega_fwd, omega_inv;
    bool total = false, surjective = false;
    bool macro_fwd = false, micro_fwd = false;
    bool macro_inv = false, micro_inv = false;
    bool macro_equivalence = false;  // total + surjective + macro both ways
    bool bi_equivalence = false;

    bool micro_both() const { return micro_fwd && micro_inv; }
    bool macro_both() const { return macro_fwd && macro_inv; }
};

/// Window-relative uniformity table and flags over a strictly increasing
/// positive grid.
UniformityCertificate uniformity_certificate(const MultiMap& phi, const std::vector<Rational>& grid);

}  // namespace zerodim

#endif
