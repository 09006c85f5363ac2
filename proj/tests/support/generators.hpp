#ifndef ZDTEST_GENERATORS_HPP
#define ZDTEST_GENERATORS_HPP

#include <random>
#include <vector>

#include "zerodim/metric_space.hpp"
#include "zerodim/tower.hpp"

namespace zdtest {

using zerodim::BigInt;
using zerodim::FiniteMetricSpace;
using zerodim::GroupChain;
using zerodim::Rational;
using zerodim::ScalingFunction;
using zerodim::Tower;

using Rng = std::mt19937;

/// Random pruned tower: single top, every non-minimal node keeps at least
/// one child, explicit throughout.
Tower random_tower(Rng& rng, int max_levels = 6, int max_base = 120);

/// Strictly increasing positive rationals, one per level.
ScalingFunction random_scaling(Rng& rng, int levels);

/// Boundary of a random tower under a random scaling.
FiniteMetricSpace random_ultrametric(Rng& rng, int max_points = 30);

/// Random metric with rational weights in [1, 2] (triangle inequality is
/// automatic on that range).
FiniteMetricSpace random_metric(Rng& rng, int max_points = 50);

FiniteMetricSpace line_space(const std::vector<long long>& coords);

/// Word-metric space of a finite chain window: the boundary of the coset
/// tower, distance = index of the first common subgroup level.
FiniteMetricSpace chain_space(const GroupChain& chain);

/// Capacity via exhaustive chain search (the independent oracle).
std::pair<BigInt, BigInt> oracle_capacity(const FiniteMetricSpace& X, const Rational& delta,
                                          const Rational& eps);

/// Counted tower pair (T, H) satisfying the Key Lemma hypotheses through
/// k = K+1 with near-minimal margins; T carries two flavors per counted
/// level, H is the homogeneous chain tower of the matching orders.
std::pair<Tower, Tower> key_lemma_instance(int K);

/// Randomized variant: ragged flavor weights, mixed children multisets, and
/// random slack above the hypothesis thresholds.
std::pair<Tower, Tower> random_key_lemma_instance(int K, Rng& rng);

}  // namespace zdtest

#endif
