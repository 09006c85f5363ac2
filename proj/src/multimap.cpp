#include "zerodim/multimap.hpp"

#include <algorithm>
#include <stdexcept>

namespace zerodim {

namespace {

bool same_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return &a == &b || a.point_ids() == b.point_ids();
}

}  // namespace

MultiMap::MultiMap(SpacePtr source, SpacePtr target, std::vector<std::pair<int, int>> pairs)
    : source_(std::move(source)), target_(std::move(target)), pairs_(std::move(pairs)) {
    const int n = source_->size(), m = target_->size();
    for (auto& [x, y] : pairs_)
        if (x < 0 || x >= n || y < 0 || y >= m)
            throw std::invalid_argument("multimap: pair out of range");
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    images_.assign(n, {});
    preimages_.assign(m, {});
    for (auto& [x, y] : pairs_) {
        images_[x].push_back(y);
        preimages_[y].push_back(x);
    }
    total_ = true;
    for (auto& im : images_) total_ = total_ && !im.empty();
    surj_ = true;
    for (auto& pre : preimages_) surj_ = surj_ && !pre.empty();
}

bool MultiMap::single_valued() const {
    for (const auto& im : images_)
        if (im.size() > 1) return false;
    return true;
}

MultiMap MultiMap::identity(const SpacePtr& X) {
    std::vector<std::pair<int, int>> p;
    p.reserve(X->size());
    for (int i = 0; i < X->size(); ++i) p.emplace_back(i, i);
    return MultiMap(X, X, std::move(p));
}

MultiMap MultiMap::full(const SpacePtr& X, const SpacePtr& Y) {
    std::vector<std::pair<int, int>> p;
    p.reserve(static_cast<std::size_t>(X->size()) * Y->size());
    for (int i = 0; i < X->size(); ++i)
        for (int j = 0; j < Y->size(); ++j) p.emplace_back(i, j);
    return MultiMap(X, Y, std::move(p));
}

MultiMap MultiMap::inverse() const {
    std::vector<std::pair<int, int>> p;
    p.reserve(pairs_.size());
    for (auto& [x, y] : pairs_) p.emplace_back(y, x);
    return MultiMap(target_, source_, std::move(p));
}

MultiMap MultiMap::compose(const MultiMap& phi, const MultiMap& psi) {
    if (!same_space(phi.target(), psi.source()))
        throw std::invalid_argument("compose: middle spaces differ");
    std::vector<std::pair<int, int>> p;
    for (int x = 0; x < phi.source().size(); ++x)
        for (int y : phi.image(x))
            for (int z : psi.image(y)) p.emplace_back(x, z);
    return MultiMap(phi.source_ptr(), psi.target_ptr(), std::move(p));
}

namespace {

// max distance index between two image sets (their union's diameter is the
// max of this and the two inner diameters; inner diameters arise as x = x').
int cross_diam_index(const FiniteMetricSpace& Y, const std::vector<int>& a,
                     const std::vector<int>& b) {
    int best = 0;
    for (int u : a)
        for (int v : b) best = std::max(best, Y.value_index(u, v));
    return best;
}

int oscillation_index(const MultiMap& phi, const Rational& delta) {
    const FiniteMetricSpace& X = phi.source();
    const FiniteMetricSpace& Y = phi.target();
    const int n = X.size();
    const int t = X.threshold_index(delta);
    int best = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
#endif
    for (int i = 0; i < n; ++i) {
        int local = cross_diam_index(Y, phi.image(i), phi.image(i));
        for (int j = i + 1; j < n; ++j)
            if (X.value_index(i, j) <= t)
                local = std::max(local, cross_diam_index(Y, phi.image(i), phi.image(j)));
        best = std::max(best, local);
    }
    return best;
}

}  // namespace

Rational oscillation(const MultiMap& phi, const Rational& delta) {
    if (!phi.total()) throw std::invalid_argument("oscillation: relation is not total");
    return phi.target().values()[oscillation_index(phi, delta)];
}

Rational oscillation_partial(const MultiMap& phi, const Rational& delta) {
    return phi.target().values()[oscillation_index(phi, delta)];
}

namespace reference {

Rational oscillation_serial(const MultiMap& phi, const Rational& delta) {
    if (!phi.total()) throw std::invalid_argument("oscillation: relation is not total");
    const FiniteMetricSpace& X = phi.source();
    const FiniteMetricSpace& Y = phi.target();
    Rational best(0);
    for (int i = 0; i < X.size(); ++i)
        for (int j = i; j < X.size(); ++j) {
            if (!(X.dist(i, j) <= delta)) continue;
            for (int u : phi.image(i))
                for (int v : phi.image(j))
                    if (best < Y.dist(u, v)) best = Y.dist(u, v);
        }
    return best;
}

}  // namespace reference

MultiMap selection(const MultiMap& phi) {
    if (!phi.total()) throw std::invalid_argument("selection: relation is not total");
    const FiniteMetricSpace& Y = phi.target();
    std::vector<std::pair<int, int>> p;
    p.reserve(phi.source().size());
    for (int x = 0; x < phi.source().size(); ++x) {
        int pick = phi.image(x)[0];
        for (int y : phi.image(x))
            if (Y.point_id(y) < Y.point_id(pick)) pick = y;
        p.emplace_back(x, pick);
    }
    return MultiMap(phi.source_ptr(), phi.target_ptr(), std::move(p));
}

ExtRational multimap_distance(const MultiMap& phi, const MultiMap& psi) {
    if (!same_space(phi.source(), psi.source()) || !same_space(phi.target(), psi.target()))
        throw std::invalid_argument("multimap_distance: space mismatch");
    if (!phi.total() || !psi.total())
        throw std::invalid_argument("multimap_distance: relations must be total");
    const FiniteMetricSpace& Y = phi.target();
    int worst = 0;
    for (int x = 0; x < phi.source().size(); ++x) {
        const auto& a = phi.image(x);
        const auto& b = psi.image(x);
        for (int u : a) {
            int nearest = Y.value_index(u, b[0]);
            for (std::size_t k = 1; k < b.size() && nearest > 0; ++k)
                nearest = std::min(nearest, Y.value_index(u, b[k]));
            worst = std::max(worst, nearest);
        }
        for (int v : b) {
            int nearest = Y.value_index(v, a[0]);
            for (std::size_t k = 1; k < a.size() && nearest > 0; ++k)
                nearest = std::min(nearest, Y.value_index(v, a[k]));
            worst = std::max(worst, nearest);
        }
    }
    return ExtRational(Y.values()[worst]);
}

ComponentImageCheck component_image_check(const MultiMap& phi, const Rational& delta,
                                          const Rational& eps) {
    if (!phi.total()) throw std::invalid_argument("component_image_check: relation is not total");
    Rational omega = oscillation(phi, delta);
    if (eps < omega)
        throw std::invalid_argument(
            "component_image_check: hypothesis eps >= omega_Phi(delta) fails (omega = " +
            omega.to_string() + ")");
    Partition pd = components(phi.source(), delta);
    Partition pe = components(phi.target(), eps);
    ComponentImageCheck out;
    out.pass = true;
    for (const auto& blk : pd.blocks) {
        int target_block = -1;
        int first_image = -1;
        for (int x : blk)
            for (int y : phi.image(x)) {
                if (target_block < 0) {
                    target_block = pe.block_of[y];
                    first_image = y;
                } else if (pe.block_of[y] != target_block) {
                    out.pass = false;
                    out.witness_x = x;
                    out.witness_y = first_image;
                    out.witness_escape = y;
                    return out;
                }
            }
    }
    return out;
}

CapacityMonotonicityCheck capacity_monotonicity_check(const MultiMap& phi, const Rational& delta,
                                                      const Rational& eps, const Rational& delta2,
                                                      const Rational& eps2) {
    if (!phi.total() || !phi.surjective())
        throw std::invalid_argument("capacity_monotonicity_check: relation must be total and surjective");
    Rational w_fwd = oscillation(phi, eps);
    if (eps2 < w_fwd)
        throw std::invalid_argument("capacity_monotonicity_check: hypothesis eps' >= omega_Phi(eps) fails");
    Rational w_inv = oscillation(phi.inverse(), delta2);
    if (delta < w_inv)
        throw std::invalid_argument(
            "capacity_monotonicity_check: hypothesis delta >= omega_{Phi^-1}(delta') fails");
    CapacityMonotonicityCheck out;
    auto [tx, Tx] = capacity(phi.source(), delta, eps);
    auto [ty, Ty] = capacity(phi.target(), delta2, eps2);
    out.theta_x = tx;
    out.Theta_x = Tx;
    out.theta_y = ty;
    out.Theta_y = Ty;
    out.pass = tx <= ty && Tx <= Ty;
    return out;
}

UniformityCertificate uniformity_certificate(const MultiMap& phi, const std::vector<Rational>& grid) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(Rational(0) < grid[k]))
            throw std::invalid_argument("certificate: grid must be positive");
        if (k > 0 && !(grid[k - 1] < grid[k]))
            throw std::invalid_argument("certificate: grid must be strictly increasing");
    }
    UniformityCertificate cert;
    cert.grid = grid;
    cert.total = phi.total();
    cert.surjective = phi.surjective();
    MultiMap inv = phi.inverse();
    for (const Rational& d : grid) {
        cert.omega_fwd.push_back(oscillation_partial(phi, d));
        cert.omega_inv.push_back(oscillation_partial(inv, d));
    }
    if (!grid.empty()) {
        cert.macro_fwd = cert.omega_fwd.back() <= grid.back();
        cert.macro_inv = cert.omega_inv.back() <= grid.back();
        cert.micro_fwd = cert.omega_fwd.front() <= grid.front();
        cert.micro_inv = cert.omega_inv.front() <= grid.front();
    }
    cert.macro_equivalence = cert.total && cert.surjective && cert.macro_fwd && cert.macro_inv;
    cert.bi_equivalence = cert.macro_equivalence && cert.micro_fwd && cert.micro_inv;
    return cert;
}

}  // namespace zerodim
