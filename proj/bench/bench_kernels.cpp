// Serial-vs-OpenMP comparison for the pair-scan kernels: threshold
// components, oscillation, boundary meet matrix.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zerodim/metric_space.hpp"
#include "zerodim/multimap.hpp"
#include "zerodim/tower.hpp"

using namespace zerodim;

namespace {

double seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double reference, double kernel) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", name, reference, kernel,
                kernel > 0 ? reference / kernel : 0.0);
}

Tower wide_tower(int levels, int arity) {
    std::vector<Rational> labels;
    std::vector<std::vector<int>> parents(levels);
    parents[levels - 1] = {-1};
    long long width = 1;
    for (int k = levels - 2; k >= 0; --k) {
        width *= arity;
        parents[k].resize(width);
        for (long long p = 0; p < width; ++p) parents[k][p] = static_cast<int>(p / arity);
    }
    for (int k = 0; k < levels; ++k) labels.push_back(Rational(k));
    return Tower::build_explicit(std::move(labels), std::move(parents));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both columns run serial code\n");
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "reference", "parallel", "speedup");

    {
        FiniteMetricSpace X = FiniteMetricSpace::bicube(-6, 5);  // 4096 points
        Partition ps, pp;
        double s = seconds([&] { ps = reference::components_chain_search(X, Rational(1)); });
        double p = seconds([&] { pp = components(X, Rational(1)); });
        if (ps.block_of != pp.block_of) {
            std::printf("components MISMATCH\n");
            return 1;
        }
        row("components (bicube 4096)", s, p);
    }
    {
        std::mt19937 rng(5);
        Tower T = wide_tower(7, 4);  // 4096 base nodes
        ScalingFunction f = ScalingFunction::dyadic(7);
        FiniteMetricSpace bs, bp;
        double s = seconds([&] { bs = reference::boundary_serial(T, f); });
        double p = seconds([&] { bp = boundary(T, f); });
        for (int i = 0; i < bs.size(); i += 97)
            for (int j = 0; j < bs.size(); j += 89)
                if (bs.dist(i, j) != bp.dist(i, j)) {
                    std::printf("boundary MISMATCH\n");
                    return 1;
                }
        row("boundary meets (4^6 base)", s, p);
    }
    {
        auto X = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::bicube(-4, 5));  // 1024
        std::mt19937 rng(7);
        std::vector<std::pair<int, int>> pairs;
        for (int x = 0; x < X->size(); ++x) {
            pairs.emplace_back(x, static_cast<int>(rng() % X->size()));
            pairs.emplace_back(x, static_cast<int>(rng() % X->size()));
        }
        MultiMap rel(X, X, std::move(pairs));
        Rational ws, wp;
        double s = seconds([&] { ws = reference::oscillation_serial(rel, Rational(4)); });
        double p = seconds([&] { wp = oscillation(rel, Rational(4)); });
        if (ws != wp) {
            std::printf("oscillation MISMATCH\n");
            return 1;
        }
        row("oscillation (1024 points)", s, p);
    }
    return 0;
}
