#include "zerodim/metric_space.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace zerodim {

int FiniteMetricSpace::point_index(const std::string& id) const {
    for (int i = 0; i < n_; ++i)
        if (ids_[i] == id) return i;
    return -1;
}

int FiniteMetricSpace::threshold_index(const Rational& s) const {
    if (s.is_negative()) return -1;
    int lo = 0, hi = static_cast<int>(values_.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (values_[mid] <= s)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

void FiniteMetricSpace::compute_ultrametric_flag() {
    ultrametric_ = true;
    for (int i = 0; i < n_ && ultrametric_; ++i)
        for (int j = i + 1; j < n_ && ultrametric_; ++j) {
            const int dij = value_index(i, j);
            for (int k = 0; k < n_; ++k) {
                if (dij > std::max(value_index(i, k), value_index(k, j))) {
                    ultrametric_ = false;
                    break;
                }
            }
        }
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> ids,
                                                 const std::vector<std::vector<Rational>>& d) {
    const int n = static_cast<int>(ids.size());
    if (static_cast<int>(d.size()) != n)
        throw std::invalid_argument("metric: matrix size does not match point count");
    for (const auto& row : d)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("metric: matrix is not square");

    std::map<Rational, int> seen;
    seen[Rational(0)] = 0;
    for (int i = 0; i < n; ++i) {
        if (!d[i][i].is_zero()) throw std::invalid_argument("metric: nonzero diagonal");
        for (int j = i + 1; j < n; ++j) {
            if (d[i][j] != d[j][i]) throw std::invalid_argument("metric: asymmetric matrix");
            if (d[i][j].is_negative()) throw std::invalid_argument("metric: negative distance");
            if (d[i][j].is_zero()) throw std::invalid_argument("metric: zero distance off diagonal");
            seen.emplace(d[i][j], 0);
        }
    }
    FiniteMetricSpace X;
    X.kind_ = Kind::Dense;
    X.n_ = n;
    X.ids_ = std::move(ids);
    int next = 0;
    for (auto& [v, vi] : seen) {
        vi = next++;
        X.values_.push_back(v);
    }
    X.idx_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) X.idx_[static_cast<std::size_t>(i) * n + j] = seen.at(d[i][j]);
    X.compute_ultrametric_flag();
    return X;
}

FiniteMetricSpace FiniteMetricSpace::line(std::vector<std::string> ids,
                                          const std::vector<Rational>& coords) {
    const int n = static_cast<int>(ids.size());
    if (static_cast<int>(coords.size()) != n)
        throw std::invalid_argument("metric: coords size does not match point count");
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational diff = coords[i] - coords[j];
            d[i][j] = diff.is_negative() ? -diff : diff;
        }
    return from_matrix(std::move(ids), d);
}

FiniteMetricSpace FiniteMetricSpace::bicube(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("bicube: lo > hi");
    const int width = hi - lo + 1;
    if (width > 24) throw std::invalid_argument("bicube: width over 24 coordinates");
    FiniteMetricSpace X;
    X.kind_ = Kind::Bicube;
    X.lo_ = lo;
    X.hi_ = hi;
    X.n_ = 1 << width;
    X.masks_.resize(X.n_);
    X.ids_.resize(X.n_);
    for (int m = 0; m < X.n_; ++m) {
        X.masks_[m] = static_cast<uint64_t>(m);
        std::string id(width, '0');
        for (int b = 0; b < width; ++b)
            if (m & (1 << b)) id[width - 1 - b] = '1';  // leftmost char = coordinate hi
        X.ids_[m] = std::move(id);
    }
    X.values_.push_back(Rational(0));
    for (int b = 0; b < width; ++b) X.values_.push_back(Rational::pow2(lo + b));
    X.ultrametric_ = true;  // max of 2^i weights; verified by tests on small widths
    return X;
}

FiniteMetricSpace FiniteMetricSpace::from_value_index_matrix(std::vector<std::string> ids,
                                                             std::vector<Rational> values,
                                                             std::vector<int> idx,
                                                             bool check_ultrametric) {
    const int n = static_cast<int>(ids.size());
    if (values.empty() || !values[0].is_zero())
        throw std::invalid_argument("metric: value table must start at 0");
    for (std::size_t k = 1; k < values.size(); ++k)
        if (!(values[k - 1] < values[k]))
            throw std::invalid_argument("metric: value table not strictly increasing");
    if (idx.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("metric: index matrix size mismatch");
    FiniteMetricSpace X;
    X.kind_ = Kind::Dense;
    X.n_ = n;
    X.ids_ = std::move(ids);
    X.values_ = std::move(values);
    X.idx_ = std::move(idx);
    for (int i = 0; i < n; ++i) {
        if (X.idx_[static_cast<std::size_t>(i) * n + i] != 0)
            throw std::invalid_argument("metric: nonzero diagonal");
        for (int j = i + 1; j < n; ++j) {
            int a = X.idx_[static_cast<std::size_t>(i) * n + j];
            int b = X.idx_[static_cast<std::size_t>(j) * n + i];
            if (a != b) throw std::invalid_argument("metric: asymmetric matrix");
            if (a <= 0 || a >= static_cast<int>(X.values_.size()))
                throw std::invalid_argument("metric: index out of range");
        }
    }
    if (check_ultrametric)
        X.compute_ultrametric_flag();
    else
        X.ultrametric_ = true;
    return X;
}

}  // namespace zerodim
