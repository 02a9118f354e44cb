#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ptsusy/errors.hpp"

namespace ptsusy::numerics {

using Complex = std::complex<double>;
using GridFunction = std::vector<Complex>;

/// Uniform grid of n interior points on (-L, L): x_i = -L + (i+1) h with
/// h = 2L/(n+1). The endpoints +-L are the Dirichlet walls and are not stored.
class Grid {
public:
    static constexpr int min_points = 16;

    Grid(double half_width, int points) : L_(half_width), n_(points) {
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw DomainError("grid half-width must be positive, got " + std::to_string(half_width));
        if (points < min_points)
            throw DomainError("grid needs at least " + std::to_string(min_points) + " points, got " +
                              std::to_string(points));
    }

    /// Grid on (-L, L) whose spacing is as close as possible to h (never coarser).
    static Grid with_spacing(double half_width, double spacing) {
        const int n = static_cast<int>(std::ceil(2.0 * half_width / spacing - 1e-9)) - 1;
        return Grid(half_width, n);
    }

    double half_width() const noexcept { return L_; }
    int size() const noexcept { return n_; }
    double spacing() const noexcept { return 2.0 * L_ / (n_ + 1); }
    double x(int i) const noexcept { return -L_ + (i + 1) * spacing(); }

    std::vector<double> points() const {
        std::vector<double> xs(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) xs[static_cast<std::size_t>(i)] = x(i);
        return xs;
    }

    /// Index range [first, last) that excludes `fraction` of the points at each end.
    std::pair<int, int> interior(double fraction) const {
        const int skip = static_cast<int>(std::ceil(fraction * n_));
        return {skip, n_ - skip};
    }

    template <class F>
    GridFunction sample(F&& f) const {
        GridFunction out(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = f(x(i));
        return out;
    }

private:
    double L_;
    int n_;
};

inline void require_same_size(const GridFunction& a, const GridFunction& b, const char* who) {
    if (a.size() != b.size())
        throw ContractError(std::string(who) + ": grid function length mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
}

inline void require_on_grid(const Grid& g, const GridFunction& f, const char* who) {
    if (f.size() != static_cast<std::size_t>(g.size()))
        throw ContractError(std::string(who) + ": grid function has " + std::to_string(f.size()) +
                            " samples, grid has " + std::to_string(g.size()));
}

/// max_i |f_i| over the index window [first, last).
inline double max_abs(const GridFunction& f, int first, int last) {
    double m = 0.0;
    for (int i = first; i < last; ++i) m = std::max(m, std::abs(f[static_cast<std::size_t>(i)]));
    return m;
}

inline double max_abs(const GridFunction& f) { return max_abs(f, 0, static_cast<int>(f.size())); }

inline double max_abs_difference(const GridFunction& a, const GridFunction& b, int first, int last) {
    require_same_size(a, b, "max_abs_difference");
    double m = 0.0;
    for (int i = first; i < last; ++i)
        m = std::max(m, std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
    return m;
}

/// Pointwise combination out_i = op(a_i, b_i).
template <class Op>
GridFunction combine(const GridFunction& a, const GridFunction& b, Op op) {
    require_same_size(a, b, "combine");
    GridFunction out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}

}  // namespace ptsusy::numerics
