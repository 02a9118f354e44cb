#pragma once

#include <array>
#include <span>
#include <string>

#include "ptsusy/numerics/grid.hpp"

namespace ptsusy::numerics {

enum class StencilAccuracy { second = 2, fourth = 4 };

namespace detail {

// Weights are divided by h^order at the call site.
inline constexpr std::array<double, 3> d1_c2{-0.5, 0.0, 0.5};
inline constexpr std::array<double, 3> d1_l2{-1.5, 2.0, -0.5};
inline constexpr std::array<double, 5> d1_c4{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
inline constexpr std::array<double, 5> d1_l4_0{-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
inline constexpr std::array<double, 5> d1_l4_1{-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};

inline constexpr std::array<double, 3> d2_c2{1.0, -2.0, 1.0};
inline constexpr std::array<double, 4> d2_l2{2.0, -5.0, 4.0, -1.0};
inline constexpr std::array<double, 5> d2_c4{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
inline constexpr std::array<double, 6> d2_l4_0{45.0 / 12, -154.0 / 12, 214.0 / 12, -156.0 / 12, 61.0 / 12, -10.0 / 12};
inline constexpr std::array<double, 6> d2_l4_1{10.0 / 12, -15.0 / 12, -4.0 / 12, 14.0 / 12, -6.0 / 12, 1.0 / 12};

struct StencilSet {
    std::span<const double> central;
    std::span<const double> left0;  // one-sided stencil for index 0
    std::span<const double> left1;  // for index 1 (empty when the central stencil already fits)
    int min_points;
};

inline StencilSet stencils(int order, StencilAccuracy accuracy) {
    if (order == 1 && accuracy == StencilAccuracy::second) return {d1_c2, d1_l2, {}, 3};
    if (order == 1 && accuracy == StencilAccuracy::fourth) return {d1_c4, d1_l4_0, d1_l4_1, 5};
    if (order == 2 && accuracy == StencilAccuracy::second) return {d2_c2, d2_l2, {}, 4};
    if (order == 2 && accuracy == StencilAccuracy::fourth) return {d2_c4, d2_l4_0, d2_l4_1, 6};
    throw ContractError("fd_derivative: unsupported derivative order " + std::to_string(order));
}

}  // namespace detail

/// Finite-difference derivative of uniformly sampled data with spacing h.
///
/// Central stencils of the requested accuracy in the interior; one-sided
/// stencils of the same accuracy at the first/last points. order is 1 or 2.
inline GridFunction fd_derivative(const GridFunction& f, double h, int order,
                                  StencilAccuracy accuracy = StencilAccuracy::second) {
    const auto set = detail::stencils(order, accuracy);
    const int n = static_cast<int>(f.size());
    if (n < set.min_points)
        throw ContractError("fd_derivative: grid of " + std::to_string(n) + " points is too small for the stencil");
    const double scale = order == 1 ? 1.0 / h : 1.0 / (h * h);
    const double sign = order == 1 ? -1.0 : 1.0;  // mirrored one-sided stencils flip sign for odd order
    const int half = static_cast<int>(set.central.size()) / 2;

    GridFunction out(f.size());
    auto at = [&](int i) { return f[static_cast<std::size_t>(i)]; };
    for (int i = 0; i < n; ++i) {
        Complex acc{};
        if (i >= half && i < n - half) {
            for (int k = 0; k < static_cast<int>(set.central.size()); ++k) acc += set.central[k] * at(i - half + k);
            out[static_cast<std::size_t>(i)] = acc * scale;
            continue;
        }
        const bool left = i < half;
        const int offset = left ? i : n - 1 - i;
        const auto w = offset == 0 ? set.left0 : set.left1;
        for (int k = 0; k < static_cast<int>(w.size()); ++k) {
            if (left)
                acc += w[k] * at(k);
            else
                acc += sign * w[k] * at(n - 1 - k);
        }
        out[static_cast<std::size_t>(i)] = acc * scale;
    }
    return out;
}

inline GridFunction fd_derivative(const Grid& grid, const GridFunction& f, int order,
                                  StencilAccuracy accuracy = StencilAccuracy::second) {
    require_on_grid(grid, f, "fd_derivative");
    return fd_derivative(f, grid.spacing(), order, accuracy);
}

}  // namespace ptsusy::numerics
