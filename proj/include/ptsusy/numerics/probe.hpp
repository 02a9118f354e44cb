#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/grid.hpp"

namespace ptsusy::numerics {

/// Test function amp * exp(-u^2/2) * exp(i k x), u = (x - center)/width,
/// with closed-form derivatives up to fourth order.
struct GaussianProbe {
    double center = 0.0;
    double width = 1.0;
    double wavenumber = 0.0;
    Complex amplitude{1.0, 0.0};

    /// d^order/dx^order of the probe at x, order in [0, 4].
    Complex derivative(double x, int order) const {
        if (order < 0 || order > 4) throw ContractError("GaussianProbe: derivative order " + std::to_string(order));
        // Leibniz rule over the Gaussian (Hermite) and plane-wave factors.
        const double u = (x - center) / width;
        const double he[5] = {1.0, u, u * u - 1.0, u * u * u - 3.0 * u, u * u * u * u - 6.0 * u * u + 3.0};
        const double g = std::exp(-0.5 * u * u);
        static constexpr int binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
        const Complex ik{0.0, wavenumber};
        Complex acc{};
        Complex ik_pow = 1.0;
        for (int j = 0; j <= order; ++j) {
            const int m = order - j;  // derivatives landing on the Gaussian
            const double gm = ((m % 2) ? -1.0 : 1.0) * he[m] * g / std::pow(width, m);
            acc += static_cast<double>(binom[order][j]) * gm * ik_pow;
            ik_pow *= ik;
        }
        return amplitude * acc * std::exp(Complex{0.0, wavenumber * x});
    }

    Complex operator()(double x) const { return derivative(x, 0); }

    GridFunction sample(const Grid& grid, int order = 0) const {
        return grid.sample([&](double x) { return derivative(x, order); });
    }
};

}  // namespace ptsusy::numerics
