#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/numerics/matrix.hpp"

namespace ptsusy::numerics {

/// -d^2/dx^2 + V(x) on the grid with Dirichlet walls (psi = 0 outside).
/// order 2 gives a tridiagonal matrix, order 4 a pentadiagonal one; both are
/// complex symmetric.
template <class V>
BandMatrix discretize_hamiltonian(V&& potential, const Grid& grid, int order) {
    if (order != 2 && order != 4)
        throw ContractError("discretize_hamiltonian: order must be 2 or 4, got " + std::to_string(order));
    const int n = grid.size();
    const int w = order / 2;
    const double h2 = grid.spacing() * grid.spacing();
    BandMatrix m(n, w, w);
    for (int i = 0; i < n; ++i) {
        const Complex v = potential(grid.x(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("potential is not finite at x=" + std::to_string(grid.x(i)));
        if (order == 2) {
            m.at(i, i) = 2.0 / h2 + v;
            if (i + 1 < n) m.at(i, i + 1) = m.at(i + 1, i) = -1.0 / h2;
        } else {
            m.at(i, i) = 30.0 / (12.0 * h2) + v;
            if (i + 1 < n) m.at(i, i + 1) = m.at(i + 1, i) = -16.0 / (12.0 * h2);
            if (i + 2 < n) m.at(i, i + 2) = m.at(i + 2, i) = 1.0 / (12.0 * h2);
        }
    }
    return m;
}

/// Eigenvalues of the order-2 Dirichlet Laplacian on n points: 4 sin^2(k pi / (2(n+1))) / h^2.
inline double discrete_laplacian_eigenvalue(const Grid& grid, int k) {
    const double h = grid.spacing();
    const double s = std::sin(k * std::numbers::pi / (2.0 * (grid.size() + 1)));
    return 4.0 * s * s / (h * h);
}

}  // namespace ptsusy::numerics
