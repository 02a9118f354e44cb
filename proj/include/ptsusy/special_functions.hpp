#pragma once

// Complex-argument orthogonal polynomials and elementary complex helpers.
//
// Everything here is a pure function of its arguments. Recurrences run
// forward in complex double precision; degrees in this library stay small
// (n < 50), where forward recurrence is accurate.

#include <cmath>
#include <algorithm>
#include <complex>
#include <concepts>
#include <limits>
#include <string>

#include "ptsusy/errors.hpp"

namespace ptsusy {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

namespace special {

namespace detail {

inline void require_degree(int n, const char* who) {
    if (n < 0) throw ContractError(std::string(who) + ": negative degree " + std::to_string(n));
}

template <std::floating_point T>
std::complex<T> checked(std::complex<T> z, const char* who) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NumericalError(std::string(who) + ": non-finite result");
    return z;
}

}  // namespace detail

/// Generalized Laguerre polynomial L_n^{(a)}(z) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+a-z) L_k - (k+a) L_{k-1}.
template <std::floating_point T>
std::complex<T> laguerre(int n, T a, std::complex<T> z) {
    detail::require_degree(n, "laguerre");
    std::complex<T> prev{1};
    if (n == 0) return prev;
    std::complex<T> cur = T(1) + a - z;
    for (int k = 1; k < n; ++k) {
        std::complex<T> next = ((T(2 * k + 1) + a - z) * cur - (T(k) + a) * prev) / T(k + 1);
        prev = cur;
        cur = next;
    }
    return detail::checked(cur, "laguerre");
}

/// d/dz L_n^{(a)}(z) = -L_{n-1}^{(a+1)}(z).
template <std::floating_point T>
std::complex<T> laguerre_derivative(int n, T a, std::complex<T> z) {
    detail::require_degree(n, "laguerre_derivative");
    if (n == 0) return {};
    return -laguerre(n - 1, a + T(1), z);
}

/// Jacobi polynomial P_n^{(a,b)}(y) by the standard three-term recurrence.
///
/// Negative orders are allowed. When the leading recurrence coefficient
/// 2k(k+a+b)(2k+a+b-2) vanishes for some needed k the evaluation is
/// refused with a NumericalError ("degenerate Jacobi recurrence").
template <std::floating_point T>
std::complex<T> jacobi(int n, T a, T b, std::complex<T> y) {
    detail::require_degree(n, "jacobi");
    std::complex<T> prev{1};
    if (n == 0) return prev;
    std::complex<T> cur = (a - b) / T(2) + (T(1) + (a + b) / T(2)) * y;
    const T ab = a + b;
    for (int k = 2; k <= n; ++k) {
        const T s = T(2 * k) + ab;
        const T lead = T(2 * k) * (T(k) + ab) * (s - T(2));
        const T cubic = (s - T(2)) * (s - T(1)) * s;
        const T scale = std::max({T(1), std::abs(cubic), std::abs(T(2 * k) * (T(k) + ab))});
        if (std::abs(lead) <= T(64) * std::numeric_limits<T>::epsilon() * scale)
            throw NumericalError("degenerate Jacobi recurrence at k=" + std::to_string(k));
        const T lin = (s - T(1)) * (a * a - b * b);
        const T back = T(2) * (T(k) + a - T(1)) * (T(k) + b - T(1)) * s;
        std::complex<T> next = ((lin + cubic * y) * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    return detail::checked(cur, "jacobi");
}

/// d/dy P_n^{(a,b)}(y) = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}(y).
template <std::floating_point T>
std::complex<T> jacobi_derivative(int n, T a, T b, std::complex<T> y) {
    detail::require_degree(n, "jacobi_derivative");
    if (n == 0) return {};
    return (T(n) + a + b + T(1)) / T(2) * jacobi(n - 1, a + T(1), b + T(1), y);
}

/// exp(s Log z) with Log the principal branch, arg in (-pi, pi].
template <std::floating_point T>
std::complex<T> principal_power(std::complex<T> z, T s) {
    if (z == std::complex<T>{}) {
        if (s <= T(0)) throw DomainError("principal_power: zero base with non-positive exponent");
        return {};
    }
    if (s == T(0)) return T(1);
    if (s == T(1)) return z;
    return detail::checked(std::exp(s * std::log(z)), "principal_power");
}

/// The six hyperbolic functions at one complex point. cosh and sinh are
/// always available; the quotients throw PoleError at their poles.
template <std::floating_point T>
struct Hyperbolics {
    std::complex<T> cosh;
    std::complex<T> sinh;

    std::complex<T> tanh() const { return sinh / nonzero(cosh, sinh, "tanh"); }
    std::complex<T> sech() const { return T(1) / nonzero(cosh, sinh, "sech"); }
    std::complex<T> coth() const { return cosh / nonzero(sinh, cosh, "coth"); }
    std::complex<T> cosech() const { return T(1) / nonzero(sinh, cosh, "cosech"); }

private:
    static std::complex<T> nonzero(std::complex<T> d, std::complex<T> other, const char* name) {
        const T tiny = T(16) * std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(other));
        if (std::abs(d) <= tiny) throw PoleError(name);
        return d;
    }
};

template <std::floating_point T>
Hyperbolics<T> complex_hyperbolics(std::complex<T> z) {
    return {detail::checked(std::cosh(z), "cosh"), detail::checked(std::sinh(z), "sinh")};
}

}  // namespace special
}  // namespace ptsusy
