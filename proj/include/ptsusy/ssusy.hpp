#pragma once

// Second-derivative supersymmetry in the reducible case (a = 0, d = -c^2/4).
//
// Supercharges     A+ = d^2 - 2p d + b,    A- = d^2 + 2p d + 2p' + b
// Superpotentials  W1,2 = -+(2p' + c)/(4p) + p
// Components       V(1,2) = -+2p' + p^2 + p''/(2p) - (p'/(2p))^2 - d/(4p^2)
// q factors        q+ = -d + W,  q- = d + W,   A+ = q1+ q2+,  A- = q2- q1-
//                  h(1) = q1+ q1- + c/2,  h(2) = q2- q2+ - c/2
//
// p per family:
//   oscillator     p = x - i delta                                c = -+4 alpha
//   Poschl-Teller  p = k/2 (coth tau - cosech tau) = k/2 tanh(tau/2)   c = +-k (A - B + 1/2)
//   Scarf II       p = k/2 (tanh x + i sech x)                     c = -+k (A - B + 1/2)
// with k = A + B - 1/2 and the upper sign for the first construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/finite_difference.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/numerics/probe.hpp"
#include "ptsusy/potentials.hpp"
#include "ptsusy/psusy.hpp"
#include "ptsusy/susy.hpp"

namespace ptsusy {

struct SsusyData {
    Family family;
    Choice choice;
    PotentialParams params;
    double c;
    double d;  // -c^2/4
    double a = 0.0;
};

struct PSample {
    Complex p;
    Complex dp;
    Complex d2p;
};

inline SsusyData ssusy_from_family(const PotentialParams& params, Choice choice) {
    validate(params);
    const double sign = choice == Choice::first ? 1.0 : -1.0;
    double c = 0.0;
    if (const auto* o = std::get_if<OscillatorParams>(&params.values)) {
        c = -sign * 4.0 * o->alpha;
    } else if (const auto* t = std::get_if<PoschlTellerParams>(&params.values)) {
        c = sign * ((t->A + t->B - 0.5) * (t->A - t->B + 0.5));
    } else {
        const auto& s = std::get<ScarfParams>(params.values);
        c = -sign * ((s.A + s.B - 0.5) * (s.A - s.B + 0.5));
    }
    const double d = -0.25 * c * c;
    if (!(d < 0.0)) throw DomainError("second-derivative algebra is not reducible here (d = -c^2/4 = 0)");
    return {params.family(), choice, params, c, d, 0.0};
}

/// Minimum |p| accepted before a point is treated as a pole of the p-formulas.
inline constexpr double p_pole_guard = 1e-8;

inline PSample p_sample(const SsusyData& data, double x) {
    PSample s;
    if (const auto* o = std::get_if<OscillatorParams>(&data.params.values)) {
        s = {Complex{x, -o->delta}, 1.0, 0.0};
    } else if (const auto* t = std::get_if<PoschlTellerParams>(&data.params.values)) {
        const double k = t->A + t->B - 0.5;
        const auto hy = special::complex_hyperbolics(Complex{x, -t->gamma} / 2.0);
        const Complex th = hy.tanh();
        const Complex sech2 = 1.0 - th * th;
        s = {0.5 * k * th, 0.25 * k * sech2, -0.25 * k * th * sech2};
    } else {
        const auto& sc = std::get<ScarfParams>(data.params.values);
        const double k = sc.A + sc.B - 0.5;
        const double sech = 1.0 / std::cosh(x);
        const double tanh = std::tanh(x);
        s = {0.5 * k * Complex{tanh, sech}, 0.5 * k * Complex{sech * sech, -sech * tanh},
             0.5 * k * Complex{-2.0 * sech * sech * tanh, sech * tanh * tanh - sech * sech * sech}};
    }
    if (std::abs(s.p) <= p_pole_guard) throw PoleError("p", "p(x) vanishes at x=" + std::to_string(x));
    return s;
}

struct SuperpotentialPair {
    SuperpotentialSample W1;
    SuperpotentialSample W2;
};

/// W1,2 = -+(2p' + c)/(4p) + p with analytic x-derivatives.
inline SuperpotentialPair superpotential_samples_from_p(const SsusyData& data, double x) {
    const auto s = p_sample(data, x);
    const Complex num = 2.0 * s.dp + data.c;
    const Complex frac = num / (4.0 * s.p);
    const Complex dfrac = (2.0 * s.d2p * s.p - num * s.dp) / (4.0 * s.p * s.p);
    return {{-frac + s.p, -dfrac + s.dp}, {frac + s.p, dfrac + s.dp}};
}

struct ComplexPair {
    Complex first;
    Complex second;
};

inline ComplexPair superpotentials_from_p(const SsusyData& data, double x) {
    const auto w = superpotential_samples_from_p(data, x);
    return {w.W1.value, w.W2.value};
}

inline Complex b_value(const SsusyData& data, double x) {
    const auto s = p_sample(data, x);
    const Complex r = s.dp / (2.0 * s.p);
    return -s.dp + s.p * s.p - s.d2p / (2.0 * s.p) + r * r + data.d / (4.0 * s.p * s.p);
}

/// (V1, V2) with a = 0.
inline ComplexPair v12_from_p(const SsusyData& data, double x) {
    const auto s = p_sample(data, x);
    const Complex r = s.dp / (2.0 * s.p);
    const Complex common = s.p * s.p + s.d2p / (2.0 * s.p) - r * r - data.d / (4.0 * s.p * s.p) - data.a;
    return {-2.0 * s.dp + common, 2.0 * s.dp + common};
}

enum class Charge { A_plus, A_minus };

/// Samples of f, f', f'' on a grid.
struct Jet {
    numerics::GridFunction f, df, d2f;
};

inline Jet probe_jet(const numerics::GaussianProbe& probe, const numerics::Grid& grid) {
    return {probe.sample(grid, 0), probe.sample(grid, 1), probe.sample(grid, 2)};
}

inline Jet fd_jet(const numerics::GridFunction& f, const numerics::Grid& grid, numerics::StencilAccuracy acc) {
    return {f, numerics::fd_derivative(grid, f, 1, acc), numerics::fd_derivative(grid, f, 2, acc)};
}

/// A+ f = f'' - 2p f' + b f,  A- f = f'' + 2p f' + (2p' + b) f.
inline numerics::GridFunction apply_charge(const SsusyData& data, Charge which, const numerics::Grid& grid, const Jet& j) {
    numerics::require_on_grid(grid, j.f, "apply_charge");
    numerics::require_same_size(j.f, j.df, "apply_charge");
    numerics::require_same_size(j.f, j.d2f, "apply_charge");
    numerics::GridFunction out(j.f.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto s = p_sample(data, x);
        const Complex b = b_value(data, x);
        const auto k = static_cast<std::size_t>(i);
        out[k] = which == Charge::A_plus ? j.d2f[k] - 2.0 * s.p * j.df[k] + b * j.f[k]
                                         : j.d2f[k] + 2.0 * s.p * j.df[k] + (2.0 * s.dp + b) * j.f[k];
    }
    return out;
}

/// Charge applied with finite-difference derivatives of f.
inline numerics::GridFunction apply_charge(const SsusyData& data, Charge which, const numerics::Grid& grid,
                                           const numerics::GridFunction& f,
                                           numerics::StencilAccuracy acc = numerics::StencilAccuracy::second) {
    return apply_charge(data, which, grid, fd_jet(f, grid, acc));
}

namespace detail {

inline numerics::GridFunction sample_w(const SsusyData& data, const numerics::Grid& grid, int which) {
    return grid.sample([&](double x) {
        const auto w = superpotentials_from_p(data, x);
        return which == 1 ? w.first : w.second;
    });
}

// sign * g' + W g for the q factors: q+ has sign -1, q- has sign +1.
inline numerics::GridFunction q_apply(const numerics::GridFunction& w, const numerics::GridFunction& g,
                                      const numerics::GridFunction& dg, double sign) {
    return first_order_operator(w, g, dg, sign);
}

}  // namespace detail

/// Edge fraction excluded from every second-derivative residual.
inline constexpr double ssusy_edge_fraction = 0.05;

/// max over the probes of |A+ f - q1+ q2+ f| and |A- f - q2- q1- f|. The
/// inner q factor uses the probe's analytic derivative, the outer one a
/// finite-difference derivative of the given accuracy.
inline double factorization_residual(const SsusyData& data, std::span<const numerics::GaussianProbe> probes,
                                     const numerics::Grid& grid,
                                     numerics::StencilAccuracy acc = numerics::StencilAccuracy::fourth) {
    const auto W1 = detail::sample_w(data, grid, 1);
    const auto W2 = detail::sample_w(data, grid, 2);
    const auto [first, last] = grid.interior(ssusy_edge_fraction);
    double worst = 0.0;
    for (const auto& probe : probes) {
        const Jet j = probe_jet(probe, grid);
        const auto inner_p = detail::q_apply(W2, j.f, j.df, -1.0);  // q2+ f
        const auto outer_p = detail::q_apply(W1, inner_p, numerics::fd_derivative(grid, inner_p, 1, acc), -1.0);
        worst = std::max(worst, numerics::max_abs_difference(apply_charge(data, Charge::A_plus, grid, j), outer_p, first, last));
        const auto inner_m = detail::q_apply(W1, j.f, j.df, +1.0);  // q1- f
        const auto outer_m = detail::q_apply(W2, inner_m, numerics::fd_derivative(grid, inner_m, 1, acc), +1.0);
        worst = std::max(worst, numerics::max_abs_difference(apply_charge(data, Charge::A_minus, grid, j), outer_m, first, last));
    }
    return worst;
}

struct QuasiHamiltonianResidual {
    double upper;         // |A+ A- f - (h1 + c/2)(h1 - c/2) f|
    double lower;         // |A- A+ f - (h2 - c/2)(h2 + c/2) f|
    double intermediate;  // |(q2+ q2- - c/2) f - (q1- q1+ + c/2) f|

    double max() const { return std::max({upper, lower, intermediate}); }
};

/// The block identity K = H^2 - c^2/4 on test functions. The inner operator
/// of each product is applied with the probe's analytic derivatives, the
/// outer one with finite differences of the given accuracy.
inline QuasiHamiltonianResidual quasi_hamiltonian_residual(const SsusyData& data,
                                                           std::span<const numerics::GaussianProbe> probes,
                                                           const numerics::Grid& grid,
                                                           numerics::StencilAccuracy acc = numerics::StencilAccuracy::fourth) {
    using numerics::GridFunction;
    GridFunction V1(static_cast<std::size_t>(grid.size())), V2(V1.size());
    for (int i = 0; i < grid.size(); ++i) {
        const auto v = v12_from_p(data, grid.x(i));
        V1[static_cast<std::size_t>(i)] = v.first;
        V2[static_cast<std::size_t>(i)] = v.second;
    }
    const double half_c = 0.5 * data.c;
    // (-d^2 + V + shift) g with g'' supplied.
    const auto schrodinger = [](const GridFunction& V, double shift, const GridFunction& g, const GridFunction& d2g) {
        GridFunction out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = -d2g[i] + (V[i] + shift) * g[i];
        return out;
    };
    const auto [first, last] = grid.interior(ssusy_edge_fraction);
    QuasiHamiltonianResidual r{0.0, 0.0, 0.0};
    for (const auto& probe : probes) {
        const Jet j = probe_jet(probe, grid);

        const auto am = apply_charge(data, Charge::A_minus, grid, j);
        const auto lhs_u = apply_charge(data, Charge::A_plus, grid, fd_jet(am, grid, acc));
        const auto u = schrodinger(V1, -half_c, j.f, j.d2f);
        const auto rhs_u = schrodinger(V1, +half_c, u, numerics::fd_derivative(grid, u, 2, acc));
        r.upper = std::max(r.upper, numerics::max_abs_difference(lhs_u, rhs_u, first, last));

        const auto ap = apply_charge(data, Charge::A_plus, grid, j);
        const auto lhs_l = apply_charge(data, Charge::A_minus, grid, fd_jet(ap, grid, acc));
        const auto w = schrodinger(V2, +half_c, j.f, j.d2f);
        const auto rhs_l = schrodinger(V2, -half_c, w, numerics::fd_derivative(grid, w, 2, acc));
        r.lower = std::max(r.lower, numerics::max_abs_difference(lhs_l, rhs_l, first, last));

        // q2+ q2- = -d^2 + W2^2 - W2', q1- q1+ = -d^2 + W1^2 + W1': both sides analytic.
        GridFunction a(j.f.size()), b(j.f.size());
        for (int i = 0; i < grid.size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            const auto w12 = superpotential_samples_from_p(data, grid.x(i));
            const Complex v2 = w12.W2.value * w12.W2.value - w12.W2.derivative - half_c;
            const Complex v1 = w12.W1.value * w12.W1.value + w12.W1.derivative + half_c;
            a[k] = -j.d2f[k] + v2 * j.f[k];
            b[k] = -j.d2f[k] + v1 * j.f[k];
        }
        r.intermediate = std::max(r.intermediate, numerics::max_abs_difference(a, b, first, last));
    }
    return r;
}

/// max|A-(h1 f) - h2(A- f)| and max|A+(h2 f) - h1(A+ f)| with finite
/// differences of the given accuracy for every derivative.
inline double intertwining_residual(const SsusyData& data, const numerics::GridFunction& f, const numerics::Grid& grid,
                                    numerics::StencilAccuracy acc = numerics::StencilAccuracy::second) {
    using numerics::GridFunction;
    numerics::require_on_grid(grid, f, "ssusy intertwining_residual");
    GridFunction V1(f.size()), V2(f.size());
    for (int i = 0; i < grid.size(); ++i) {
        const auto v = v12_from_p(data, grid.x(i));
        V1[static_cast<std::size_t>(i)] = v.first;
        V2[static_cast<std::size_t>(i)] = v.second;
    }
    const auto h = [&](const GridFunction& V, const GridFunction& g) {
        const auto d2 = numerics::fd_derivative(grid, g, 2, acc);
        GridFunction out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = -d2[i] + V[i] * g[i];
        return out;
    };
    const auto charge = [&](Charge which, const GridFunction& g) { return apply_charge(data, which, grid, g, acc); };
    const auto [first, last] = grid.interior(ssusy_edge_fraction);
    const double minus = numerics::max_abs_difference(charge(Charge::A_minus, h(V1, f)), h(V2, charge(Charge::A_minus, f)),
                                                      first, last);
    const double plus = numerics::max_abs_difference(charge(Charge::A_plus, h(V2, f)), h(V1, charge(Charge::A_plus, f)),
                                                     first, last);
    return std::max(minus, plus);
}

struct PsusyConsistency {
    double max_w_deviation;  // max over the grid of |W_i(p) - W_i(triplet)|
    double c_ssusy;
    double c_psusy;  // c1 - c2 of the triplet

    bool c_equal() const { return c_ssusy == c_psusy; }
};

/// Compares the superpotentials and constant obtained from p with the PSUSY triplet.
inline PsusyConsistency consistency_with_psusy(const PotentialParams& params, Choice choice, const numerics::Grid& grid) {
    const auto data = ssusy_from_family(params, choice);
    const auto trip = build_triplet(params, choice);
    double dev = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto w = superpotentials_from_p(data, x);
        dev = std::max(dev, std::abs(w.first - superpotential_value(trip.W1, x)));
        dev = std::max(dev, std::abs(w.second - superpotential_value(trip.W2, x)));
    }
    return {dev, data.c, trip.c()};
}

}  // namespace ptsusy
