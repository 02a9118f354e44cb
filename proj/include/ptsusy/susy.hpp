#pragma once

// First-order supersymmetry: superpotentials W, the operators
// A_op = d/dx + W and Abar_op = -d/dx + W, and the partner potentials
// V+- = W^2 -+ W' + E.
//
// Variants per family:
//
//   oscillator     W     = z + (alpha - 1/2)/z      E = 2 - 2 alpha
//                  W'    = z - (alpha + 1/2)/z      E = 2 + 2 alpha
//                  W''   = W at alpha + 1           E = -2 alpha
//                  W'''  = W' at alpha - 1          E = 2 alpha
//   Poschl-Teller  W     = (B - 1/2) coth tau - (A + 1/2) cosech tau    E = -(B - 1/2)^2
//                  W'    = A coth tau - B cosech tau                    E = -A^2
//   Scarf II       W     = A tanh x + i B sech x                        E = -A^2
//                  W'    = (B - 1/2) tanh x + i (A + 1/2) sech x        E = -(B - 1/2)^2

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/finite_difference.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/potentials.hpp"

namespace ptsusy {

enum class Variant { W, Wprime, Wpp, Wppp };

inline std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::W: return "W";
        case Variant::Wprime: return "Wprime";
        case Variant::Wpp: return "Wpp";
        case Variant::Wppp: return "Wppp";
    }
    return "?";
}

struct SuperpotentialSpec {
    PotentialParams params;
    Variant variant = Variant::W;
};

/// Throws DomainError unless the params are valid and the variant exists for the family.
inline const SuperpotentialSpec& validate(const SuperpotentialSpec& spec) {
    validate(spec.params);
    if ((spec.variant == Variant::Wpp || spec.variant == Variant::Wppp) && spec.params.family() != Family::oscillator)
        throw DomainError("variant " + std::string(to_string(spec.variant)) + " exists only for the oscillator family");
    return spec;
}

struct SuperpotentialSample {
    Complex value;
    Complex derivative;  // dW/dx
};

namespace detail {

// b coth tau - a cosech tau and its x-derivative.
inline SuperpotentialSample coth_cosech(double b, double a, Complex tau) {
    const auto hy = special::complex_hyperbolics(tau);
    const Complex coth = hy.coth();
    const Complex csch = hy.cosech();
    return {b * coth - a * csch, -b * csch * csch + a * csch * coth};
}

// a tanh x + i b sech x and its derivative.
inline SuperpotentialSample tanh_sech(double a, double b, double x) {
    const double sech = 1.0 / std::cosh(x);
    const double tanh = std::tanh(x);
    return {Complex{a * tanh, b * sech}, Complex{a * sech * sech, -b * sech * tanh}};
}

// z + c/z with z = x - i delta.
inline SuperpotentialSample z_plus_c_over_z(double c, double delta, double x) {
    const Complex z{x, -delta};
    return {z + c / z, 1.0 - c / (z * z)};
}

}  // namespace detail

/// W(x) and the closed-form dW/dx.
inline SuperpotentialSample superpotential_sample(const SuperpotentialSpec& spec, double x) {
    const auto& p = spec.params;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        switch (spec.variant) {
            case Variant::W: return detail::z_plus_c_over_z(o->alpha - 0.5, o->delta, x);
            case Variant::Wprime: return detail::z_plus_c_over_z(-(o->alpha + 0.5), o->delta, x);
            case Variant::Wpp: return detail::z_plus_c_over_z(o->alpha + 0.5, o->delta, x);
            case Variant::Wppp: return detail::z_plus_c_over_z(-(o->alpha - 0.5), o->delta, x);
        }
    }
    if (spec.variant == Variant::Wpp || spec.variant == Variant::Wppp)
        throw DomainError("variant " + std::string(to_string(spec.variant)) + " exists only for the oscillator family");
    const bool w = spec.variant == Variant::W;
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        const Complex tau{x, -t->gamma};
        return w ? detail::coth_cosech(t->B - 0.5, t->A + 0.5, tau) : detail::coth_cosech(t->A, t->B, tau);
    }
    const auto& s = std::get<ScarfParams>(p.values);
    return w ? detail::tanh_sech(s.A, s.B, x) : detail::tanh_sech(s.B - 0.5, s.A + 0.5, x);
}

inline Complex superpotential_value(const SuperpotentialSpec& spec, double x) {
    return superpotential_sample(spec, x).value;
}

inline double factorization_energy(const SuperpotentialSpec& spec) {
    const auto& p = spec.params;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        switch (spec.variant) {
            case Variant::W: return 2.0 - 2.0 * o->alpha;
            case Variant::Wprime: return 2.0 + 2.0 * o->alpha;
            case Variant::Wpp: return -2.0 * o->alpha;
            case Variant::Wppp: return 2.0 * o->alpha;
        }
    }
    const bool w = spec.variant == Variant::W;
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values))
        return w ? -(t->B - 0.5) * (t->B - 0.5) : -t->A * t->A;
    const auto& s = std::get<ScarfParams>(p.values);
    return w ? -s.A * s.A : -(s.B - 0.5) * (s.B - 0.5);
}

struct PartnerValues {
    Complex plus;
    Complex minus;
};

/// V+- = W^2 -+ W' + E at x.
inline PartnerValues partner_potentials(const SuperpotentialSpec& spec, double x) {
    const auto w = superpotential_sample(spec, x);
    const double e = factorization_energy(spec);
    const Complex w2 = w.value * w.value;
    return {w2 - w.derivative + e, w2 + w.derivative + e};
}

/// Each partner is a family potential at shifted parameters plus a constant.
struct PartnerMap {
    ParamShift plus_shift;
    double plus_constant = 0.0;
    ParamShift minus_shift;
    double minus_constant = 0.0;
};

inline PartnerMap partner_map(const SuperpotentialSpec& spec) {
    const bool w = spec.variant == Variant::W;
    switch (spec.params.family()) {
        case Family::oscillator:
            switch (spec.variant) {
                case Variant::W: return {{}, 0.0, {.d_alpha = -1.0}, 2.0};
                case Variant::Wprime: return {{}, 0.0, {.d_alpha = +1.0}, 2.0};
                case Variant::Wpp: return {{.d_alpha = +1.0}, 0.0, {}, 2.0};
                case Variant::Wppp: return {{.d_alpha = -1.0}, 0.0, {}, 2.0};
            }
            break;
        case Family::poschl_teller:
            return w ? PartnerMap{{}, 0.0, {.d_B = -1.0}, 0.0} : PartnerMap{{}, 0.0, {.d_A = -1.0}, 0.0};
        case Family::scarf:
            return w ? PartnerMap{{}, 0.0, {.d_A = -1.0}, 0.0} : PartnerMap{{}, 0.0, {.d_B = -1.0}, 0.0};
    }
    throw ContractError("partner_map: unknown family");
}

/// Family parameters whose potential equals V+ (up to the plus constant).
inline PotentialParams plus_params(const SuperpotentialSpec& spec) {
    return shifted(spec.params, partner_map(spec).plus_shift);
}

/// Family parameters whose potential equals V- (up to the minus constant).
inline PotentialParams minus_params(const SuperpotentialSpec& spec) {
    return shifted(spec.params, partner_map(spec).minus_shift);
}

struct PartnerMapCheck {
    PartnerMap map;
    PotentialParams plus;
    PotentialParams minus;
    double deviation;  // max over the grid of |V+ - (V_plus + c+)| and |V- - (V_minus + c-)|
};

/// Checks the partner map against the family potentials on a grid. The shifted
/// records must themselves be valid family parameters.
inline PartnerMapCheck verify_partner_map(const SuperpotentialSpec& spec, const numerics::Grid& grid) {
    validate(spec);
    const PartnerMap map = partner_map(spec);
    const PotentialParams plus = shifted(spec.params, map.plus_shift);
    const PotentialParams minus = shifted(spec.params, map.minus_shift);
    for (const auto* q : {&plus, &minus})
        if (auto why = validation_failure(*q))
            throw DomainError("shift leaves family domain: " + describe(*q) + " (" + *why + ")");
    double dev = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto v = partner_potentials(spec, x);
        dev = std::max(dev, std::abs(v.plus - (potential_value(plus, x) + map.plus_constant)));
        dev = std::max(dev, std::abs(v.minus - (potential_value(minus, x) + map.minus_constant)));
    }
    return {map, plus, minus, dev};
}

/// The eigenstate of H+ killed by A_op: (+, 0) for W and W'', (-, 0) for W' and
/// W''', taken at the plus parameters.
inline LevelIndex annihilated_level(const SuperpotentialSpec& spec) {
    const bool w_type = spec.variant == Variant::W || spec.variant == Variant::Wpp;
    return {w_type ? QuasiParity::even : QuasiParity::odd, 0};
}

inline numerics::GridFunction sample_superpotential(const SuperpotentialSpec& spec, const numerics::Grid& grid) {
    return grid.sample([&](double x) { return superpotential_value(spec, x); });
}

/// sign * f' + W f pointwise; the derivative-free core of A_op (sign = +1)
/// and Abar_op (sign = -1).
inline numerics::GridFunction first_order_operator(const numerics::GridFunction& w, const numerics::GridFunction& f,
                                                   const numerics::GridFunction& fprime, double sign) {
    numerics::require_same_size(w, f, "first_order_operator");
    numerics::require_same_size(f, fprime, "first_order_operator");
    numerics::GridFunction out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = sign * fprime[i] + w[i] * f[i];
    return out;
}

/// A_op f = f' + W f with caller-supplied analytic f'.
inline numerics::GridFunction apply_A(const SuperpotentialSpec& spec, const numerics::Grid& grid,
                                      const numerics::GridFunction& f, const numerics::GridFunction& fprime) {
    numerics::require_on_grid(grid, f, "apply_A");
    return first_order_operator(sample_superpotential(spec, grid), f, fprime, +1.0);
}

/// A_op f with f' by finite differences.
inline numerics::GridFunction apply_A(const SuperpotentialSpec& spec, const numerics::Grid& grid,
                                      const numerics::GridFunction& f,
                                      numerics::StencilAccuracy accuracy = numerics::StencilAccuracy::second) {
    return apply_A(spec, grid, f, numerics::fd_derivative(grid, f, 1, accuracy));
}

/// Abar_op f = -f' + W f with caller-supplied analytic f'.
inline numerics::GridFunction apply_Abar(const SuperpotentialSpec& spec, const numerics::Grid& grid,
                                         const numerics::GridFunction& f, const numerics::GridFunction& fprime) {
    numerics::require_on_grid(grid, f, "apply_Abar");
    return first_order_operator(sample_superpotential(spec, grid), f, fprime, -1.0);
}

inline numerics::GridFunction apply_Abar(const SuperpotentialSpec& spec, const numerics::Grid& grid,
                                         const numerics::GridFunction& f,
                                         numerics::StencilAccuracy accuracy = numerics::StencilAccuracy::second) {
    return apply_Abar(spec, grid, f, numerics::fd_derivative(grid, f, 1, accuracy));
}

/// Fraction of grid points dropped at each end by the residual checks.
inline constexpr double residual_edge_fraction = 0.05;

/// max|A_op psi| / max|psi| over the interior, psi the annihilated state of the
/// variant, with analytic derivatives throughout.
inline double annihilation_residual(const SuperpotentialSpec& spec, const LevelIndex& level,
                                    const numerics::Grid& grid) {
    validate(spec);
    if (!(level == annihilated_level(spec)))
        throw ContractError(std::string("annihilation_residual: variant ") + std::string(to_string(spec.variant)) +
                            " annihilates (" + symbol(annihilated_level(spec).q) + ", 0), not (" + symbol(level.q) +
                            ", " + std::to_string(level.n) + ")");
    const PotentialParams plus = plus_params(spec);
    numerics::GridFunction psi(static_cast<std::size_t>(grid.size()));
    numerics::GridFunction dpsi(psi.size());
    for (int i = 0; i < grid.size(); ++i) {
        const auto s = eigenfunction_sample(plus, level, grid.x(i));
        psi[static_cast<std::size_t>(i)] = s.value;
        dpsi[static_cast<std::size_t>(i)] = s.derivative;
    }
    const auto a_psi = apply_A(spec, grid, psi, dpsi);
    const auto [first, last] = grid.interior(residual_edge_fraction);
    return numerics::max_abs(a_psi, first, last) / numerics::max_abs(psi, first, last);
}

/// -f'' + V f by second-order finite differences.
inline numerics::GridFunction apply_hamiltonian_fd(const numerics::GridFunction& v, const numerics::Grid& grid,
                                                   const numerics::GridFunction& f) {
    const auto f2 = numerics::fd_derivative(grid, f, 2);
    return numerics::combine(f2, numerics::combine(v, f, [](Complex a, Complex b) { return a * b; }),
                             [](Complex a, Complex b) { return -a + b; });
}

/// max|A_op(H+ f) - H-(A_op f)| over the interior with second-order finite
/// differences throughout. Shrinks like h^2 for smooth f.
inline double intertwining_residual(const SuperpotentialSpec& spec, const numerics::Grid& grid,
                                    const numerics::GridFunction& f) {
    numerics::require_on_grid(grid, f, "intertwining_residual");
    numerics::GridFunction vp(f.size()), vm(f.size());
    for (int i = 0; i < grid.size(); ++i) {
        const auto v = partner_potentials(spec, grid.x(i));
        vp[static_cast<std::size_t>(i)] = v.plus;
        vm[static_cast<std::size_t>(i)] = v.minus;
    }
    const auto lhs = apply_A(spec, grid, apply_hamiltonian_fd(vp, grid, f));
    const auto rhs = apply_hamiltonian_fd(vm, grid, apply_A(spec, grid, f));
    const auto [first, last] = grid.interior(residual_edge_fraction);
    return numerics::max_abs_difference(lhs, rhs, first, last);
}

}  // namespace ptsusy
