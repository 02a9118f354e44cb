#pragma once

// Order-two parasupersymmetry built from two superpotentials W1, W2 with
//
//   W2^2 - W1^2 - W1' - W2' = c,   c1 = -c2,   c = c1 - c2,
//
// and components H1 = Abar1 A1 + c1, H2 = A1 Abar1 + c1 = Abar2 A2 + c2,
// H3 = A2 Abar2 + c2. Each component is a family Hamiltonian at shifted
// parameters plus a constant, read off the partner maps of W1 and W2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/finite_difference.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/numerics/probe.hpp"
#include "ptsusy/potentials.hpp"
#include "ptsusy/susy.hpp"

namespace ptsusy {

enum class Choice { first, second };

inline std::string_view to_string(Choice c) { return c == Choice::first ? "first" : "second"; }

inline std::optional<Choice> parse_choice(std::string_view s) {
    if (s == "first" || s == "1") return Choice::first;
    if (s == "second" || s == "2") return Choice::second;
    return std::nullopt;
}

enum class Component { H1 = 1, H2 = 2, H3 = 3 };

inline std::string_view to_string(Component c) {
    switch (c) {
        case Component::H1: return "H1";
        case Component::H2: return "H2";
        case Component::H3: return "H3";
    }
    return "?";
}

/// A component Hamiltonian written as H^{(params)} + constant.
struct ComponentHamiltonian {
    PotentialParams params;
    double constant;
};

struct PsusyTriplet {
    Family family;
    PotentialParams params;
    Choice choice;
    SuperpotentialSpec W1;
    SuperpotentialSpec W2;
    double c1;
    double c2;

    double c() const noexcept { return c1 - c2; }
};

/// Overall shift of the Poschl-Teller and Scarf components: (A^2 + (B - 1/2)^2) / 2.
struct CalligraphicShift {
    double script_E;
};

inline CalligraphicShift calligraphic_shift(const PotentialParams& p) {
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values))
        return {0.5 * (t->A * t->A + (t->B - 0.5) * (t->B - 0.5))};
    if (const auto* s = std::get_if<ScarfParams>(&p.values)) return {0.5 * (s->A * s->A + (s->B - 0.5) * (s->B - 0.5))};
    throw ContractError("calligraphic_shift: defined for the Poschl-Teller and Scarf families only");
}

/// The (W1, W2, c1 = -c2) pairing of the chosen construction. For the
/// oscillator the derived parameter alpha - 1 (first) must stay a valid
/// oscillator parameter; the hyperbolic families may run into empty towers.
inline PsusyTriplet build_triplet(const PotentialParams& p, Choice choice) {
    validate(p);
    const bool first = choice == Choice::first;
    const Family fam = p.family();
    auto make = [&](const PotentialParams& q1, Variant v1, const PotentialParams& q2, Variant v2, double c1) {
        return PsusyTriplet{fam, p, choice, {q1, v1}, {q2, v2}, c1, -c1};
    };
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        const double a = o->alpha;
        const PotentialParams q2 = shifted(p, {.d_alpha = first ? -1.0 : +1.0});
        if (auto why = validation_failure(q2))
            throw DomainError("derived parameters leave the oscillator domain: " + describe(q2) + " (" + *why + ")");
        return first ? make(p, Variant::W, q2, Variant::Wprime, -2.0 * a) : make(p, Variant::Wprime, q2, Variant::W, 2.0 * a);
    }
    double A = 0.0, B = 0.0;
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        A = t->A;
        B = t->B;
    } else {
        const auto& s = std::get<ScarfParams>(p.values);
        A = s.A;
        B = s.B;
    }
    // (A^2 - (B - 1/2)^2) / 2 in factored form, so that c1 - c2 reproduces the
    // second-derivative constant (A + B - 1/2)(A - B + 1/2) bit for bit.
    const double half_diff = 0.5 * ((A + B - 0.5) * (A - B + 0.5));
    if (fam == Family::poschl_teller)
        return first ? make(p, Variant::W, shifted(p, {.d_B = -1.0}), Variant::Wprime, half_diff)
                     : make(p, Variant::Wprime, shifted(p, {.d_A = -1.0}), Variant::W, -half_diff);
    return first ? make(p, Variant::W, shifted(p, {.d_A = -1.0}), Variant::Wprime, -half_diff)
                 : make(p, Variant::Wprime, shifted(p, {.d_B = -1.0}), Variant::W, half_diff);
}

/// H1 = V+(W1) - E1 + c1, H2 = V-(W1) - E1 + c1, H3 = V-(W2) - E2 + c2, each
/// expressed through the partner maps as a family Hamiltonian plus a constant.
inline ComponentHamiltonian component_hamiltonian(const PsusyTriplet& t, Component c) {
    const auto m1 = partner_map(t.W1);
    const auto m2 = partner_map(t.W2);
    const double e1 = factorization_energy(t.W1);
    const double e2 = factorization_energy(t.W2);
    switch (c) {
        case Component::H1: return {shifted(t.W1.params, m1.plus_shift), m1.plus_constant - e1 + t.c1};
        case Component::H2: return {shifted(t.W1.params, m1.minus_shift), m1.minus_constant - e1 + t.c1};
        case Component::H3: return {shifted(t.W2.params, m2.minus_shift), m2.minus_constant - e2 + t.c2};
    }
    throw ContractError("component_hamiltonian: unknown component");
}

/// H2 read off W2 instead of W1; must agree with component_hamiltonian(t, H2).
inline ComponentHamiltonian component_h2_from_w2(const PsusyTriplet& t) {
    const auto m2 = partner_map(t.W2);
    return {shifted(t.W2.params, m2.plus_shift), m2.plus_constant - factorization_energy(t.W2) + t.c2};
}

inline double component_energy(const PsusyTriplet& t, Component c, const LevelIndex& level) {
    const auto h = component_hamiltonian(t, c);
    return energy(h.params, level) + h.constant;
}

/// max over the grid of |W2^2 - W1^2 - W1' - W2' - c| with analytic derivatives.
inline double constraint_residual(const PsusyTriplet& t, const numerics::Grid& grid) {
    double worst = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto w1 = superpotential_sample(t.W1, x);
        const auto w2 = superpotential_sample(t.W2, x);
        const Complex r = w2.value * w2.value - w1.value * w1.value - w1.derivative - w2.derivative - t.c();
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct SpectrumMember {
    Component component;
    LevelIndex level;

    friend bool operator==(const SpectrumMember&, const SpectrumMember&) = default;
};

struct SpectrumEntry {
    double energy;
    int degeneracy;
    std::vector<SpectrumMember> members;

    friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Absolute tolerance under which component energies are the same level.
inline constexpr double merge_tolerance = 1e-9;

namespace detail {

struct Tagged {
    double energy;
    SpectrumMember member;
};

inline std::vector<SpectrumEntry> merge(std::vector<Tagged> all) {
    std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.energy < b.energy; });
    std::vector<SpectrumEntry> out;
    for (const auto& t : all) {
        if (!out.empty() && std::abs(t.energy - out.back().energy) <= merge_tolerance) {
            out.back().members.push_back(t.member);
            ++out.back().degeneracy;
        } else {
            out.push_back({t.energy, 1, {t.member}});
        }
    }
    return out;
}

// Levels of one component below `limit` entries per infinite tower. In
// limiting mode coincident levels of the two towers count once (the + member
// is kept), since quasi-parity no longer separates them.
inline std::vector<Tagged> component_levels(const PsusyTriplet& t, Component c, int limit) {
    const auto h = component_hamiltonian(t, c);
    std::vector<Tagged> out;
    for (auto q : {QuasiParity::even, QuasiParity::odd}) {
        for (const auto& lv : tower(h.params, q, limit)) {
            const double e = energy(h.params, lv) + h.constant;
            const bool duplicate = t.params.limiting && std::any_of(out.begin(), out.end(), [&](const Tagged& x) {
                return std::abs(x.energy - e) <= merge_tolerance;
            });
            if (!duplicate) out.push_back({e, {c, lv}});
        }
    }
    return out;
}

}  // namespace detail

/// Merged spectrum of H1, H2, H3 with degeneracies, ascending, truncated to
/// max_levels entries. Finite families return the whole spectrum when shorter.
inline std::vector<SpectrumEntry> triplet_spectrum(const PsusyTriplet& t, int max_levels) {
    if (max_levels < 1) throw ContractError("triplet_spectrum: max_levels must be positive");
    const bool infinite = t.family == Family::oscillator;
    for (int limit = max_levels + 2;; limit *= 2) {
        std::vector<detail::Tagged> all;
        double complete_below = std::numeric_limits<double>::infinity();
        for (auto c : {Component::H1, Component::H2, Component::H3}) {
            auto lv = detail::component_levels(t, c, limit);
            if (infinite) {
                // Only energies below every tower's last generated level are complete.
                const auto h = component_hamiltonian(t, c);
                for (auto q : {QuasiParity::even, QuasiParity::odd})
                    complete_below = std::min(complete_below, energy(h.params, {q, limit - 1}) + h.constant);
            }
            all.insert(all.end(), lv.begin(), lv.end());
        }
        auto merged = detail::merge(std::move(all));
        if (infinite)
            std::erase_if(merged, [&](const SpectrumEntry& e) { return e.energy > complete_below - merge_tolerance; });
        if (!infinite || static_cast<int>(merged.size()) >= max_levels) {
            if (static_cast<int>(merged.size()) > max_levels) merged.resize(static_cast<std::size_t>(max_levels));
            return merged;
        }
    }
}

/// Merged spectrum of the oscillator triplet at integer alpha = N (limiting
/// mode). The first construction needs N >= 2, the second N >= 1.
inline std::vector<SpectrumEntry> limiting_pattern(Family family, int N, Choice choice, int max_levels = 8) {
    if (family != Family::oscillator)
        throw ContractError("limiting_pattern: integer-limit patterns are stated for the oscillator family only");
    const int lowest = choice == Choice::first ? 2 : 1;
    if (N < lowest)
        throw DomainError("limiting_pattern: N must be >= " + std::to_string(lowest) + " for the " +
                          std::string(to_string(choice)) + " construction, got " + std::to_string(N));
    return triplet_spectrum(build_triplet(PotentialParams::oscillator(N, 1.0, true), choice), max_levels);
}

inline std::vector<int> degeneracies(const std::vector<SpectrumEntry>& s) {
    std::vector<int> d;
    for (const auto& e : s) d.push_back(e.degeneracy);
    return d;
}

inline std::vector<double> energies(const std::vector<SpectrumEntry>& s) {
    std::vector<double> e;
    for (const auto& x : s) e.push_back(x.energy);
    return e;
}

struct AlgebraResidual {
    double nilpotency;  // max |Q^3 F|
    double trilinear;   // max |(Q^2 Qbar + Q Qbar Q + Qbar Q^2) F - 2 Q H_ps F|
};

/// Grid check of the PSUSY algebra on F = (f1, f2, f3) with
///
///   Q = [[0, 0, 0], [A1, 0, 0], [0, A2, 0]],   Qbar = [[0, Abar1, 0], [0, 0, Abar2], [0, 0, 0]].
///
/// The charges use finite differences; H_ps F uses the closed-form component
/// potentials and the probes' analytic second derivatives.
inline AlgebraResidual psusy_algebra_residual(const PsusyTriplet& t, const std::array<numerics::GaussianProbe, 3>& probes,
                                              const numerics::Grid& grid,
                                              numerics::StencilAccuracy accuracy = numerics::StencilAccuracy::second) {
    using numerics::GridFunction;
    const auto A1 = [&](const GridFunction& f) { return apply_A(t.W1, grid, f, accuracy); };
    const auto A2 = [&](const GridFunction& f) { return apply_A(t.W2, grid, f, accuracy); };
    const auto Ab1 = [&](const GridFunction& f) { return apply_Abar(t.W1, grid, f, accuracy); };
    const auto Ab2 = [&](const GridFunction& f) { return apply_Abar(t.W2, grid, f, accuracy); };
    const auto add = [](const GridFunction& a, const GridFunction& b) {
        return numerics::combine(a, b, [](Complex x, Complex y) { return x + y; });
    };
    const GridFunction zero(static_cast<std::size_t>(grid.size()));

    std::array<GridFunction, 3> F;
    for (int k = 0; k < 3; ++k) F[static_cast<std::size_t>(k)] = probes[static_cast<std::size_t>(k)].sample(grid);

    const auto Q = [&](const std::array<GridFunction, 3>& v) -> std::array<GridFunction, 3> {
        return {zero, A1(v[0]), A2(v[1])};
    };
    const auto Qbar = [&](const std::array<GridFunction, 3>& v) -> std::array<GridFunction, 3> {
        return {Ab1(v[1]), Ab2(v[2]), zero};
    };

    // H_ps F with analytic derivatives.
    std::array<GridFunction, 3> HF;
    const Component comps[3] = {Component::H1, Component::H2, Component::H3};
    for (int k = 0; k < 3; ++k) {
        const auto h = component_hamiltonian(t, comps[k]);
        const auto& pr = probes[static_cast<std::size_t>(k)];
        HF[static_cast<std::size_t>(k)] = grid.sample([&](double x) {
            return -pr.derivative(x, 2) + (potential_value(h.params, x) + h.constant) * pr.derivative(x, 0);
        });
    }

    const auto Q3 = Q(Q(Q(F)));
    const auto lhs1 = Q(Q(Qbar(F)));
    const auto lhs2 = Q(Qbar(Q(F)));
    const auto lhs3 = Qbar(Q(Q(F)));
    const auto rhs = Q(HF);

    const auto [first, last] = grid.interior(residual_edge_fraction);
    AlgebraResidual r{0.0, 0.0};
    for (std::size_t k = 0; k < 3; ++k) {
        r.nilpotency = std::max(r.nilpotency, numerics::max_abs(Q3[k], first, last));
        const auto lhs = add(add(lhs1[k], lhs2[k]), lhs3[k]);
        const auto two_rhs = numerics::combine(rhs[k], zero, [](Complex a, Complex) { return 2.0 * a; });
        r.trilinear = std::max(r.trilinear, numerics::max_abs_difference(lhs, two_rhs, first, last));
    }
    return r;
}

}  // namespace ptsusy
