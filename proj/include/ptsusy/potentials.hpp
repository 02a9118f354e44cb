#pragma once

// The three PT-symmetric families:
//
//   oscillator     V(x) = (x - i delta)^2 + (alpha^2 - 1/4) / (x - i delta)^2
//   Poschl-Teller  V(x) = [B^2 + A(A+1)] cosech^2 tau - B(2A+1) cosech tau coth tau,  tau = x - i gamma
//   Scarf II       V(x) = -[B^2 + A(A+1)] sech^2 x + i B(2A+1) sech x tanh x
//
// together with their closed-form double towers of real levels (quasi-parity
// q = +1 / -1) and unnormalized eigenfunctions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/special_functions.hpp"

namespace ptsusy {

enum class Family { oscillator, poschl_teller, scarf };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::oscillator: return "oscillator";
        case Family::poschl_teller: return "poschl-teller";
        case Family::scarf: return "scarf";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
    if (s == "oscillator" || s == "osc") return Family::oscillator;
    if (s == "poschl-teller" || s == "poschl_teller" || s == "pt") return Family::poschl_teller;
    if (s == "scarf" || s == "scarf2" || s == "scarf-ii") return Family::scarf;
    return std::nullopt;
}

struct OscillatorParams {
    double alpha;
    double delta;
};

struct PoschlTellerParams {
    double A;
    double B;
    double gamma;
};

struct ScarfParams {
    double A;
    double B;
};

/// One family's parameter record. `limiting` opts into integer ties
/// (alpha integer, B - A - 1/2 integer, A - B + 1/2 integer).
struct PotentialParams {
    std::variant<OscillatorParams, PoschlTellerParams, ScarfParams> values;
    bool limiting = false;

    static PotentialParams oscillator(double alpha, double delta, bool limiting = false) {
        return {OscillatorParams{alpha, delta}, limiting};
    }
    static PotentialParams poschl_teller(double A, double B, double gamma, bool limiting = false) {
        return {PoschlTellerParams{A, B, gamma}, limiting};
    }
    static PotentialParams scarf(double A, double B, bool limiting = false) {
        return {ScarfParams{A, B}, limiting};
    }

    Family family() const noexcept { return static_cast<Family>(values.index()); }

    template <class P>
    const P& as() const {
        if (const auto* p = std::get_if<P>(&values)) return *p;
        throw ContractError("parameter record belongs to family " + std::string(to_string(family())));
    }
};

enum class QuasiParity : int { even = +1, odd = -1 };

inline int sign(QuasiParity q) noexcept { return static_cast<int>(q); }
inline QuasiParity flip(QuasiParity q) noexcept { return q == QuasiParity::even ? QuasiParity::odd : QuasiParity::even; }
inline char symbol(QuasiParity q) noexcept { return q == QuasiParity::even ? '+' : '-'; }

struct LevelIndex {
    QuasiParity q;
    int n;

    friend bool operator==(const LevelIndex&, const LevelIndex&) = default;
};

namespace detail {

inline bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Largest integer n with n < x (the bracket x - 1 <= n < x); -1 when none is >= 0.
inline int bracket_top(double x) { return std::max(-1, static_cast<int>(std::ceil(x - 1e-12)) - 1); }

}  // namespace detail

/// First violated invariant, or nullopt when the record is valid.
inline std::optional<std::string> validation_failure(const PotentialParams& p) {
    using detail::fmt;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        if (!(o->alpha > 0.0)) return "alpha must be > 0 (alpha = " + fmt(o->alpha) + ")";
        if (!(o->delta > 0.0)) return "delta must be > 0 (delta = " + fmt(o->delta) + ")";
        if (!p.limiting && detail::near_integer(o->alpha))
            return "alpha integer (alpha = " + fmt(o->alpha) + "); enable limiting mode for integer ties";
        return std::nullopt;
    }
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        if (!(t->A + 0.5 > 0.0)) return "A + 1/2 must be > 0 (A = " + fmt(t->A) + ")";
        if (!(t->B > t->A + 0.5))
            return "B must exceed A + 1/2 (B = " + fmt(t->B) + ", A + 1/2 = " + fmt(t->A + 0.5) + ")";
        const double quarter = std::numbers::pi / 4.0;
        if (!((t->gamma >= -quarter && t->gamma < 0.0) || (t->gamma > 0.0 && t->gamma < quarter)))
            return "gamma must lie in [-pi/4, 0) or (0, pi/4) (gamma = " + fmt(t->gamma) + ")";
        if (!p.limiting && detail::near_integer(t->B - t->A - 0.5))
            return "B - (A + 1/2) integer (= " + fmt(t->B - t->A - 0.5) + "); enable limiting mode for integer ties";
        return std::nullopt;
    }
    const auto& s = std::get<ScarfParams>(p.values);
    if (!(s.B - 0.5 > 0.0)) return "B - 1/2 must be > 0 (B = " + fmt(s.B) + ")";
    if (!(s.A > s.B - 0.5))
        return "A must exceed B - 1/2 (A = " + fmt(s.A) + ", B - 1/2 = " + fmt(s.B - 0.5) + ")";
    if (!p.limiting && detail::near_integer(s.A - s.B + 0.5))
        return "A - B + 1/2 integer (= " + fmt(s.A - s.B + 0.5) + "); enable limiting mode for integer ties";
    return std::nullopt;
}

/// Returns the record unchanged if every family invariant holds; otherwise
/// throws DomainError naming the first violated invariant.
inline const PotentialParams& validate(const PotentialParams& p) {
    if (auto why = validation_failure(p))
        throw DomainError(std::string(to_string(p.family())) + ": " + *why);
    return p;
}

/// V(x) on the real line. Pure formula; callers are expected to pass valid params.
inline Complex potential_value(const PotentialParams& p, double x) {
    using special::complex_hyperbolics;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        const Complex z{x, -o->delta};
        const Complex z2 = z * z;
        return z2 + (o->alpha * o->alpha - 0.25) / z2;
    }
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        const auto hy = complex_hyperbolics(Complex{x, -t->gamma});
        const Complex csch = hy.cosech();
        return (t->B * t->B + t->A * (t->A + 1.0)) * csch * csch - t->B * (2.0 * t->A + 1.0) * csch * hy.coth();
    }
    const auto& s = std::get<ScarfParams>(p.values);
    const double sech = 1.0 / std::cosh(x);
    const double tanh = std::tanh(x);
    return Complex{-(s.B * s.B + s.A * (s.A + 1.0)) * sech * sech, s.B * (2.0 * s.A + 1.0) * sech * tanh};
}

/// Top index of the q-tower: nullopt for the (infinite) oscillator towers,
/// otherwise the integer in the half-open bracket; -1 marks an empty tower,
/// which only happens for shifted parameter sets.
inline std::optional<int> n_max(const PotentialParams& p, QuasiParity q) {
    if (p.family() == Family::oscillator) return std::nullopt;
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values))
        return q == QuasiParity::even ? detail::bracket_top(t->B - 0.5) : detail::bracket_top(t->A);
    const auto& s = std::get<ScarfParams>(p.values);
    return q == QuasiParity::even ? detail::bracket_top(s.A) : detail::bracket_top(s.B - 0.5);
}

inline void require_level(const PotentialParams& p, const LevelIndex& level) {
    if (level.n < 0) throw ContractError("negative level index n=" + std::to_string(level.n));
    if (auto top = n_max(p, level.q); top && level.n > *top) throw LevelRangeError(level.n, *top);
}

/// Closed-form energy of a level. Always exactly real.
inline double energy(const PotentialParams& p, const LevelIndex& level) {
    require_level(p, level);
    const double n = level.n;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) return 4.0 * n + 2.0 - 2.0 * sign(level.q) * o->alpha;
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        const double k = level.q == QuasiParity::even ? t->B - 0.5 - n : t->A - n;
        return -k * k;
    }
    const auto& s = std::get<ScarfParams>(p.values);
    const double k = level.q == QuasiParity::even ? s.A - n : s.B - 0.5 - n;
    return -k * k;
}

/// All levels of one tower, truncated to `limit` entries for infinite towers.
inline std::vector<LevelIndex> tower(const PotentialParams& p, QuasiParity q, int limit) {
    std::vector<LevelIndex> out;
    const auto top = n_max(p, q);
    const int last = top ? *top : limit - 1;
    for (int n = 0; n <= last; ++n) out.push_back({q, n});
    return out;
}

/// Unnormalized eigenfunction value and first derivative at x.
struct EigenfunctionSample {
    Complex value;
    Complex derivative;
};

/// psi_{qn}(x) with the proportionality constant fixed to 1, and its
/// analytic x-derivative (Laguerre/Jacobi derivative identities).
inline EigenfunctionSample eigenfunction_sample(const PotentialParams& p, const LevelIndex& level, double x) {
    using special::jacobi;
    using special::jacobi_derivative;
    using special::principal_power;
    require_level(p, level);
    const int n = level.n;

    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        // z = x - i delta stays in the open lower half plane, away from the principal cut.
        if (!(o->delta > 0.0)) throw DomainError("oscillator eigenfunction needs delta > 0 to avoid the branch cut");
        const double order = -sign(level.q) * o->alpha;
        const double s = order + 0.5;
        const Complex z{x, -o->delta};
        const Complex z2 = z * z;
        const Complex front = std::exp(-0.5 * z2) * principal_power(z, s);
        const Complex lag = special::laguerre(n, order, z2);
        const Complex dlag = special::laguerre_derivative(n, order, z2);
        return {front * lag, front * ((-z + s / z) * lag + 2.0 * z * dlag)};
    }

    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        // (y-1)^s (y+1)^t with y = cosh tau, written as 2^{s+t} sinh(tau/2)^{2s} cosh(tau/2)^{2t}:
        // sinh(tau/2) keeps a fixed-sign imaginary part and cosh(tau/2) a positive real part
        // on the real line, so neither crosses the principal cut while y - 1 does (at x = 0).
        const bool even = level.q == QuasiParity::even;
        const double s = even ? (t->A - t->B + 1.0) / 2.0 : (t->B - t->A) / 2.0;
        const double u = -(t->A + t->B) / 2.0;
        const double ja = even ? t->A - t->B + 0.5 : t->B - t->A - 0.5;
        const double jb = -t->A - t->B - 0.5;
        const Complex tau{x, -t->gamma};
        const auto half = special::complex_hyperbolics(tau / 2.0);
        const auto full = special::complex_hyperbolics(tau);
        const Complex y = full.cosh;
        const Complex front = std::pow(2.0, s + u) * principal_power(half.sinh, 2.0 * s) * principal_power(half.cosh, 2.0 * u);
        const Complex log_slope = s * half.cosh / half.sinh + u * half.sinh / half.cosh;
        const Complex P = jacobi(n, ja, jb, y);
        const Complex dP = jacobi_derivative(n, ja, jb, y);
        return {front * P, front * (log_slope * P + full.sinh * dP)};
    }

    const auto& sc = std::get<ScarfParams>(p.values);
    const bool even = level.q == QuasiParity::even;
    const double power = even ? sc.A : sc.B - 0.5;
    const double phase = even ? sc.B : sc.A + 0.5;
    const double ja = even ? -sc.A + sc.B - 0.5 : sc.A - sc.B + 0.5;
    const double jb = -sc.A - sc.B - 0.5;
    const double sech = 1.0 / std::cosh(x);
    const Complex y{0.0, std::sinh(x)};
    const Complex front = std::pow(sech, power) * std::exp(Complex{0.0, -phase * std::atan(std::sinh(x))});
    const Complex P = jacobi(n, ja, jb, y);
    const Complex dP = jacobi_derivative(n, ja, jb, y);
    const Complex log_slope{-power * std::tanh(x), -phase * sech};
    return {front * P, front * (log_slope * P + Complex{0.0, std::cosh(x)} * dP)};
}

inline Complex eigenfunction(const PotentialParams& p, const LevelIndex& level, double x) {
    return eigenfunction_sample(p, level, x).value;
}

/// max over the points of |conj(V(-x)) - V(x)|. The point set must be
/// symmetric about the origin.
inline double verify_pt_symmetry(const PotentialParams& p, std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double a = sorted[i];
        const double b = sorted[m - 1 - i];
        if (std::abs(a + b) > 1e-12 * std::max(1.0, std::abs(a)))
            throw ContractError("verify_pt_symmetry: grid is not symmetric about 0 (" + detail::fmt(a) + " has no mirror)");
    }
    double worst = 0.0;
    for (double x : sorted) worst = std::max(worst, std::abs(std::conj(potential_value(p, -x)) - potential_value(p, x)));
    return worst;
}

inline double verify_pt_symmetry(const PotentialParams& p, const numerics::Grid& grid) {
    const auto xs = grid.points();
    return verify_pt_symmetry(p, xs);
}

/// Parameter record with the named parameters shifted (alpha for the
/// oscillator; A and B for the two hyperbolic families).
struct ParamShift {
    double d_alpha = 0.0;
    double d_A = 0.0;
    double d_B = 0.0;

    friend bool operator==(const ParamShift&, const ParamShift&) = default;
};

inline PotentialParams shifted(const PotentialParams& p, const ParamShift& d) {
    PotentialParams out = p;
    if (auto* o = std::get_if<OscillatorParams>(&out.values)) {
        o->alpha += d.d_alpha;
    } else if (auto* t = std::get_if<PoschlTellerParams>(&out.values)) {
        t->A += d.d_A;
        t->B += d.d_B;
    } else {
        auto& s = std::get<ScarfParams>(out.values);
        s.A += d.d_A;
        s.B += d.d_B;
    }
    return out;
}

/// The partner labelling (A + 1/2, B) -> (B, A + 1/2) under which the
/// Poschl-Teller and Scarf potentials are invariant. Identity for the oscillator.
inline PotentialParams exchanged(const PotentialParams& p) {
    PotentialParams out = p;
    if (auto* t = std::get_if<PoschlTellerParams>(&out.values)) {
        const double A = t->A;
        t->A = t->B - 0.5;
        t->B = A + 0.5;
    } else if (auto* s = std::get_if<ScarfParams>(&out.values)) {
        const double A = s->A;
        s->A = s->B - 0.5;
        s->B = A + 0.5;
    }
    return out;
}

/// Human-readable parameter list, e.g. "alpha=2.5, delta=1".
inline std::string describe(const PotentialParams& p) {
    using detail::fmt;
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) return "alpha=" + fmt(o->alpha) + ", delta=" + fmt(o->delta);
    if (const auto* t = std::get_if<PoschlTellerParams>(&p.values))
        return "A=" + fmt(t->A) + ", B=" + fmt(t->B) + ", gamma=" + fmt(t->gamma);
    const auto& s = std::get<ScarfParams>(p.values);
    return "A=" + fmt(s.A) + ", B=" + fmt(s.B);
}

}  // namespace ptsusy
