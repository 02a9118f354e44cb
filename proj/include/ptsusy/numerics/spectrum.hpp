#pragma once

// Numerical spectra of the three families and matching against the
// closed-form towers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ptsusy/numerics/eigensolver.hpp"
#include "ptsusy/numerics/hamiltonian.hpp"
#include "ptsusy/potentials.hpp"

namespace ptsusy::numerics {

struct AnalyticLevel {
    LevelIndex level;
    double energy;
};

struct MatchedPair {
    LevelIndex level;
    double analytic;
    Complex discrete;
    std::size_t eig_index;  // position in EigenResult::eigenvalues
};

struct MatchReport {
    std::vector<MatchedPair> pairs;  // in analytic-list order
    double max_abs_delta = 0.0;
    double max_abs_imag = 0.0;
    std::vector<LevelIndex> unmatched;
    int spurious = 0;    // eigenpairs rejected by the imaginary-part or boundary-mass filter
    int candidates = 0;  // eigenpairs that passed both filters

    bool all_matched() const { return unmatched.empty(); }
};

struct MatchOptions {
    double im_tol = 1e-5;
    double boundary_fraction = 0.1;
    double boundary_mass = 1e-6;
};

/// Fraction of |v|^2 carried by the outer `fraction` of points at each end.
inline double boundary_mass(const GridFunction& v, double fraction) {
    const int n = static_cast<int>(v.size());
    const int skip = static_cast<int>(std::ceil(fraction * n));
    double outer = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = std::norm(v[static_cast<std::size_t>(i)]);
        total += m;
        if (i < skip || i >= n - skip) outer += m;
    }
    return total > 0.0 ? outer / total : 1.0;
}

/// Default imaginary-part threshold: 1e-5 scaled by h^2 max|V| when that exceeds 1.
inline double default_im_tol(const Grid& grid, const GridFunction& v_samples) {
    const double h = grid.spacing();
    return 1e-5 * std::max(1.0, h * h * max_abs(v_samples));
}

/// Greedy injective nearest-distance matching of analytic levels below
/// `energy_cutoff` to the filtered discrete eigenvalues. Ties go to the
/// analytic level listed first.
inline MatchReport match_spectrum(const EigenResult& eig, const std::vector<AnalyticLevel>& analytic,
                                  double energy_cutoff, const Grid& grid, const MatchOptions& opt = {}) {
    if (!eig.eigenvectors) throw ContractError("match_spectrum: eigenvectors are required for the spurious filter");
    MatchReport report;
    std::vector<std::size_t> cand;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        const auto& v = (*eig.eigenvectors)[k];
        if (v.empty() || !eig.converged[k]) continue;
        require_on_grid(grid, v, "match_spectrum");
        if (std::abs(eig.eigenvalues[k].imag()) < opt.im_tol &&
            boundary_mass(v, opt.boundary_fraction) < opt.boundary_mass)
            cand.push_back(k);
        else
            ++report.spurious;
    }
    report.candidates = static_cast<int>(cand.size());

    std::vector<std::size_t> levels;
    for (std::size_t a = 0; a < analytic.size(); ++a)
        if (analytic[a].energy <= energy_cutoff) levels.push_back(a);

    struct Edge {
        double dist;
        std::size_t a;
        std::size_t k;
    };
    std::vector<Edge> edges;
    for (auto a : levels)
        for (auto k : cand) edges.push_back({std::abs(eig.eigenvalues[k] - analytic[a].energy), a, k});
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& x, const Edge& y) { return x.dist != y.dist ? x.dist < y.dist : x.a < y.a; });

    std::vector<long> match_of(analytic.size(), -1);
    std::vector<bool> used(eig.eigenvalues.size(), false);
    for (const auto& e : edges) {
        if (match_of[e.a] >= 0 || used[e.k]) continue;
        match_of[e.a] = static_cast<long>(e.k);
        used[e.k] = true;
    }
    for (auto a : levels) {
        if (match_of[a] < 0) {
            report.unmatched.push_back(analytic[a].level);
            continue;
        }
        const auto k = static_cast<std::size_t>(match_of[a]);
        const Complex z = eig.eigenvalues[k];
        report.pairs.push_back({analytic[a].level, analytic[a].energy, z, k});
        report.max_abs_delta = std::max(report.max_abs_delta, std::abs(z.real() - analytic[a].energy));
        report.max_abs_imag = std::max(report.max_abs_imag, std::abs(z.imag()));
    }
    return report;
}

/// |<a, b>| / (|a| |b|) with the Hermitian inner product.
inline double overlap(const GridFunction& a, const GridFunction& b) {
    require_same_size(a, b, "overlap");
    Complex dot{};
    for (std::size_t i = 0; i < a.size(); ++i) dot += std::conj(a[i]) * b[i];
    const double na = norm2(a);
    const double nb = norm2(b);
    return na > 0.0 && nb > 0.0 ? std::abs(dot) / (na * nb) : 0.0;
}

/// Analytic bound levels of a family (the first `limit` of each infinite
/// tower), ordered by energy.
inline std::vector<AnalyticLevel> analytic_levels(const PotentialParams& p, int limit) {
    std::vector<AnalyticLevel> out;
    for (auto q : {QuasiParity::even, QuasiParity::odd})
        for (const auto& lv : tower(p, q, limit)) out.push_back({lv, energy(p, lv)});
    std::stable_sort(out.begin(), out.end(), [](const AnalyticLevel& a, const AnalyticLevel& b) { return a.energy < b.energy; });
    return out;
}

/// Box half-width for a family. Oscillator: 10 + delta. Hyperbolic families:
/// wide enough that the shallowest bound level, decaying like exp(-kappa |x|),
/// leaves no measurable mass in the outer tenth of the box (kappa L >= 11), and at least 12.
inline double default_half_width(const PotentialParams& p) {
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) return 10.0 + o->delta;
    double kappa = std::numeric_limits<double>::infinity();
    for (const auto& lv : analytic_levels(p, 0)) kappa = std::min(kappa, std::sqrt(std::max(0.0, -lv.energy)));
    if (!std::isfinite(kappa) || kappa <= 0.0) return 12.0;
    return std::max(12.0, 11.0 / kappa);
}

struct FamilySolve {
    Grid grid;
    EigenResult eig;
    MatchReport report;
};

/// Discretize a family's Hamiltonian, solve, attach eigenvectors for the
/// eigenvalues near or below the cutoff, and match.
inline FamilySolve solve_and_match(const PotentialParams& p, const Grid& grid, int order, double energy_cutoff,
                                   int tower_limit, std::optional<double> im_tol = std::nullopt) {
    const auto V = [&](double x) { return potential_value(p, x); };
    const BandMatrix m = discretize_hamiltonian(V, grid, order);
    const double window = 1.0 + 0.1 * std::abs(energy_cutoff);
    EigenResult eig = eig_hamiltonian(m);
    eig = with_eigenvectors(m, eig, [&](Complex z) { return z.real() <= energy_cutoff + window; });
    MatchOptions opt;
    opt.im_tol = im_tol ? *im_tol : default_im_tol(grid, grid.sample(V));
    auto report = match_spectrum(eig, analytic_levels(p, tower_limit), energy_cutoff, grid, opt);
    return {grid, std::move(eig), std::move(report)};
}

}  // namespace ptsusy::numerics
