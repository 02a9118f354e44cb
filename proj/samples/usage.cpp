// Minimal library tour: analytic levels, a PSUSY spectrum and a numerical match.

#include <cstdio>

#include "ptsusy/ptsusy.hpp"

int main() {
    using namespace ptsusy;

    const auto osc = PotentialParams::oscillator(2.5, 1.0);
    for (auto q : {QuasiParity::even, QuasiParity::odd})
        for (const auto& lv : tower(osc, q, 3)) std::printf("E(%c%d) = %g\n", symbol(q), lv.n, energy(osc, lv));

    const auto triplet = build_triplet(osc, Choice::first);
    for (const auto& e : triplet_spectrum(triplet, 6)) std::printf("PSUSY level %g, degeneracy %d\n", e.energy, e.degeneracy);

    const auto scarf = PotentialParams::scarf(2.3, 1.4);
    const auto grid = numerics::Grid::with_spacing(numerics::default_half_width(scarf), 0.04);
    const auto solve = numerics::solve_and_match(scarf, grid, 4, 0.0, 0);
    for (const auto& m : solve.report.pairs)
        std::printf("Scarf %c%d: analytic %g, discrete %.8f%+.1ei\n", symbol(m.level.q), m.level.n, m.analytic, m.discrete.real(),
                    m.discrete.imag());
    return solve.report.all_matched() ? 0 : 1;
}
