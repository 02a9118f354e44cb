#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "ptsusy/numerics/finite_difference.hpp"
#include "ptsusy/numerics/spectrum.hpp"
#include "ptsusy/potentials.hpp"

using namespace ptsusy;
using numerics::Grid;
using numerics::StencilAccuracy;

namespace {

const auto osc075 = PotentialParams::oscillator(0.75, 1.0);
const auto pt = PotentialParams::poschl_teller(1.2, 3.9, 0.3);
const auto scarf = PotentialParams::scarf(2.3, 1.4);

std::string failure(const PotentialParams& p) { return validation_failure(p).value_or(""); }

// max |(-D2 + V) psi - E psi| / max |psi| over the central 90% of the grid.
double eigen_residual(const PotentialParams& p, const LevelIndex& lv, const Grid& g,
                      StencilAccuracy acc = StencilAccuracy::fourth) {
    const auto psi = g.sample([&](double x) { return eigenfunction(p, lv, x); });
    const auto d2 = numerics::fd_derivative(g, psi, 2, acc);
    const double e = energy(p, lv);
    const auto [first, last] = g.interior(0.05);
    double worst = 0.0;
    for (int i = first; i < last; ++i) {
        const auto k = static_cast<std::size_t>(i);
        worst = std::max(worst, std::abs(-d2[k] + (potential_value(p, g.x(i)) - e) * psi[k]));
    }
    return worst / numerics::max_abs(psi, first, last);
}

}  // namespace

TEST(Validate, AcceptsPaperParameterSets) {
    EXPECT_NO_THROW(validate(osc075));
    EXPECT_NO_THROW(validate(pt));
    EXPECT_NO_THROW(validate(scarf));
}

TEST(Validate, EachInvariantHasItsOwnDiagnostic) {
    EXPECT_NE(failure(PotentialParams::oscillator(2.0, 1.0)).find("alpha integer"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::oscillator(-0.5, 1.0)).find("alpha must be > 0"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::oscillator(0.5, 0.0)).find("delta must be > 0"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::poschl_teller(1.2, 1.5, 0.3)).find("B must exceed A + 1/2"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::poschl_teller(-0.7, 1.5, 0.3)).find("A + 1/2 must be > 0"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::poschl_teller(1.2, 3.7, 0.3)).find("integer"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::poschl_teller(1.2, 3.9, 0.0)).find("gamma"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::scarf(2.3, 0.4)).find("B - 1/2 must be > 0"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::scarf(0.5, 1.4)).find("A must exceed B - 1/2"), std::string::npos);
    EXPECT_NE(failure(PotentialParams::scarf(2.1, 1.6)).find("integer"), std::string::npos);
    EXPECT_THROW(validate(PotentialParams::oscillator(2.0, 1.0)), DomainError);
}

TEST(Validate, LimitingModeAdmitsIntegerTies) {
    EXPECT_NO_THROW(validate(PotentialParams::oscillator(2.0, 1.0, true)));
    EXPECT_NO_THROW(validate(PotentialParams::poschl_teller(1.2, 3.7, 0.3, true)));
    EXPECT_NO_THROW(validate(PotentialParams::scarf(2.1, 1.6, true)));
}

TEST(Validate, GammaRangeIsClosedBelowAndOpenAbove) {
    const double q = std::numbers::pi / 4;
    EXPECT_NO_THROW(validate(PotentialParams::poschl_teller(1.2, 3.9, -q)));
    EXPECT_THROW(validate(PotentialParams::poschl_teller(1.2, 3.9, q)), DomainError);
    EXPECT_NO_THROW(validate(PotentialParams::poschl_teller(1.2, 3.9, std::nextafter(q, 0.0))));
}

TEST(PotentialValue, HandEvaluatedPoints) {
    const Complex v1 = potential_value(PotentialParams::oscillator(0.5, 1.0), 0.0);
    EXPECT_NEAR(v1.real(), -1.0, 1e-15);
    EXPECT_NEAR(v1.imag(), 0.0, 1e-15);
    const Complex v2 = potential_value(osc075, 0.0);
    EXPECT_NEAR(v2.real(), -1.3125, 1e-15);
    EXPECT_NEAR(v2.imag(), 0.0, 1e-15);
    const Complex v3 = potential_value(scarf, 0.0);
    EXPECT_NEAR(v3.real(), -9.55, 1e-14);
    EXPECT_EQ(v3.imag(), 0.0);
}

TEST(PotentialValue, PoschlTellerAgainstDirectFormula) {
    for (double x : {-2.0, -0.3, 0.0, 0.7, 4.0}) {
        const Complex tau{x, -0.3};
        const Complex csch = 1.0 / std::sinh(tau);
        const Complex want = (3.9 * 3.9 + 1.2 * 2.2) * csch * csch - 3.9 * 3.4 * csch * std::cosh(tau) / std::sinh(tau);
        EXPECT_LT(std::abs(potential_value(pt, x) - want), 1e-12 * std::abs(want));
    }
}

TEST(Energy, ClosedForms) {
    EXPECT_DOUBLE_EQ(energy(osc075, {QuasiParity::even, 0}), 0.5);
    EXPECT_DOUBLE_EQ(energy(osc075, {QuasiParity::odd, 0}), 3.5);
    EXPECT_NEAR(energy(scarf, {QuasiParity::odd, 0}), -0.81, 1e-14);
    EXPECT_NEAR(energy(pt, {QuasiParity::even, 0}), -11.56, 1e-13);
    EXPECT_NEAR(energy(pt, {QuasiParity::odd, 1}), -0.04, 1e-14);
}

TEST(Energy, LinearOscillatorLimitInterleaves) {
    const auto lin = PotentialParams::oscillator(0.5, 0.5);
    std::vector<double> e;
    for (const auto& lv : numerics::analytic_levels(lin, 5)) e.push_back(lv.energy);
    ASSERT_EQ(e.size(), 10u);
    for (int k = 0; k < 10; ++k) EXPECT_DOUBLE_EQ(e[static_cast<std::size_t>(k)], 2.0 * k + 1.0);
}

TEST(Energy, OutOfRangeCarriesTop) {
    try {
        energy(pt, {QuasiParity::odd, 2});
        FAIL() << "expected LevelRangeError";
    } catch (const LevelRangeError& e) {
        EXPECT_EQ(e.n_max(), 1);
        EXPECT_EQ(e.n(), 2);
    }
}

TEST(NMax, Brackets) {
    EXPECT_EQ(n_max(pt, QuasiParity::even), 3);
    EXPECT_EQ(n_max(pt, QuasiParity::odd), 1);
    EXPECT_EQ(n_max(scarf, QuasiParity::even), 2);
    EXPECT_EQ(n_max(scarf, QuasiParity::odd), 0);
    EXPECT_FALSE(n_max(osc075, QuasiParity::even).has_value());
}

TEST(NMax, TowerLengthIsTopPlusOne) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double A = u(rng), B = A + 0.5 + u(rng);
        const auto p = PotentialParams::poschl_teller(A, B, 0.3, true);
        const auto s = PotentialParams::scarf(B, A + 0.5, true);
        for (auto q : {QuasiParity::even, QuasiParity::odd}) {
            EXPECT_EQ(static_cast<int>(tower(p, q, 100).size()), *n_max(p, q) + 1);
            EXPECT_EQ(static_cast<int>(tower(s, q, 100).size()), *n_max(s, q) + 1);
            // every level in the tower is bound
            for (const auto& lv : tower(p, q, 100)) EXPECT_LT(energy(p, lv), 0.0);
        }
    }
}

TEST(Eigenfunction, HandEvaluatedPoints) {
    const Complex want = std::exp(0.5) * std::exp(-0.25 * std::log(Complex{0.0, -1.0}));
    EXPECT_LT(std::abs(eigenfunction(osc075, {QuasiParity::even, 0}, 0.0) - want), 1e-14);
    EXPECT_LT(std::abs(eigenfunction(scarf, {QuasiParity::even, 0}, 0.0) - 1.0), 1e-15);
}

TEST(Eigenfunction, RejectsLevelsPastTheTop) {
    EXPECT_THROW(eigenfunction(scarf, {QuasiParity::odd, 1}, 0.0), LevelRangeError);
}

TEST(Eigenfunction, AnalyticDerivativeMatchesDifferenceQuotient) {
    const double h = 1e-5;
    for (const auto& p : {osc075, pt, scarf})
        for (auto q : {QuasiParity::even, QuasiParity::odd})
            for (const auto& lv : tower(p, q, 3))
                for (double x : {-1.7, -0.2, 0.0, 0.4, 2.3}) {
                    const Complex fd = (eigenfunction(p, lv, x + h) - eigenfunction(p, lv, x - h)) / (2 * h);
                    const Complex an = eigenfunction_sample(p, lv, x).derivative;
                    EXPECT_LT(std::abs(an - fd), 1e-6 * std::max(1.0, std::abs(an))) << describe(p) << " x=" << x;
                }
}

TEST(Eigenfunction, SolvesTheEigenEquationAtPaperParameters) {
    for (const auto& p : {osc075, scarf}) {
        const Grid g = Grid::with_spacing(12.0, 0.005);
        for (auto q : {QuasiParity::even, QuasiParity::odd})
            for (const auto& lv : tower(p, q, 6)) {
                EXPECT_LT(eigen_residual(p, lv, g), 1e-6) << describe(p) << ' ' << symbol(q) << lv.n;
            }
    }
}

TEST(Eigenfunction, PoschlTellerNeedsAFinerGridForTheSameBound) {
    // The eigenfunctions vary on the scale gamma = 0.3 near x = 0; at h = 0.005
    // the fourth-order truncation error is ~3e-5, and 1e-6 is reached at h = 0.002.
    const Grid g = Grid::with_spacing(12.0, 0.002);
    for (auto q : {QuasiParity::even, QuasiParity::odd})
        for (const auto& lv : tower(pt, q, 6)) EXPECT_LT(eigen_residual(pt, lv, g), 1e-6) << symbol(q) << lv.n;
}

TEST(Eigenfunction, ResidualConvergesAtStencilOrder) {
    const LevelIndex lv{QuasiParity::even, 1};
    const double c4 = eigen_residual(pt, lv, Grid::with_spacing(12.0, 0.01));
    const double f4 = eigen_residual(pt, lv, Grid::with_spacing(12.0, 0.005));
    EXPECT_GT(c4 / f4, 12.0);
    EXPECT_LT(c4 / f4, 20.0);
    const double c2 = eigen_residual(pt, lv, Grid::with_spacing(12.0, 0.01), StencilAccuracy::second);
    const double f2 = eigen_residual(pt, lv, Grid::with_spacing(12.0, 0.005), StencilAccuracy::second);
    EXPECT_GT(c2 / f2, 3.5);
    EXPECT_LT(c2 / f2, 4.5);
}

TEST(Eigenfunction, SolvesTheEigenEquationAtRandomParameters) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto off_integer = [](double v) { return std::abs(v - std::round(v)) > 0.05; };
    int checked = 0;
    while (checked < 9) {
        PotentialParams p;
        switch (checked % 3) {
            case 0: {
                const double a = 0.2 + 3.0 * u(rng);
                if (!off_integer(a)) continue;
                p = PotentialParams::oscillator(a, 0.4 + 1.5 * u(rng));
                break;
            }
            case 1: {
                const double A = 0.1 + 2.0 * u(rng), B = A + 0.6 + 2.5 * u(rng);
                if (!off_integer(B - A - 0.5)) continue;
                p = PotentialParams::poschl_teller(A, B, (u(rng) < 0.5 ? -1 : 1) * (0.25 + 0.5 * u(rng)));
                break;
            }
            default: {
                const double B = 0.7 + 2.0 * u(rng), A = B - 0.3 + 2.5 * u(rng);
                if (!off_integer(A - B + 0.5)) continue;
                p = PotentialParams::scarf(A, B);
            }
        }
        validate(p);
        const Grid coarse = Grid::with_spacing(12.0, 0.01);
        const Grid fine = Grid::with_spacing(12.0, 0.005);
        for (auto q : {QuasiParity::even, QuasiParity::odd})
            for (const auto& lv : tower(p, q, 6)) {
                if (lv.n > 5) break;
                const double rc = eigen_residual(p, lv, coarse);
                const double rf = eigen_residual(p, lv, fine);
                EXPECT_LT(rf, 1e-4) << describe(p) << ' ' << symbol(q) << lv.n;
                // Order check only above the roundoff floor.
                if (rc > 1e-7) {
                    EXPECT_GT(rc / rf, 12.0) << describe(p) << ' ' << symbol(q) << lv.n;
                    EXPECT_LT(rc / rf, 20.0) << describe(p) << ' ' << symbol(q) << lv.n;
                }
            }
        ++checked;
    }
}

TEST(PtSymmetry, HoldsOnSymmetricGrids) {
    const Grid g(8.0, 401);
    EXPECT_LT(verify_pt_symmetry(osc075, g), 1e-12);
    EXPECT_LT(verify_pt_symmetry(pt, g), 1e-12);
    EXPECT_LT(verify_pt_symmetry(scarf, g), 1e-12);
}

TEST(PtSymmetry, AsymmetricGridIsRejected) {
    const std::vector<double> xs{-1.0, 0.0, 0.5};
    EXPECT_THROW(verify_pt_symmetry(osc075, xs), ContractError);
}

TEST(ExchangeSymmetry, PotentialIsInvariant) {
    for (const auto& p : {pt, scarf}) {
        const auto q = exchanged(p);
        for (double x = -6.0; x <= 6.0; x += 0.37)
            EXPECT_LT(std::abs(potential_value(p, x) - potential_value(q, x)), 1e-12 * std::max(1.0, std::abs(potential_value(p, x))));
    }
}

TEST(Params, ParseAndDescribe) {
    EXPECT_EQ(parse_family("scarf"), Family::scarf);
    EXPECT_EQ(parse_family("poschl-teller"), Family::poschl_teller);
    EXPECT_FALSE(parse_family("morse").has_value());
    EXPECT_EQ(describe(scarf), "A=2.3, B=1.4");
}
