#include <algorithm>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "ptsusy/numerics/probe.hpp"
#include "ptsusy/susy.hpp"

using namespace ptsusy;
using numerics::GaussianProbe;
using numerics::Grid;

namespace {

const auto osc = PotentialParams::oscillator(0.75, 1.0);
const auto pt = PotentialParams::poschl_teller(1.2, 3.9, 0.3);
const auto scarf = PotentialParams::scarf(2.3, 1.4);

std::vector<SuperpotentialSpec> all_specs() {
    const auto osc25 = PotentialParams::oscillator(2.5, 1.0);
    return {{osc25, Variant::W},  {osc25, Variant::Wprime}, {osc25, Variant::Wpp}, {osc25, Variant::Wppp},
            {pt, Variant::W},     {pt, Variant::Wprime},    {scarf, Variant::W},   {scarf, Variant::Wprime}};
}

std::string name(const SuperpotentialSpec& s) { return std::string(to_string(s.variant)) + " " + describe(s.params); }

// Spectrum of H - E over the first k levels, optionally with one level removed.
std::vector<double> shifted_levels(const PotentialParams& p, double constant, double e, int k,
                                   std::optional<LevelIndex> drop = std::nullopt) {
    std::vector<double> out;
    for (auto q : {QuasiParity::even, QuasiParity::odd})
        for (const auto& lv : tower(p, q, k + 1))
            if (!drop || !(lv == *drop)) out.push_back(energy(p, lv) + constant - e);
    std::sort(out.begin(), out.end());
    if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
    return out;
}

}  // namespace

TEST(Superpotential, HandEvaluatedPoints) {
    const Complex w = superpotential_value({osc, Variant::W}, 0.0);
    EXPECT_NEAR(w.real(), 0.0, 1e-15);
    EXPECT_NEAR(w.imag(), -0.75, 1e-15);
    const Complex s = superpotential_value({scarf, Variant::W}, 0.0);
    EXPECT_NEAR(s.real(), 0.0, 1e-15);
    EXPECT_NEAR(s.imag(), 1.4, 1e-15);
}

TEST(Superpotential, FootnoteVariantsAreShiftedOriginals) {
    const auto up = PotentialParams::oscillator(1.75, 1.0);
    const auto down = PotentialParams::oscillator(-0.25, 1.0);  // formula only; never validated
    for (double x = -7.5; x <= 7.5; x += 0.25) {
        EXPECT_LT(std::abs(superpotential_value({osc, Variant::Wpp}, x) - superpotential_value({up, Variant::W}, x)), 1e-13);
        EXPECT_LT(std::abs(superpotential_value({osc, Variant::Wppp}, x) - superpotential_value({down, Variant::Wprime}, x)),
                  1e-13);
    }
}

TEST(Superpotential, AnalyticDerivativeMatchesDifferenceQuotient) {
    const double h = 1e-5;
    for (const auto& s : all_specs())
        for (double x : {-3.0, -0.4, 0.0, 0.9, 2.5}) {
            const Complex fd = (superpotential_value(s, x + h) - superpotential_value(s, x - h)) / (2 * h);
            const Complex an = superpotential_sample(s, x).derivative;
            EXPECT_LT(std::abs(an - fd), 1e-7 * std::max(1.0, std::abs(an))) << name(s) << " x=" << x;
        }
}

TEST(Superpotential, VariantFamilyMismatchIsRejected) {
    EXPECT_THROW(validate(SuperpotentialSpec{pt, Variant::Wpp}), DomainError);
    EXPECT_THROW(validate(SuperpotentialSpec{scarf, Variant::Wppp}), DomainError);
}

TEST(FactorizationEnergy, ClosedForms) {
    EXPECT_DOUBLE_EQ(factorization_energy({osc, Variant::W}), 0.5);
    EXPECT_DOUBLE_EQ(factorization_energy({osc, Variant::Wprime}), 3.5);
    EXPECT_DOUBLE_EQ(factorization_energy({osc, Variant::Wpp}), -1.5);
    EXPECT_DOUBLE_EQ(factorization_energy({osc, Variant::Wppp}), 1.5);
    EXPECT_NEAR(factorization_energy({pt, Variant::W}), -11.56, 1e-13);
    EXPECT_NEAR(factorization_energy({pt, Variant::Wprime}), -1.44, 1e-14);
    EXPECT_NEAR(factorization_energy({scarf, Variant::W}), -5.29, 1e-14);
    EXPECT_NEAR(factorization_energy({scarf, Variant::Wprime}), -0.81, 1e-14);
}

TEST(PartnerPotentials, DifferenceIsMinusTwiceTheSlope) {
    const double h = 1e-5;
    for (const auto& s : all_specs())
        for (double x : {-2.0, 0.0, 1.3}) {
            const auto v = partner_potentials(s, x);
            const Complex slope = (superpotential_value(s, x + h) - superpotential_value(s, x - h)) / (2 * h);
            EXPECT_LT(std::abs((v.plus - v.minus) + 2.0 * slope), 1e-6 * std::max(1.0, std::abs(slope))) << name(s);
        }
}

TEST(PartnerPotentials, OscillatorPartnersAreShiftedFamilyMembers) {
    const auto lower = PotentialParams::oscillator(-0.25, 1.0);  // (alpha - 1)^2 enters only squared
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        const auto v = partner_potentials({osc, Variant::W}, x);
        EXPECT_LT(std::abs(v.plus - potential_value(osc, x)), 1e-12);
        EXPECT_LT(std::abs(v.minus - (potential_value(lower, x) + 2.0)), 1e-12);
    }
}

TEST(PartnerMap, PaperDescriptors) {
    const Grid g(8.0, 401);
    const auto o = verify_partner_map({PotentialParams::oscillator(1.75, 1.0), Variant::W}, g);
    EXPECT_DOUBLE_EQ(o.minus.as<OscillatorParams>().alpha, 0.75);
    EXPECT_DOUBLE_EQ(o.map.minus_constant, 2.0);
    EXPECT_LT(o.deviation, 1e-12);

    const auto t = verify_partner_map({pt, Variant::W}, g);
    EXPECT_NEAR(t.minus.as<PoschlTellerParams>().B, 2.9, 1e-15);
    EXPECT_DOUBLE_EQ(t.minus.as<PoschlTellerParams>().A, 1.2);
    EXPECT_EQ(t.map.minus_constant, 0.0);
    EXPECT_LT(t.deviation, 1e-12);
}

TEST(PartnerMap, ShiftOutOfDomainIsReported) {
    const Grid g(8.0, 401);
    try {
        verify_partner_map({scarf, Variant::Wprime}, g);
        FAIL() << "expected a domain error";
    } catch (const DomainError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("shift leaves family domain"), std::string::npos);
        EXPECT_NE(what.find("B=0.4"), std::string::npos);
    }
    EXPECT_THROW(verify_partner_map({osc, Variant::W}, g), DomainError);  // alpha - 1 < 0
}

TEST(PartnerMap, EveryAdmissibleVariantMatches) {
    const Grid g(8.0, 401);
    const auto osc25 = PotentialParams::oscillator(2.5, 1.0);
    const std::vector<SuperpotentialSpec> ok{{osc25, Variant::W}, {osc25, Variant::Wprime}, {osc25, Variant::Wpp},
                                             {osc25, Variant::Wppp}, {pt, Variant::W},      {pt, Variant::Wprime},
                                             {scarf, Variant::W}};
    for (const auto& s : ok) EXPECT_LT(verify_partner_map(s, g).deviation, 1e-12) << name(s);
}

TEST(Factorization, PartnerSpectraAgreeExceptTheAnnihilatedLevel) {
    for (const auto& s : all_specs()) {
        const auto map = partner_map(s);
        const double e = factorization_energy(s);
        const int k = s.params.family() == Family::oscillator ? 12 : 20;
        const auto plus = shifted_levels(plus_params(s), map.plus_constant, e, k, annihilated_level(s));
        const auto minus = shifted_levels(minus_params(s), map.minus_constant, e, k);
        ASSERT_EQ(plus.size(), minus.size()) << name(s);
        for (std::size_t i = 0; i < plus.size(); ++i) EXPECT_NEAR(plus[i], minus[i], 1e-12) << name(s) << " i=" << i;
        // the removed level sits at zero
        EXPECT_NEAR(energy(plus_params(s), annihilated_level(s)) + map.plus_constant - e, 0.0, 1e-12) << name(s);
    }
}

TEST(Factorization, OscillatorPlusSpectrumIsFourNAndFourNPlusFourAlpha) {
    const SuperpotentialSpec s{osc, Variant::W};
    const double e = factorization_energy(s);
    for (int n = 0; n < 6; ++n) {
        EXPECT_NEAR(energy(osc, {QuasiParity::even, n}) - e, 4.0 * n, 1e-12);
        EXPECT_NEAR(energy(osc, {QuasiParity::odd, n}) - e, 4.0 * n + 3.0, 1e-12);
    }
}

TEST(ApplyA, DerivativeOnlyAndValueOnlySeams) {
    const Grid g(4.0, 64);
    const auto f = g.sample([](double x) { return Complex{std::sin(x), x}; });
    const auto fp = g.sample([](double x) { return Complex{std::cos(x), 1.0}; });
    const numerics::GridFunction zero(f.size());
    EXPECT_EQ(first_order_operator(zero, f, fp, +1.0), fp);

    const numerics::GridFunction one(f.size(), Complex{1.0});
    const auto a = apply_A({scarf, Variant::W}, g, one, zero);
    EXPECT_EQ(a, sample_superpotential({scarf, Variant::W}, g));
    const auto abar = apply_Abar({scarf, Variant::W}, g, f, fp);
    const auto w = sample_superpotential({scarf, Variant::W}, g);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(abar[i] - (-fp[i] + w[i] * f[i])), 1e-15);
}

TEST(ApplyA, GridMismatchIsAContractError) {
    const Grid g(4.0, 64);
    const numerics::GridFunction wrong(10);
    EXPECT_THROW(apply_A({osc, Variant::W}, g, wrong, wrong), ContractError);
}

TEST(ApplyA, FiniteDifferenceModeConverges) {
    const GaussianProbe probe{0.2, 0.9, 0.7, {1.0, 0.3}};
    const SuperpotentialSpec s{scarf, Variant::W};
    double prev = 0.0;
    for (double h : {0.02, 0.01}) {
        const Grid g = Grid::with_spacing(6.0, h);
        const auto an = apply_A(s, g, probe.sample(g), probe.sample(g, 1));
        const auto fd = apply_A(s, g, probe.sample(g));
        const double err = numerics::max_abs_difference(an, fd, 0, g.size());
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 3.5);
            EXPECT_LT(prev / err, 4.5);
        }
        prev = err;
    }
}

TEST(Annihilation, DesignatedStatesAreKilled) {
    const Grid g(8.0, 401);
    for (const auto& s : all_specs()) EXPECT_LT(annihilation_residual(s, annihilated_level(s), g), 1e-10) << name(s);
}

TEST(Annihilation, DesignatedLevels) {
    EXPECT_EQ(annihilated_level({osc, Variant::W}), (LevelIndex{QuasiParity::even, 0}));
    EXPECT_EQ(annihilated_level({osc, Variant::Wprime}), (LevelIndex{QuasiParity::odd, 0}));
    EXPECT_EQ(annihilated_level({scarf, Variant::Wprime}), (LevelIndex{QuasiParity::odd, 0}));
}

TEST(Annihilation, WrongLevelIsAContractError) {
    const Grid g(8.0, 401);
    EXPECT_THROW(annihilation_residual({osc, Variant::W}, {QuasiParity::odd, 0}, g), ContractError);
    EXPECT_THROW(annihilation_residual({pt, Variant::Wprime}, {QuasiParity::even, 0}, g), ContractError);
}

TEST(Annihilation, OtherStatesAreNotKilled) {
    // A_op maps excited states to nonzero partner states.
    const Grid g(8.0, 401);
    const SuperpotentialSpec s{osc, Variant::W};
    numerics::GridFunction psi(static_cast<std::size_t>(g.size())), dpsi(psi.size());
    for (int i = 0; i < g.size(); ++i) {
        const auto e = eigenfunction_sample(osc, {QuasiParity::even, 1}, g.x(i));
        psi[static_cast<std::size_t>(i)] = e.value;
        dpsi[static_cast<std::size_t>(i)] = e.derivative;
    }
    EXPECT_GT(numerics::max_abs(apply_A(s, g, psi, dpsi)) / numerics::max_abs(psi), 0.1);
}

TEST(Intertwining, ConvergesAtSecondOrderForRandomProbes) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uc(-2.0, 2.0), uw(0.6, 1.5), uk(0.0, 1.5), ut(0.0, 6.28);
    for (const auto& s : all_specs())
        for (int trial = 0; trial < 2; ++trial) {
            const GaussianProbe probe{uc(rng), uw(rng), uk(rng), std::polar(1.0, ut(rng))};
            double r[3];
            int k = 0;
            for (double h : {0.02, 0.01, 0.005}) {
                const Grid g = Grid::with_spacing(8.0, h);
                r[k++] = intertwining_residual(s, g, probe.sample(g));
            }
            EXPECT_GT(r[0] / r[1], 3.5) << name(s);
            EXPECT_LT(r[0] / r[1], 4.5) << name(s);
            EXPECT_GT(r[1] / r[2], 3.5) << name(s);
            EXPECT_LT(r[1] / r[2], 4.5) << name(s);
        }
}

TEST(Intertwining, ZeroFunctionGivesZero) {
    const Grid g = Grid::with_spacing(8.0, 0.01);
    const numerics::GridFunction zero(static_cast<std::size_t>(g.size()));
    for (const auto& s : all_specs()) EXPECT_EQ(intertwining_residual(s, g, zero), 0.0);
}
