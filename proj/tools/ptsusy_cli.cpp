// ptsusy: spectra, identity checks and data dumps for the PT-symmetric
// oscillator, Poschl-Teller and Scarf II families.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 invalid input.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptsusy/ptsusy.hpp"

namespace {

using namespace ptsusy;
using namespace ptsusy::numerics;
using nlohmann::json;

constexpr int exit_pass = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_invalid_input = 2;

// ------------------------------------------------------------ tolerances

struct ToleranceSpec {
    const char* key;
    double value;
    const char* meaning;
};

// verify runs on [-8, 8] with h = 0.0008 unless --half-width/--grid-n say otherwise.
const std::vector<ToleranceSpec> tolerance_table{
    {"pt-symmetry", 1e-12, "max |conj V(-x) - V(x)|"},
    {"partner-map", 1e-12, "max |V+- - (shifted family V + constant)|"},
    {"superpotential-forms", 1e-12, "max |W''(alpha) - W(alpha+1)|, |W'''(alpha) - W'(alpha-1)| (oscillator)"},
    {"annihilation", 1e-10, "max |A psi| / max |psi| for the annihilated state"},
    {"constraint", 1e-10, "max |W2^2 - W1^2 - W1' - W2' - c|"},
    {"psusy-algebra", 1e-5, "nilpotency and trilinear residuals, 4th-order stencils"},
    {"ssusy-consistency", 1e-12, "max |W from p - W of the triplet|; c must agree exactly"},
    {"factorization", 1e-8, "charges vs products of first-order operators, 4th-order outer layer"},
    {"quasi-hamiltonian", 1e-6, "K = H^2 - c^2/4 on both components, 4th-order stencils"},
    {"ratio-min", 3.5, "lower bound on the h-halving ratio of O(h^2) residuals"},
    {"ratio-max", 4.5, "upper bound on the h-halving ratio of O(h^2) residuals"},
    {"spectrum-delta", 5e-4, "max |Re E_discrete - E_analytic| (spectrum --numeric)"},
    {"spectrum-imag", 1e-5, "max |Im E_discrete| (spectrum --numeric)"},
};

std::string tolerance_help() {
    std::ostringstream os;
    os << "Default tolerances (override with --tol KEY=VALUE):\n";
    for (const auto& t : tolerance_table) {
        char line[200];
        std::snprintf(line, sizeof line, "  %-22s %-8.3g %s\n", t.key, t.value, t.meaning);
        os << line;
    }
    os << "Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input.\n";
    return os.str();
}

class Tolerances {
public:
    explicit Tolerances(const std::vector<std::string>& overrides) {
        for (const auto& t : tolerance_table) values_[t.key] = t.value;
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw DomainError("--tol expects KEY=VALUE, got '" + o + "'");
            const std::string key = o.substr(0, eq);
            if (!values_.count(key)) throw DomainError("unknown tolerance key '" + key + "'");
            const double v = io::parse_double(o.substr(eq + 1));
            if (!(v > 0.0)) throw DomainError("tolerance " + key + " must be positive");
            values_[key] = v;
        }
        if (values_["ratio-min"] >= values_["ratio-max"]) throw DomainError("ratio-min must be below ratio-max");
    }

    double operator[](const std::string& key) const { return values_.at(key); }

private:
    std::map<std::string, double> values_;
};

// ---------------------------------------------------------------- config

enum class Format { table, csv, json };

struct RunConfig {
    std::string family = "oscillator";
    std::optional<double> alpha, delta, A, B, gamma;
    bool limiting = false;
    std::string choice = "first";
    std::string format = "table";
    std::string output;
    std::optional<double> half_width;
    std::optional<int> grid_n;
    int order = 4;
    int levels = 5;
    unsigned threads = 0;
    std::vector<std::string> tol;
};

PotentialParams params_from(const RunConfig& c) {
    const auto fam = parse_family(c.family);
    if (!fam) throw DomainError("unknown family '" + c.family + "' (oscillator, poschl-teller, scarf)");
    auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) throw DomainError(std::string("missing ") + flag + " for family " + std::string(to_string(*fam)));
        return *v;
    };
    auto reject = [&](const std::optional<double>& v, const char* flag) {
        if (v) throw DomainError(std::string(flag) + " does not apply to family " + std::string(to_string(*fam)));
    };
    PotentialParams p;
    switch (*fam) {
        case Family::oscillator:
            reject(c.A, "--A");
            reject(c.B, "--B");
            reject(c.gamma, "--gamma");
            p = PotentialParams::oscillator(need(c.alpha, "--alpha"), need(c.delta, "--delta"), c.limiting);
            break;
        case Family::poschl_teller:
            reject(c.alpha, "--alpha");
            reject(c.delta, "--delta");
            p = PotentialParams::poschl_teller(need(c.A, "--A"), need(c.B, "--B"), need(c.gamma, "--gamma"), c.limiting);
            break;
        case Family::scarf:
            reject(c.alpha, "--alpha");
            reject(c.delta, "--delta");
            reject(c.gamma, "--gamma");
            p = PotentialParams::scarf(need(c.A, "--A"), need(c.B, "--B"), c.limiting);
            break;
    }
    return validate(p);
}

Choice choice_from(const RunConfig& c) {
    const auto ch = parse_choice(c.choice);
    if (!ch) throw DomainError("unknown choice '" + c.choice + "' (first, second)");
    return *ch;
}

Format format_from(const RunConfig& c) {
    if (c.format == "table") return Format::table;
    if (c.format == "csv") return Format::csv;
    if (c.format == "json") return Format::json;
    throw DomainError("unknown format '" + c.format + "' (table, csv, json)");
}

Grid grid_from(const RunConfig& c, double default_half_width, double default_spacing) {
    const double L = c.half_width.value_or(default_half_width);
    if (c.grid_n) return Grid(L, *c.grid_n);
    return Grid::with_spacing(L, default_spacing);
}

LevelIndex parse_level(const std::string& s) {
    if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) throw DomainError("level must look like +0 or -1, got '" + s + "'");
    const int n = io::parse_int(s.substr(1));
    if (n < 0) throw DomainError("level index must be >= 0, got '" + s + "'");
    return {s[0] == '+' ? QuasiParity::even : QuasiParity::odd, n};
}

std::string level_name(const LevelIndex& l) { return std::string(1, symbol(l.q)) + std::to_string(l.n); }

json grid_json(const Grid& g) { return {{"half_width", g.half_width()}, {"points", g.size()}, {"spacing", g.spacing()}}; }

// ---------------------------------------------------------------- output

std::string num(double v, const char* f = "%.10g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return num(v, "%.3e"); }

/// Aligned text table; also renders as RFC-4180 CSV.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void print(std::ostream& os) const {
        std::vector<std::size_t> w(header.size());
        for (std::size_t j = 0; j < header.size(); ++j) w[j] = header[j].size();
        for (const auto& r : rows)
            for (std::size_t j = 0; j < r.size(); ++j) w[j] = std::max(w[j], r[j].size());
        auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j) s += "  ";
                s += r[j] + std::string(w[j] - r[j].size(), ' ');
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            os << s << '\n';
        };
        line(header);
        std::vector<std::string> rule;
        for (auto n : w) rule.emplace_back(n, '-');
        line(rule);
        for (const auto& r : rows) line(r);
    }

    void csv(std::ostream& os) const {
        io::write_csv_row(os, header);
        for (const auto& r : rows) io::write_csv_row(os, r);
    }
};

/// The one place output is written; jobs hand their results back to it.
class Writer {
public:
    explicit Writer(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw DomainError("cannot open output file '" + path + "'");
    }

    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_side_file(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + path + "'");
    emit(f);
}

// ----------------------------------------------------------------- checks

struct CheckResult {
    std::string name;
    std::string subject;
    double measured = 0.0;
    double allowed_lo = 0.0;  // ratio checks only
    double allowed = 0.0;
    bool is_ratio = false;
    bool skipped = false;
    std::string note;

    bool passed() const {
        if (skipped) return true;
        if (!std::isfinite(measured)) return false;
        return is_ratio ? measured >= allowed_lo && measured <= allowed : measured <= allowed;
    }
    std::string status() const { return skipped ? "skip" : passed() ? "pass" : "FAIL"; }
    std::string allowed_text() const {
        if (skipped) return "-";
        return is_ratio ? "[" + num(allowed_lo, "%g") + ", " + num(allowed, "%g") + "]" : "<= " + num(allowed, "%g");
    }
};

CheckResult bound(std::string name, std::string subject, double measured, double allowed) {
    return {std::move(name), std::move(subject), measured, 0.0, allowed, false, false, {}};
}

CheckResult skipped(std::string name, std::string subject, std::string why) {
    CheckResult r{std::move(name), std::move(subject), NAN, 0.0, 0.0, false, true, std::move(why)};
    return r;
}

struct ConvergenceLine {
    std::string name;
    std::string subject;
    double h_coarse, h_fine, r_coarse, r_fine;
    int expected_order;

    double observed_order() const { return std::log(r_coarse / r_fine) / std::log(h_coarse / h_fine); }
    /// r_coarse / r_fine normalized to an exact halving of h.
    double halving_ratio() const { return std::pow(2.0, observed_order()); }
};

json to_json(const CheckResult& c) {
    json j{{"check", c.name}, {"subject", c.subject}, {"status", c.status()}};
    j["measured"] = std::isfinite(c.measured) ? json(c.measured) : json(nullptr);
    if (!c.skipped) {
        if (c.is_ratio)
            j["allowed"] = {c.allowed_lo, c.allowed};
        else
            j["allowed"] = c.allowed;
    }
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

json to_json(const ConvergenceLine& l) {
    return {{"check", l.name},           {"subject", l.subject},  {"h_coarse", l.h_coarse},
            {"h_fine", l.h_fine},        {"residual_coarse", l.r_coarse}, {"residual_fine", l.r_fine},
            {"observed_order", l.observed_order()}, {"expected_order", l.expected_order}};
}

Table check_table(const std::vector<CheckResult>& checks) {
    Table t{{"check", "subject", "measured", "allowed", "status"}, {}};
    for (const auto& c : checks)
        t.rows.push_back({c.name, c.subject, c.skipped ? c.note : (c.is_ratio ? num(c.measured, "%.4f") : sci(c.measured)),
                          c.allowed_text(), c.status()});
    return t;
}

Table convergence_table(const std::vector<ConvergenceLine>& lines) {
    Table t{{"convergence", "subject", "h", "residual(h)", "residual(2h)", "order", "expected"}, {}};
    for (const auto& l : lines)
        t.rows.push_back({l.name, l.subject, num(l.h_fine, "%.4g"), sci(l.r_fine), sci(l.r_coarse), num(l.observed_order(), "%.2f"),
                          std::to_string(l.expected_order)});
    return t;
}

bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return true;
}

// -------------------------------------------------------------- spectrum

struct SpectrumOptions {
    bool numeric = false;
    std::string diagram;
    std::string plot_level;
    std::string plot_file;
};

int cmd_spectrum(const RunConfig& cfg, const SpectrumOptions& opt, bool psusy_requested) {
    const PotentialParams p = params_from(cfg);
    const Format format = format_from(cfg);
    const Tolerances tol(cfg.tol);
    if (cfg.levels < 1) throw DomainError("--levels must be >= 1");
    if (!opt.plot_level.empty() && opt.plot_file.empty()) throw DomainError("--plot needs --plot-file");

    const auto analytic = analytic_levels(p, cfg.levels);
    std::optional<PsusyTriplet> triplet;
    std::vector<SpectrumEntry> merged;
    if (psusy_requested) {
        triplet = build_triplet(p, choice_from(cfg));
        merged = triplet_spectrum(*triplet, 2 * cfg.levels + 4);
    }

    std::optional<FamilySolve> solve;
    std::vector<CheckResult> checks;
    if (opt.numeric) {
        const Grid grid = grid_from(cfg, default_half_width(p), 0.02);
        double cutoff = -INFINITY;
        for (const auto& a : analytic) cutoff = std::max(cutoff, a.energy);
        if (analytic.empty()) cutoff = 0.0;
        WorkQueue queue(cfg.threads ? cfg.threads : 1);
        solve = queue.submit([&] { return solve_and_match(p, grid, cfg.order, cutoff, cfg.levels); }).get();
        const auto& r = solve->report;
        CheckResult matched = bound("matched", "analytic levels unmatched", static_cast<double>(r.unmatched.size()), 0.0);
        checks.push_back(matched);
        checks.push_back(bound("spectrum-delta", "max |dE|", r.max_abs_delta, tol["spectrum-delta"]));
        checks.push_back(bound("spectrum-imag", "max |Im E|", r.max_abs_imag, tol["spectrum-imag"]));
    }

    if (!opt.diagram.empty()) {
        std::vector<SpectrumEntry> rows = merged;
        if (!triplet)
            for (const auto& a : analytic) rows.push_back({a.energy, 1, {}});
        write_side_file(opt.diagram, [&](std::ostream& os) { io::write_level_diagram_csv(os, rows); });
    }
    if (!opt.plot_level.empty()) {
        const LevelIndex level = parse_level(opt.plot_level);
        require_level(p, level);
        const Grid grid = grid_from(cfg, default_half_width(p), 0.02);
        write_side_file(opt.plot_file, [&](std::ostream& os) { io::write_plot_csv(os, p, level, grid); });
    }

    const bool ok = all_passed(checks);
    Writer w(cfg.output);
    auto& os = w.out();
    Table levels{{"q", "n", "energy"}, {}};
    for (const auto& a : analytic) levels.rows.push_back({std::string(1, symbol(a.level.q)), std::to_string(a.level.n), num(a.energy)});
    Table match{{"level", "analytic", "re", "im", "delta"}, {}};
    if (solve)
        for (const auto& m : solve->report.pairs)
            match.rows.push_back({level_name(m.level), num(m.analytic), num(m.discrete.real(), "%.12g"), sci(m.discrete.imag()),
                                  sci(m.discrete.real() - m.analytic)});

    switch (format) {
        case Format::table: {
            os << describe(p) << '\n';
            for (auto q : {QuasiParity::even, QuasiParity::odd}) {
                const auto top = n_max(p, q);
                os << "tower q=" << symbol(q) << ": " << (top ? std::to_string(*top + 1) + (*top == 0 ? " bound level" : " bound levels") : "infinite") << '\n';
            }
            os << '\n';
            levels.print(os);
            if (triplet) {
                os << "\nPSUSY " << to_string(triplet->choice) << " choice, c1 = " << num(triplet->c1) << ", c2 = " << num(triplet->c2)
                   << "\n";
                Table t{{"energy", "degeneracy", "members"}, {}};
                for (const auto& e : merged) {
                    std::string members;
                    for (const auto& m : e.members) members += (members.empty() ? "" : " ") + io::member_token(m);
                    t.rows.push_back({num(e.energy), std::to_string(e.degeneracy), members});
                }
                t.print(os);
            }
            if (solve) {
                os << "\nnumeric: L = " << num(solve->grid.half_width(), "%g") << ", n = " << solve->grid.size()
                   << ", h = " << num(solve->grid.spacing(), "%.4g") << ", order " << cfg.order << ", " << solve->report.candidates
                   << " candidates, " << solve->report.spurious << " filtered\n";
                match.print(os);
                os << '\n';
                check_table(checks).print(os);
            }
            break;
        }
        case Format::csv:
            // One table per CSV document: PSUSY spectrum, else the match, else the levels.
            if (triplet)
                io::write_spectrum_csv(os, merged);
            else if (solve)
                match.csv(os);
            else
                levels.csv(os);
            break;
        case Format::json: {
            json j{{"schema_version", io::schema_version}, {"command", "spectrum"}, {"params", io::to_json(p)}};
            json lv = json::array();
            for (const auto& a : analytic) lv.push_back({{"q", sign(a.level.q)}, {"n", a.level.n}, {"energy", a.energy}});
            j["levels"] = lv;
            if (triplet)
                j["psusy"] = {{"choice", to_string(triplet->choice)},
                              {"c1", triplet->c1},
                              {"c2", triplet->c2},
                              {"spectrum", io::to_json(merged)}};
            if (solve) {
                json checks_j = json::array();
                for (const auto& c : checks) checks_j.push_back(to_json(c));
                j["numeric"] = {{"grid", grid_json(solve->grid)}, {"order", cfg.order}, {"report", io::to_json(solve->report)},
                                {"checks", checks_j}};
            }
            j["passed"] = ok;
            os << j.dump(2) << '\n';
            break;
        }
    }
    return ok ? exit_pass : exit_check_failed;
}

// ---------------------------------------------------------------- verify

const std::vector<std::string> check_names{"pt-symmetry",   "partner-map",       "superpotential-forms", "annihilation",
                                           "constraint",    "psusy-algebra",     "ssusy-consistency",    "factorization",
                                           "quasi-hamiltonian", "intertwining", "ssusy-intertwining"};

const std::array<GaussianProbe, 3> probes{GaussianProbe{-0.5, 0.7, 0.0, {1.0, 0.0}}, GaussianProbe{0.0, 1.0, 0.8, {0.6, 0.3}},
                                          GaussianProbe{0.8, 0.6, -0.5, {0.0, 1.0}}};

/// Grid with (about) twice the spacing, for the convergence lines.
Grid coarser(const Grid& g) {
    if (g.size() % 2 == 1 && (g.size() - 1) / 2 >= Grid::min_points) return Grid(g.half_width(), (g.size() - 1) / 2);
    return Grid::with_spacing(g.half_width(), 2.0 * g.spacing());
}

std::vector<SuperpotentialSpec> admissible_variants(const PotentialParams& p) {
    std::vector<SuperpotentialSpec> out;
    for (auto v : {Variant::W, Variant::Wprime, Variant::Wpp, Variant::Wppp}) {
        try {
            out.push_back(validate(SuperpotentialSpec{p, v}));
        } catch (const DomainError&) {
        }
    }
    return out;
}

struct VerifyOutput {
    std::vector<CheckResult> checks;
    std::vector<ConvergenceLine> convergence;
};

using CheckJob = std::function<VerifyOutput()>;

std::vector<std::pair<std::string, CheckJob>> verify_jobs(const PotentialParams& p, Choice choice, const Grid& grid,
                                                          const Tolerances& tol) {
    const Grid coarse = coarser(grid);
    const std::string ch = std::string(to_string(choice)) + " choice";
    auto convergence = [grid, coarse](std::string name, std::string subject, const std::function<double(const Grid&)>& r, int order) {
        return ConvergenceLine{std::move(name), std::move(subject), coarse.spacing(), grid.spacing(), r(coarse), r(grid), order};
    };
    auto probe_max = [](const Grid& g, const std::function<double(const GridFunction&)>& f) {
        double worst = 0.0;
        for (const auto& pr : probes) worst = std::max(worst, f(pr.sample(g)));
        return worst;
    };
    // Ratio check from a convergence line: order-2 residuals must shrink by ratio-min..ratio-max per halving.
    auto ratio_check = [&tol](const ConvergenceLine& l) {
        CheckResult c{l.name, l.subject, l.halving_ratio(), tol["ratio-min"], tol["ratio-max"], true, false, {}};
        return c;
    };

    std::vector<std::pair<std::string, CheckJob>> jobs;
    jobs.emplace_back("pt-symmetry", [=, &tol] {
        return VerifyOutput{{bound("pt-symmetry", describe(p), verify_pt_symmetry(p, grid), tol["pt-symmetry"])}, {}};
    });
    jobs.emplace_back("partner-map", [=, &tol] {
        VerifyOutput out;
        for (const auto& s : admissible_variants(p)) {
            try {
                out.checks.push_back(bound("partner-map", std::string(to_string(s.variant)), verify_partner_map(s, grid).deviation,
                                           tol["partner-map"]));
            } catch (const DomainError& e) {
                const std::string why = e.what();
                out.checks.push_back(skipped("partner-map", std::string(to_string(s.variant)), why.substr(0, why.find(" ("))));
            }
        }
        return out;
    });
    jobs.emplace_back("superpotential-forms", [=, &tol] {
        if (p.family() != Family::oscillator)
            return VerifyOutput{{skipped("superpotential-forms", "W'', W'''", "oscillator only")}, {}};
        const auto& o = p.as<OscillatorParams>();
        const auto up = PotentialParams::oscillator(o.alpha + 1.0, o.delta, true);
        const auto down = PotentialParams::oscillator(o.alpha - 1.0, o.delta, true);
        double dev = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            const double x = grid.x(i);
            dev = std::max(dev, std::abs(superpotential_value({p, Variant::Wpp}, x) - superpotential_value({up, Variant::W}, x)));
            dev = std::max(dev, std::abs(superpotential_value({p, Variant::Wppp}, x) - superpotential_value({down, Variant::Wprime}, x)));
        }
        return VerifyOutput{{bound("superpotential-forms", "W'', W'''", dev, tol["superpotential-forms"])}, {}};
    });
    jobs.emplace_back("annihilation", [=, &tol] {
        VerifyOutput out;
        for (const auto& s : admissible_variants(p))
            out.checks.push_back(bound("annihilation", std::string(to_string(s.variant)) + " " + level_name(annihilated_level(s)),
                                       annihilation_residual(s, annihilated_level(s), grid), tol["annihilation"]));
        return out;
    });
    jobs.emplace_back("constraint", [=, &tol] {
        return VerifyOutput{{bound("constraint", ch, constraint_residual(build_triplet(p, choice), grid), tol["constraint"])}, {}};
    });
    jobs.emplace_back("psusy-algebra", [=, &tol] {
        const auto t = build_triplet(p, choice);
        const auto r = psusy_algebra_residual(t, probes, grid, StencilAccuracy::fourth);
        VerifyOutput out{{bound("psusy-algebra", ch + ", nilpotency", r.nilpotency, tol["psusy-algebra"]),
                          bound("psusy-algebra", ch + ", trilinear", r.trilinear, tol["psusy-algebra"])},
                         {}};
        out.convergence.push_back(convergence(
            "psusy-algebra", ch + ", trilinear",
            [&](const Grid& g) { return psusy_algebra_residual(t, probes, g, StencilAccuracy::fourth).trilinear; }, 4));
        return out;
    });
    jobs.emplace_back("ssusy-consistency", [=, &tol] {
        const auto r = consistency_with_psusy(p, choice, grid);
        VerifyOutput out{{bound("ssusy-consistency", ch + ", W1/W2", r.max_w_deviation, tol["ssusy-consistency"])}, {}};
        out.checks.push_back(bound("ssusy-consistency", ch + ", |c_ssusy - c_psusy|", std::abs(r.c_ssusy - r.c_psusy), 0.0));
        return out;
    });
    jobs.emplace_back("factorization", [=, &tol] {
        const auto d = ssusy_from_family(p, choice);
        auto r = [&](const Grid& g) { return factorization_residual(d, probes, g, StencilAccuracy::fourth); };
        return VerifyOutput{{bound("factorization", ch, r(grid), tol["factorization"])}, {convergence("factorization", ch, r, 4)}};
    });
    jobs.emplace_back("quasi-hamiltonian", [=, &tol] {
        const auto d = ssusy_from_family(p, choice);
        const auto k = quasi_hamiltonian_residual(d, probes, grid);
        VerifyOutput out{{bound("quasi-hamiltonian", ch + ", upper", k.upper, tol["quasi-hamiltonian"]),
                          bound("quasi-hamiltonian", ch + ", lower", k.lower, tol["quasi-hamiltonian"]),
                          bound("quasi-hamiltonian", ch + ", intermediate", k.intermediate, tol["quasi-hamiltonian"])},
                         {}};
        out.convergence.push_back(convergence(
            "quasi-hamiltonian", ch, [&](const Grid& g) { return quasi_hamiltonian_residual(d, probes, g).max(); }, 4));
        return out;
    });
    jobs.emplace_back("intertwining", [=, &tol] {
        VerifyOutput out;
        for (const auto& s : admissible_variants(p)) {
            const auto line = convergence(
                "intertwining", std::string(to_string(s.variant)),
                [&](const Grid& g) { return probe_max(g, [&](const GridFunction& f) { return intertwining_residual(s, g, f); }); }, 2);
            out.checks.push_back(ratio_check(line));
            out.convergence.push_back(line);
        }
        return out;
    });
    jobs.emplace_back("ssusy-intertwining", [=, &tol] {
        const auto d = ssusy_from_family(p, choice);
        const auto line = convergence(
            "ssusy-intertwining", ch,
            [&](const Grid& g) { return probe_max(g, [&](const GridFunction& f) { return ptsusy::intertwining_residual(d, f, g); }); },
            2);
        return VerifyOutput{{ratio_check(line)}, {line}};
    });
    return jobs;
}

int cmd_verify(const RunConfig& cfg, std::vector<std::string> only) {
    const PotentialParams p = params_from(cfg);
    const Choice choice = choice_from(cfg);
    const Format format = format_from(cfg);
    const Tolerances tol(cfg.tol);
    const Grid grid = grid_from(cfg, 8.0, 0.0008);
    build_triplet(p, choice);  // rejects parameter sets without a triplet before any work starts
    for (const auto& o : only)
        if (std::find(check_names.begin(), check_names.end(), o) == check_names.end())
            throw DomainError("unknown check '" + o + "'");

    auto jobs = verify_jobs(p, choice, grid, tol);
    WorkQueue queue(cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<VerifyOutput>> futures;
    for (auto& [name, job] : jobs)
        if (only.empty() || std::find(only.begin(), only.end(), name) != only.end()) futures.push_back(queue.submit(job));
    VerifyOutput all;
    for (auto& f : futures) {
        auto r = f.get();
        all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
        all.convergence.insert(all.convergence.end(), r.convergence.begin(), r.convergence.end());
    }
    const bool ok = all_passed(all.checks);

    Writer w(cfg.output);
    auto& os = w.out();
    switch (format) {
        case Format::table:
            os << describe(p) << ", " << to_string(choice) << " choice; grid L = " << num(grid.half_width(), "%g")
               << ", n = " << grid.size() << ", h = " << num(grid.spacing(), "%.4g") << "\n\n";
            check_table(all.checks).print(os);
            if (!all.convergence.empty()) {
                os << '\n';
                convergence_table(all.convergence).print(os);
            }
            os << '\n' << (ok ? "all checks passed" : "CHECKS FAILED") << '\n';
            break;
        case Format::csv: {
            Table t{{"check", "subject", "measured", "allowed_min", "allowed_max", "status"}, {}};
            for (const auto& c : all.checks)
                t.rows.push_back({c.name, c.subject, c.skipped ? "" : io::format_double(c.measured),
                                  c.is_ratio ? io::format_double(c.allowed_lo) : "", c.skipped ? "" : io::format_double(c.allowed),
                                  c.status()});
            t.csv(os);
            break;
        }
        case Format::json: {
            json checks = json::array(), conv = json::array();
            for (const auto& c : all.checks) checks.push_back(to_json(c));
            for (const auto& l : all.convergence) conv.push_back(to_json(l));
            json j{{"schema_version", io::schema_version}, {"command", "verify"}, {"params", io::to_json(p)},
                   {"choice", to_string(choice)},          {"grid", grid_json(grid)},  {"checks", checks},
                   {"convergence", conv},                  {"passed", ok}};
            os << j.dump(2) << '\n';
            break;
        }
    }
    return ok ? exit_pass : exit_check_failed;
}

// ------------------------------------------------------------- ssusy-map

struct MapOptions {
    double x_max = 4.0;
    int samples = 9;
};

int cmd_ssusy_map(const RunConfig& cfg, const MapOptions& opt) {
    const PotentialParams p = params_from(cfg);
    const Choice choice = choice_from(cfg);
    const Format format = format_from(cfg);
    const Tolerances tol(cfg.tol);
    if (opt.samples < 1) throw DomainError("--samples must be >= 1");
    if (!(opt.x_max > 0.0)) throw DomainError("--x-max must be > 0");
    const Grid grid = grid_from(cfg, 8.0, 0.04);

    const auto data = ssusy_from_family(p, choice);
    const Choice other = choice == Choice::first ? Choice::second : Choice::first;
    std::optional<SsusyData> flipped;
    try {
        flipped = ssusy_from_family(p, other);
    } catch (const DomainError&) {
    }
    double p_change = 0.0;
    if (flipped)
        for (int i = 0; i < grid.size(); ++i)
            p_change = std::max(p_change, std::abs(p_sample(data, grid.x(i)).p - p_sample(*flipped, grid.x(i)).p));
    const auto cons = consistency_with_psusy(p, choice, grid);
    const std::vector<CheckResult> checks{
        bound("ssusy-consistency", "W1/W2 from p vs triplet", cons.max_w_deviation, tol["ssusy-consistency"]),
        bound("ssusy-consistency", "|c - (c1 - c2)|", std::abs(cons.c_ssusy - cons.c_psusy), 0.0)};
    const bool ok = all_passed(checks);

    struct Row {
        double x;
        Complex p, w1, w2;
    };
    std::vector<Row> rows;
    for (int k = 0; k < opt.samples; ++k) {
        const double x = opt.samples == 1 ? 0.0 : -opt.x_max + 2.0 * opt.x_max * k / (opt.samples - 1);
        const auto w = superpotentials_from_p(data, x);
        rows.push_back({x, p_sample(data, x).p, w.first, w.second});
    }

    Writer w(cfg.output);
    auto& os = w.out();
    switch (format) {
        case Format::table: {
            os << describe(p) << ", " << to_string(choice) << " choice\n";
            os << "c = " << num(data.c) << ", d = " << num(data.d) << ", a = " << num(data.a) << '\n';
            if (flipped)
                os << to_string(other) << " choice: c = " << num(flipped->c) << ", max |p change| = " << sci(p_change) << '\n';
            os << '\n';
            Table t{{"x", "re_p", "im_p", "re_W1", "im_W1", "re_W2", "im_W2"}, {}};
            for (const auto& r : rows)
                t.rows.push_back({num(r.x, "%g"), num(r.p.real()), num(r.p.imag()), num(r.w1.real()), num(r.w1.imag()), num(r.w2.real()),
                                  num(r.w2.imag())});
            t.print(os);
            os << '\n';
            check_table(checks).print(os);
            break;
        }
        case Format::csv: {
            Table t{{"x", "re_p", "im_p", "re_W1", "im_W1", "re_W2", "im_W2"}, {}};
            for (const auto& r : rows)
                t.rows.push_back({io::format_double(r.x), io::format_double(r.p.real()), io::format_double(r.p.imag()),
                                  io::format_double(r.w1.real()), io::format_double(r.w1.imag()), io::format_double(r.w2.real()),
                                  io::format_double(r.w2.imag())});
            t.csv(os);
            break;
        }
        case Format::json: {
            json samples = json::array();
            for (const auto& r : rows)
                samples.push_back({{"x", r.x},
                                   {"p", {r.p.real(), r.p.imag()}},
                                   {"W1", {r.w1.real(), r.w1.imag()}},
                                   {"W2", {r.w2.real(), r.w2.imag()}}});
            json checks_j = json::array();
            for (const auto& c : checks) checks_j.push_back(to_json(c));
            json j{{"schema_version", io::schema_version}, {"command", "ssusy-map"}, {"params", io::to_json(p)},
                   {"choice", to_string(choice)}, {"c", data.c}, {"d", data.d}, {"a", data.a}, {"samples", samples},
                   {"checks", checks_j}, {"passed", ok}};
            if (flipped) j["flipped"] = {{"choice", to_string(other)}, {"c", flipped->c}, {"max_p_change", p_change}};
            os << j.dump(2) << '\n';
            break;
        }
    }
    return ok ? exit_pass : exit_check_failed;
}

// --------------------------------------------------------------- eig-dump

struct DumpOptions {
    int count = 0;
    bool matrix = false;
};

int cmd_eig_dump(const RunConfig& cfg, const DumpOptions& opt) {
    const PotentialParams p = params_from(cfg);
    const Format format = format_from(cfg);
    if (opt.count < 0) throw DomainError("--count must be >= 0");
    const Grid grid = grid_from(cfg, default_half_width(p), 0.05);
    const auto V = [&](double x) { return potential_value(p, x); };
    const BandMatrix m = discretize_hamiltonian(V, grid, cfg.order);

    Writer w(cfg.output);
    auto& os = w.out();
    if (opt.matrix) {
        if (format == Format::json) {
            json entries = json::array();
            for (int i = 0; i < m.size(); ++i)
                for (int j = std::max(0, i - m.lower()); j <= std::min(m.size() - 1, i + m.upper()); ++j)
                    if (m(i, j) != Complex{}) entries.push_back({i, j, m(i, j).real(), m(i, j).imag()});
            json j{{"schema_version", io::schema_version}, {"command", "eig-dump"}, {"params", io::to_json(p)},
                   {"grid", grid_json(grid)},          {"order", cfg.order},    {"size", m.size()},
                   {"entries", entries}};
            os << j.dump(2) << '\n';
        } else {
            io::write_matrix_csv(os, m);
        }
        return exit_pass;
    }

    EigenResult eig = eig_hamiltonian(m);
    std::size_t shown = eig.eigenvalues.size();
    if (opt.count > 0) {
        shown = std::min(shown, static_cast<std::size_t>(opt.count));
        std::vector<bool> keep(eig.eigenvalues.size(), false);
        for (std::size_t k = 0; k < shown; ++k) keep[k] = true;
        std::size_t idx = 0;
        // Polish the reported eigenvalues; the selector sees them in index order.
        eig = with_eigenvectors(m, eig, [&](Complex) { return keep[idx++]; });
    }
    bool converged = true;
    for (std::size_t k = 0; k < shown; ++k) converged = converged && eig.converged[k];

    switch (format) {
        case Format::table: {
            os << describe(p) << "; grid L = " << num(grid.half_width(), "%g") << ", n = " << grid.size() << ", h = "
               << num(grid.spacing(), "%.4g") << ", order " << cfg.order << "\n\n";
            Table t{{"index", "re", "im", "converged"}, {}};
            for (std::size_t k = 0; k < shown; ++k)
                t.rows.push_back({std::to_string(k), num(eig.eigenvalues[k].real(), "%.12g"), sci(eig.eigenvalues[k].imag()),
                                  eig.converged[k] ? "yes" : "NO"});
            t.print(os);
            break;
        }
        case Format::csv: {
            EigenResult head;
            head.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + static_cast<long>(shown));
            head.converged.assign(eig.converged.begin(), eig.converged.begin() + static_cast<long>(shown));
            io::write_eigenvalues_csv(os, head);
            break;
        }
        case Format::json: {
            json values = json::array();
            for (std::size_t k = 0; k < shown; ++k)
                values.push_back({{"re", eig.eigenvalues[k].real()}, {"im", eig.eigenvalues[k].imag()}, {"converged", bool(eig.converged[k])}});
            json j{{"schema_version", io::schema_version}, {"command", "eig-dump"}, {"params", io::to_json(p)},
                   {"grid", grid_json(grid)}, {"order", cfg.order}, {"eigenvalues", values}, {"passed", converged}};
            os << j.dump(2) << '\n';
            break;
        }
    }
    return converged ? exit_pass : exit_check_failed;
}

void add_common_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--family", cfg.family, "oscillator | poschl-teller | scarf")->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "oscillator strength alpha");
    app.add_option("--delta", cfg.delta, "oscillator imaginary shift delta > 0");
    app.add_option("--A", cfg.A, "Poschl-Teller / Scarf parameter A");
    app.add_option("--B", cfg.B, "Poschl-Teller / Scarf parameter B");
    app.add_option("--gamma", cfg.gamma, "Poschl-Teller imaginary shift gamma");
    app.add_flag("--limiting", cfg.limiting, "allow integer ties between the towers");
    app.add_option("--psusy,--choice", cfg.choice, "PSUSY/SSUSY construction: first | second")->capture_default_str();
    app.add_option("--format", cfg.format, "table | csv | json")->capture_default_str();
    app.add_option("-o,--output", cfg.output, "write the report here instead of stdout");
    app.add_option("--half-width", cfg.half_width, "grid half-width L (grid is (-L, L))");
    app.add_option("--grid-n", cfg.grid_n, "number of interior grid points");
    app.add_option("--order", cfg.order, "finite-difference order of the Hamiltonian: 2 | 4")
        ->check(CLI::IsMember({2, 4}))
        ->capture_default_str();
    app.add_option("--levels", cfg.levels, "levels per infinite tower")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware concurrency)")->capture_default_str();
    app.add_option("--tol", cfg.tol, "tolerance override KEY=VALUE (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, identity checks and data dumps for PT-symmetric SUSY/PSUSY/SSUSY models"};
    app.set_config("--config", "", "TOML or INI file with option values; command-line flags override it");
    app.footer(tolerance_help());
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    add_common_options(app, cfg);

    auto* spectrum = app.add_subcommand("spectrum", "analytic towers, PSUSY merged spectrum, optional numerical match");
    SpectrumOptions sopt;
    spectrum->add_flag("--numeric", sopt.numeric, "discretize, solve and match the analytic levels");
    spectrum->add_option("--diagram", sopt.diagram, "write a level diagram CSV (index, energy, degeneracy)");
    spectrum->add_option("--plot", sopt.plot_level, "level to sample for plotting, e.g. +0 or -1");
    spectrum->add_option("--plot-file", sopt.plot_file, "CSV file for --plot (x, re_V, im_V, re_psi, im_psi)");

    auto* verify = app.add_subcommand("verify", "run the identity suite for one family and construction");
    std::vector<std::string> only;
    verify->add_option("--only", only, "run only these checks: " + [] {
        std::string s;
        for (const auto& n : check_names) s += (s.empty() ? "" : ", ") + n;
        return s;
    }())->delimiter(',');
    verify->footer(tolerance_help());

    auto* ssusy = app.add_subcommand("ssusy-map", "p(x), c and the SSUSY/PSUSY consistency for one family and construction");
    MapOptions mopt;
    ssusy->add_option("--x-max", mopt.x_max, "samples span [-x-max, x-max]")->capture_default_str();
    ssusy->add_option("--samples", mopt.samples, "number of p(x) samples")->capture_default_str();

    auto* dump = app.add_subcommand("eig-dump", "eigenvalues (or matrix entries) of the discretized Hamiltonian");
    DumpOptions dopt;
    dump->add_option("--count", dopt.count, "report only the lowest COUNT eigenvalues (0 = all)")->capture_default_str();
    dump->add_flag("--matrix", dopt.matrix, "dump nonzero matrix entries instead of eigenvalues");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid_input;
    }

    try {
        const bool psusy_requested = app.get_option("--psusy")->count() > 0;
        if (spectrum->parsed()) return cmd_spectrum(cfg, sopt, psusy_requested);
        if (verify->parsed()) return cmd_verify(cfg, only);
        if (ssusy->parsed()) return cmd_ssusy_map(cfg, mopt);
        if (dump->parsed()) return cmd_eig_dump(cfg, dopt);
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_invalid_input;
    } catch (const LevelRangeError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_invalid_input;
    } catch (const PoleError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_invalid_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
    return exit_invalid_input;
}
