#pragma once

// Text serialization: RFC-4180 CSV, JSON reports, plot data.

#include <charconv>
#include <complex>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/eigensolver.hpp"
#include "ptsusy/numerics/matrix.hpp"
#include "ptsusy/numerics/spectrum.hpp"
#include "ptsusy/potentials.hpp"
#include "ptsusy/psusy.hpp"

namespace ptsusy::io {

/// Bumped whenever a JSON field is renamed or removed.
inline constexpr int schema_version = 1;

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw DomainError("not a number: '" + std::string(s) + "'");
    return v;
}

inline int parse_int(std::string_view s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw DomainError("not an integer: '" + std::string(s) + "'");
    return v;
}

// ---------------------------------------------------------------- CSV

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

/// Reads every record; quoted fields may contain commas, quotes and line breaks.
inline std::vector<std::vector<std::string>> read_csv(std::istream& is) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;  // current record has content
    char c;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (is.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty()) throw DomainError("csv: quote inside an unquoted field");
            quoted = any = true;
        } else if (c == ',') {
            end_field();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && is.peek() == '\n') is.get(c);
            if (any || !field.empty()) end_record();
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw DomainError("csv: unterminated quoted field");
    if (any || !field.empty()) end_record();
    return rows;
}

// ---------------------------------------------------------- spectra

/// "H2:-1" for component H2, quasi-odd, n = 1.
inline std::string member_token(const SpectrumMember& m) {
    return std::string(to_string(m.component)) + ':' + symbol(m.level.q) + std::to_string(m.level.n);
}

inline SpectrumMember parse_member(std::string_view tok) {
    if (tok.size() < 5 || tok[0] != 'H' || tok[2] != ':' || (tok[3] != '+' && tok[3] != '-'))
        throw DomainError("bad spectrum member '" + std::string(tok) + "'");
    const int c = tok[1] - '0';
    if (c < 1 || c > 3) throw DomainError("bad component in '" + std::string(tok) + "'");
    const int n = parse_int(tok.substr(4));
    if (n < 0) throw DomainError("negative level in '" + std::string(tok) + "'");
    return {static_cast<Component>(c), {tok[3] == '+' ? QuasiParity::even : QuasiParity::odd, n}};
}

inline const std::vector<std::string> spectrum_csv_header{"energy", "degeneracy", "members"};

inline void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumEntry>& s) {
    write_csv_row(os, spectrum_csv_header);
    for (const auto& e : s) {
        std::string members;
        for (const auto& m : e.members) {
            if (!members.empty()) members += ' ';
            members += member_token(m);
        }
        write_csv_row(os, {format_double(e.energy), std::to_string(e.degeneracy), members});
    }
}

inline std::vector<SpectrumEntry> read_spectrum_csv(std::istream& is) {
    const auto rows = read_csv(is);
    if (rows.empty() || rows.front() != spectrum_csv_header) throw DomainError("spectrum csv: missing header");
    std::vector<SpectrumEntry> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) throw DomainError("spectrum csv: row " + std::to_string(r) + " has " + std::to_string(row.size()) + " fields");
        SpectrumEntry e{parse_double(row[0]), parse_int(row[1]), {}};
        std::string_view rest = row[2];
        while (!rest.empty()) {
            const auto sp = rest.find(' ');
            e.members.push_back(parse_member(rest.substr(0, sp)));
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
        }
        if (e.degeneracy != static_cast<int>(e.members.size()))
            throw DomainError("spectrum csv: row " + std::to_string(r) + " degeneracy does not match member count");
        out.push_back(std::move(e));
    }
    return out;
}

/// Level diagram rows (index, energy, degeneracy).
inline void write_level_diagram_csv(std::ostream& os, const std::vector<SpectrumEntry>& s) {
    write_csv_row(os, {"index", "energy", "degeneracy"});
    for (std::size_t k = 0; k < s.size(); ++k)
        write_csv_row(os, {std::to_string(k), format_double(s[k].energy), std::to_string(s[k].degeneracy)});
}

/// Plot rows (x, Re V, Im V, Re psi, Im psi) for one eigenfunction.
inline void write_plot_csv(std::ostream& os, const PotentialParams& p, const LevelIndex& level, const numerics::Grid& grid) {
    write_csv_row(os, {"x", "re_V", "im_V", "re_psi", "im_psi"});
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const Complex v = potential_value(p, x);
        const Complex psi = eigenfunction(p, level, x);
        write_csv_row(os, {format_double(x), format_double(v.real()), format_double(v.imag()), format_double(psi.real()),
                           format_double(psi.imag())});
    }
}

/// Nonzero band entries as (row, col, re, im).
inline void write_matrix_csv(std::ostream& os, const numerics::BandMatrix& m) {
    write_csv_row(os, {"row", "col", "re", "im"});
    for (int i = 0; i < m.size(); ++i)
        for (int j = std::max(0, i - m.lower()); j <= std::min(m.size() - 1, i + m.upper()); ++j) {
            const Complex z = m(i, j);
            if (z != Complex{}) write_csv_row(os, {std::to_string(i), std::to_string(j), format_double(z.real()), format_double(z.imag())});
        }
}

inline void write_eigenvalues_csv(std::ostream& os, const numerics::EigenResult& r) {
    write_csv_row(os, {"index", "re", "im", "converged"});
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
        write_csv_row(os, {std::to_string(k), format_double(r.eigenvalues[k].real()), format_double(r.eigenvalues[k].imag()),
                           r.converged[k] ? "1" : "0"});
}

// --------------------------------------------------------------- JSON

using nlohmann::json;

inline json to_json(const LevelIndex& l) { return {{"q", sign(l.q)}, {"n", l.n}}; }

inline json to_json(const SpectrumEntry& e) {
    json members = json::array();
    for (const auto& m : e.members)
        members.push_back({{"component", to_string(m.component)}, {"q", sign(m.level.q)}, {"n", m.level.n}});
    return {{"energy", e.energy}, {"degeneracy", e.degeneracy}, {"members", members}};
}

inline json to_json(const std::vector<SpectrumEntry>& s) {
    json a = json::array();
    for (const auto& e : s) a.push_back(to_json(e));
    return a;
}

inline SpectrumEntry spectrum_entry_from_json(const json& j) {
    SpectrumEntry e{j.at("energy").get<double>(), j.at("degeneracy").get<int>(), {}};
    for (const auto& m : j.at("members")) {
        const auto name = m.at("component").get<std::string>();
        if (name.size() != 2 || name[0] != 'H' || name[1] < '1' || name[1] > '3') throw DomainError("bad component '" + name + "'");
        const int q = m.at("q").get<int>();
        if (q != 1 && q != -1) throw DomainError("quasi-parity must be +1 or -1");
        e.members.push_back({static_cast<Component>(name[1] - '0'), {static_cast<QuasiParity>(q), m.at("n").get<int>()}});
    }
    return e;
}

inline json to_json(const PotentialParams& p) {
    json j{{"family", to_string(p.family())}, {"limiting", p.limiting}};
    if (const auto* o = std::get_if<OscillatorParams>(&p.values)) {
        j["alpha"] = o->alpha;
        j["delta"] = o->delta;
    } else if (const auto* t = std::get_if<PoschlTellerParams>(&p.values)) {
        j["A"] = t->A;
        j["B"] = t->B;
        j["gamma"] = t->gamma;
    } else {
        const auto& s = p.as<ScarfParams>();
        j["A"] = s.A;
        j["B"] = s.B;
    }
    return j;
}

inline json to_json(const numerics::MatchReport& r) {
    json pairs = json::array();
    for (const auto& m : r.pairs)
        pairs.push_back({{"level", to_json(m.level)},
                         {"analytic", m.analytic},
                         {"re", m.discrete.real()},
                         {"im", m.discrete.imag()},
                         {"delta", m.discrete.real() - m.analytic}});
    json unmatched = json::array();
    for (const auto& l : r.unmatched) unmatched.push_back(to_json(l));
    return {{"pairs", pairs},
            {"max_abs_delta", r.max_abs_delta},
            {"max_abs_imag", r.max_abs_imag},
            {"unmatched", unmatched},
            {"spurious", r.spurious},
            {"candidates", r.candidates}};
}

}  // namespace ptsusy::io
