#include <sstream>

#include <gtest/gtest.h>

#include "ptsusy/io.hpp"

using namespace ptsusy;
using namespace ptsusy::io;

TEST(FormatDouble, RoundTripsExactly) {
    for (double v : {0.0, -0.0, 1.0, 0.1, -2.25, 1e-300, 6.02214076e23, 4.0 * 1.5 + 2.0 - 3.0 * 0.1})
        EXPECT_EQ(parse_double(format_double(v)), v) << format_double(v);
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(ParseNumbers, RejectsGarbage) {
    EXPECT_THROW(parse_double("1.5x"), DomainError);
    EXPECT_THROW(parse_double(""), DomainError);
    EXPECT_THROW(parse_int("3.0"), DomainError);
    EXPECT_EQ(parse_int("-12"), -12);
}

TEST(Csv, QuotesOnlyWhenNeeded) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RowsEndWithCrlf) {
    std::ostringstream os;
    write_csv_row(os, {"a", "b,c", ""});
    EXPECT_EQ(os.str(), "a,\"b,c\",\r\n");
}

TEST(Csv, ReadHandlesQuotesNewlinesAndLineEndings) {
    std::istringstream is("x,\"y,1\",\"he said \"\"no\"\"\"\r\n\"multi\nline\",,end\nlast,row");
    const auto rows = read_csv(is);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "y,1", "he said \"no\""}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"multi\nline", "", "end"}));
    EXPECT_EQ(rows[2], (std::vector<std::string>{"last", "row"}));
}

TEST(Csv, WriteThenReadIsIdentity) {
    const std::vector<std::vector<std::string>> rows{{"a", "b\"c", "d\r\ne"}, {"", ",", "\"\""}};
    std::ostringstream os;
    for (const auto& r : rows) write_csv_row(os, r);
    std::istringstream is(os.str());
    EXPECT_EQ(read_csv(is), rows);
}

TEST(Csv, MalformedInput) {
    std::istringstream open_quote("a,\"b");
    EXPECT_THROW(read_csv(open_quote), DomainError);
    std::istringstream stray("ab\"c\"");
    EXPECT_THROW(read_csv(stray), DomainError);
}

TEST(SpectrumCsv, RoundTrip) {
    const auto t = build_triplet(PotentialParams::oscillator(2.5, 1.0), Choice::first);
    const auto s = triplet_spectrum(t, 6);
    std::ostringstream os;
    write_spectrum_csv(os, s);
    std::istringstream is(os.str());
    const auto back = read_spectrum_csv(is);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_EQ(back[k].energy, s[k].energy);
        EXPECT_EQ(back[k].degeneracy, s[k].degeneracy);
        ASSERT_EQ(back[k].members.size(), s[k].members.size());
        for (std::size_t j = 0; j < s[k].members.size(); ++j) {
            EXPECT_EQ(back[k].members[j].component, s[k].members[j].component);
            EXPECT_EQ(back[k].members[j].level, s[k].members[j].level);
        }
    }
}

TEST(SpectrumCsv, RejectsInconsistentRows) {
    std::istringstream no_header("1,1,H1:+0\r\n");
    EXPECT_THROW(read_spectrum_csv(no_header), DomainError);
    std::istringstream bad_count("energy,degeneracy,members\r\n1,2,H1:+0\r\n");
    EXPECT_THROW(read_spectrum_csv(bad_count), DomainError);
    std::istringstream bad_member("energy,degeneracy,members\r\n1,1,H4:+0\r\n");
    EXPECT_THROW(read_spectrum_csv(bad_member), DomainError);
}

TEST(MemberToken, Format) {
    const SpectrumMember m{Component::H2, {QuasiParity::odd, 1}};
    EXPECT_EQ(member_token(m), "H2:-1");
    const auto back = parse_member("H3:+12");
    EXPECT_EQ(back.component, Component::H3);
    EXPECT_EQ(back.level.n, 12);
    EXPECT_EQ(back.level.q, QuasiParity::even);
    EXPECT_THROW(parse_member("H2:-x"), DomainError);
    EXPECT_THROW(parse_member("H2-1"), DomainError);
}

TEST(Json, SpectrumEntryRoundTrip) {
    const auto s = triplet_spectrum(build_triplet(PotentialParams::scarf(2.3, 1.4), Choice::second), 10);
    const auto j = to_json(s);
    ASSERT_EQ(j.size(), s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto text = j[k].dump();
        const auto e = spectrum_entry_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(e.energy, s[k].energy);
        EXPECT_EQ(e.degeneracy, s[k].degeneracy);
        EXPECT_EQ(e.members.size(), s[k].members.size());
    }
    EXPECT_THROW(spectrum_entry_from_json(nlohmann::json::parse(R"({"energy":1,"degeneracy":1,"members":[{"component":"H7","q":1,"n":0}]})")),
                 DomainError);
}

TEST(Json, ParamsCarryFamilyFields) {
    const auto j = to_json(PotentialParams::poschl_teller(1.2, 3.9, 0.3));
    EXPECT_EQ(j.at("family"), "poschl-teller");
    EXPECT_EQ(j.at("gamma"), 0.3);
    EXPECT_EQ(j.at("limiting"), false);
    const auto o = to_json(PotentialParams::oscillator(2.5, 1.0));
    EXPECT_EQ(o.at("alpha"), 2.5);
    EXPECT_FALSE(o.contains("A"));
}

TEST(PlotCsv, OneRowPerGridPoint) {
    const numerics::Grid g(4.0, 20);
    std::ostringstream os;
    write_plot_csv(os, PotentialParams::oscillator(2.5, 1.0), {QuasiParity::even, 0}, g);
    std::istringstream is(os.str());
    const auto rows = read_csv(is);
    ASSERT_EQ(rows.size(), 21u);
    EXPECT_EQ(rows[0].front(), "x");
    EXPECT_EQ(parse_double(rows[1][0]), g.x(0));
}

TEST(MatrixCsv, ListsNonzeroBandEntries) {
    numerics::BandMatrix m(3, 1, 1);
    m.at(0, 0) = 1.0;
    m.at(1, 2) = Complex(0, 2);
    std::ostringstream os;
    write_matrix_csv(os, m);
    EXPECT_EQ(os.str(), "row,col,re,im\r\n0,0,1,0\r\n1,2,0,2\r\n");
}
