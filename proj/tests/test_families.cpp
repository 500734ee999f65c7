#include <doctest.h>

#include <set>
#include <sstream>

#include <polyvec/families.hpp>

using namespace polyvec;
using namespace polyvec::families;

TEST_CASE("bundled dataset loads and validates") {
    auto ds = parse_dataset_file(POLYVEC_DATA_FILE);
    CHECK(ds.version == 1);
    CHECK(ds.families.size() == 105);
    CHECK(ds.surfaces.size() == 10);
    auto cov = coverage_report(ds);
    CHECK(cov.total_families == 105);
    int with_model = cov.total_families - cov.without_model;
    CHECK(with_model >= 60);
    // the worked example, the 14 homogeneous descriptions, the toric Fano suite and the
    // five special recipes must all be present
    CHECK(ds.at({2, 8}).toric_model.has_value());
    for (int n : {5, 6, 7, 8, 9, 10, 15}) CHECK(ds.at({1, n}).homogeneous_model.has_value());
    for (int n : {14, 17, 20, 21, 22, 26}) CHECK(ds.at({2, n}).homogeneous_model.has_value());
    CHECK(ds.at({9, 1}).homogeneous_model.has_value());
    CHECK(ds.at({1, 17}).toric_model.has_value());
    for (auto [rho, n] : {std::pair{1, 1}, {2, 1}, {2, 3}, {4, 13}, {10, 1}})
        CHECK(ds.at({rho, n}).special_model.has_value());
    // engine-agreement duplicates
    CHECK(cov.duplicated.size() >= 15);
    CHECK(ds.at({9, 1}).toric_model.has_value());
    // the printed-codimension discrepancy of the 2-20 row is surfaced
    REQUIRE(cov.codim_discrepancies.size() == 1);
    CHECK(cov.codim_discrepancies[0] == invariants::FamilyId{2, 20});
    CHECK(ds.at({2, 20}).homogeneous_model->codim == 5);
    CHECK(ds.at({2, 20}).homogeneous_model->printed_codim == 3);
}

TEST_CASE("chi-inconsistent expected row is rejected with the offending id") {
    std::string text = R"(version 1
family 2-8
invariants c1cubed=14 h12=9 dimaut0=0 jumps=0
expected 0 18 3 1 1 9
endfamily
)";
    std::istringstream in(text);
    try {
        parse_dataset(in);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.id == "2-8");
        CHECK(e.check.find("anticanonical") != std::string::npos);
    }
}

TEST_CASE("rank/codim mismatch in a homogeneous model is rejected") {
    std::string text = R"(version 1
family 2-20
invariants c1cubed=26 h12=0 dimaut0=0 jumps=1
expected 0 3 6 0 0 16
model homogeneous
factors Gr(2,5)xP(2)
bundle Udual x O(1) + O(1,0)^3
codim 3
endmodel
endfamily
)";
    std::istringstream in(text);
    try {
        parse_dataset(in);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.id == "2-20");
        CHECK(e.check.find("rank") != std::string::npos);
    }
}

TEST_CASE("parse errors carry positions") {
    std::string text = "version 1\nfrobnicate\n";
    std::istringstream in(text);
    try {
        parse_dataset(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("serialize/parse round trip is idempotent") {
    auto ds = parse_dataset_file(POLYVEC_DATA_FILE);
    std::ostringstream first;
    serialize(ds, first);
    std::istringstream back(first.str());
    auto ds2 = parse_dataset(back);
    std::ostringstream second;
    serialize(ds2, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("empty dataset flags all families as missing") {
    std::istringstream in("version 1\n");
    auto ds = parse_dataset(in);
    auto cov = coverage_report(ds);
    CHECK(cov.total_families == 0);
    CHECK(cov.without_model == 0);
    // missing = valid ids with no entry at all: the report only counts
    // declared families, so an empty file simply reports zero coverage
    CHECK(ds.families.empty());
}

TEST_CASE("zero-bivector families in the expected table") {
    // among Picard rank >= 2 rows, exactly six have pv02 = 0
    auto ds = parse_dataset_file(POLYVEC_DATA_FILE);
    std::set<std::string> zero;
    for (const auto& [id, fam] : ds.families)
        if (id.rho >= 2 && fam.expected.pv02 == 0) zero.insert(id.str());
    CHECK(zero == std::set<std::string>{"2-2", "2-4", "2-6", "2-7", "3-1", "3-3"});
}

TEST_CASE("surface table validates against surface Riemann-Roch") {
    auto ds = parse_dataset_file(POLYVEC_DATA_FILE);
    for (const auto& s : ds.surfaces) {
        CHECK(s.h0t - s.h1t == 2 * s.k2 - 10);
        CHECK(s.h0acan == s.k2 + 1);
    }
    CHECK(ds.surface("P2").h0t == 8);
    CHECK(ds.surface("Bl8").h1t == 8);
    CHECK(ds.surface("Bl4").h0acan == 6);
    // corrupt triple rejected
    std::string text = "version 1\nsurface P2 k2=9 h0t=7 h1t=0 h0acan=10\n";
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_dataset(in), ValidationError);
}

TEST_CASE("bad fans are rejected at load") {
    std::string text = R"(version 1
family 1-17
invariants c1cubed=64 h12=0 dimaut0=15 jumps=0
expected 15 0 45 0 0 35
model toric
dim 3
ray 1 0 0
ray 0 1 0
ray 0 0 1
ray -1 -1 -1
cone 0 1 2
cone 0 1 3
cone 0 2 3
endmodel
endfamily
)";
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_dataset(in), IncompleteFan);
}
