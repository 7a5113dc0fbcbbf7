#include <doctest.h>

#include <cmath>

#include "asmf/criteria.hpp"
#include "asmf/error.hpp"
#include "oracle_values.hpp"

using namespace asmf;

TEST_CASE("contingency tables of the bundled corpus") {
    Dataset d = bundled_dataset();
    auto gpa = contingency(d, "GPA");
    CHECK(gpa.counts == std::vector<std::vector<std::size_t>>{{3, 4, 1}, {4, 6, 8}, {3, 6, 5}});
    CHECK(gpa.row_totals == std::vector<std::size_t>{8, 18, 14});
    CHECK(gpa.grand_total == 40);
    auto ps = contingency(d, "PS");
    CHECK(ps.counts == std::vector<std::vector<std::size_t>>{{10, 3, 0}, {0, 12, 2}, {0, 1, 12}});
    CHECK(ps.row_totals == std::vector<std::size_t>{13, 14, 13});
    CHECK_THROWS_AS(contingency(d, "GP"), SchemaError);
}

TEST_CASE("contingency of an empty partition is all zero") {
    Dataset d = bundled_dataset();
    auto t = contingency(d.schema, std::span<const Record>{}, 0);
    CHECK(t.grand_total == 0);
    CHECK(t.nonempty_rows() == 0);
    CHECK(t.counts == std::vector<std::vector<std::size_t>>(3, std::vector<std::size_t>(3, 0)));
    CHECK_THROWS_AS(asmf::asmf(t), CriterionError);
}

TEST_CASE("diagonal ASMF on the worked tables") {
    Dataset d = bundled_dataset();
    // Row totals are the denominators: 3/8 + 6/18 + 5/14.
    CHECK(asmf::asmf(contingency(d, "GPA")).value == doctest::Approx(3.0 / 8 + 6.0 / 18 + 5.0 / 14).epsilon(1e-15));
    CHECK(std::abs(asmf::asmf(contingency(d, "GPA")).value - oracle::kAsmfGpa.value()) < 1e-12);
    CHECK(std::abs(asmf::asmf(contingency(d, "PS")).value - oracle::kAsmfPs.value()) < 1e-12);
    CHECK(std::abs(asmf::asmf(contingency(d, "DKA")).value - oracle::kAsmfDka.value()) < 1e-12);
    CHECK(std::abs(asmf::asmf(contingency(d, "CS")).value - oracle::kAsmfCs.value()) < 1e-12);
    CHECK(std::abs(asmf::asmf(contingency(d, "TE")).value - oracle::kAsmfTe.value()) < 1e-12);
    CHECK(std::abs(asmf::asmf(contingency(d, "RS")).value - oracle::kAsmfRs.value()) < 1e-12);
}

TEST_CASE("ASMF reference tables") {
    CHECK(asmf::asmf(make_table("ideal", {{7, 0, 0}, {0, 3, 0}, {0, 0, 11}})).value == 3.0);
    CHECK(asmf::asmf(make_table("uniform", {{4, 4, 4}, {4, 4, 4}, {4, 4, 4}})).value == doctest::Approx(1.0));
    // Empty rows contribute nothing.
    CHECK(asmf::asmf(make_table("gap", {{5, 0, 0}, {0, 0, 0}, {0, 0, 2}})).value == 2.0);
    // Maxcell uses the modal cell: GPA's average row contributes 8/18 rather than 6/18.
    auto gpa = make_table("GPA", {{3, 4, 1}, {4, 6, 8}, {3, 6, 5}});
    CHECK(asmf::asmf(gpa, AsmfMode::maxcell).value == doctest::Approx(4.0 / 8 + 8.0 / 18 + 6.0 / 14));
    CHECK(asmf::asmf(gpa, AsmfMode::maxcell).criterion == Criterion::asmf_maxcell);
}

TEST_CASE("diagonal ASMF rejects misaligned arity; maxcell accepts it") {
    auto t = make_table("wide", {{1, 2}, {3, 0}, {0, 4}});
    CHECK_THROWS_AS(asmf::asmf(t, AsmfMode::diagonal), CriterionError);
    CHECK(asmf::asmf(t, AsmfMode::maxcell).value == doctest::Approx(2.0 / 3 + 1 + 1));
    CHECK_THROWS_AS(make_table("ragged", {{1, 2}, {3}}), CriterionError);
}

TEST_CASE("gain ratio") {
    SUBCASE("single nonempty row is undefined") {
        auto s = gain_ratio(make_table("const", {{0, 0}, {5, 3}}));
        CHECK_FALSE(s.defined);
        CHECK(std::isnan(s.value));
        // ASMF stays finite on the same partition.
        CHECK(asmf::asmf(make_table("const", {{0, 0}, {5, 3}})).value == doctest::Approx(3.0 / 8));
    }
    SUBCASE("perfect two-level split is exactly one") {
        for (std::size_t n : {1u, 2u, 7u, 100u}) CHECK(gain_ratio(make_table("p", {{n, 0}, {0, n}})).value == 1.0);
    }
    SUBCASE("bundled corpus matches the entropy oracle") {
        Dataset d = bundled_dataset();
        CHECK(std::abs(gain_ratio(contingency(d, "GPA")).value - oracle::kGainRatioGpa) < 1e-12);
        CHECK(std::abs(gain_ratio(contingency(d, "PS")).value - oracle::kGainRatioPs) < 1e-12);
    }
    SUBCASE("independent attribute has zero gain") {
        CHECK(gain_ratio(make_table("indep", {{2, 2}, {3, 3}})).value == doctest::Approx(0.0));
    }
}

TEST_CASE("rank_attributes on the bundled corpus") {
    Dataset d = bundled_dataset();
    auto ranked = rank_attributes(d, Criterion::asmf_diagonal);
    std::vector<std::string> order;
    for (const auto& s : ranked) order.push_back(s.attribute);
    CHECK(order == std::vector<std::string>{"PS", "DKA", "TE", "RS", "CS", "GPA"});
    CHECK(ranked.front().attribute_index == d.schema.attribute_index("PS"));
}

TEST_CASE("rank_attributes edge cases") {
    Dataset d = bundled_dataset();
    SUBCASE("single attribute") {
        std::vector<AttributeIndex> one{3};
        auto r = rank_attributes(d.schema, d.records, one, Criterion::asmf_diagonal);
        REQUIRE(r.size() == 1);
        CHECK(r[0].attribute == "CS");
    }
    SUBCASE("empty list") {
        CHECK_THROWS_AS(rank_attributes(d.schema, d.records, std::span<const AttributeIndex>{}, Criterion::asmf_diagonal),
                        CriterionError);
    }
    SUBCASE("identical columns tie in declaration order") {
        Schema s = parse_schema("class Y levels=a,b\nattr Z levels=p,q\nattr A levels=p,q\n");
        std::vector<Record> rows;
        for (std::size_t i = 0; i < 6; ++i)
            rows.push_back({{LevelIndex(i % 2), LevelIndex(i % 2)}, ClassIndex(i % 3 == 0), i + 1});
        std::vector<AttributeIndex> both{1, 0};
        for (Criterion c : {Criterion::asmf_diagonal, Criterion::asmf_maxcell, Criterion::gain_ratio}) {
            auto r = rank_attributes(s, rows, both, c);
            CHECK(r[0].value == r[1].value);
            CHECK(r[0].attribute == "Z");
        }
    }
    SUBCASE("undefined gain ratio sorts last") {
        Schema s = parse_schema("class Y levels=a,b\nattr C levels=p,q\nattr V levels=p,q\n");
        std::vector<Record> rows{{{0, 0}, 0, 1}, {{0, 1}, 1, 2}, {{0, 1}, 1, 3}};
        auto r = rank_attributes(s, rows, std::vector<AttributeIndex>{0, 1}, Criterion::gain_ratio);
        CHECK(r[0].attribute == "V");
        CHECK_FALSE(r[1].defined);
    }
}

TEST_CASE("criterion names") {
    CHECK(parse_criterion("asmf") == Criterion::asmf_diagonal);
    CHECK(parse_criterion("asmf-maxcell") == Criterion::asmf_maxcell);
    CHECK(parse_criterion("gainratio") == Criterion::gain_ratio);
    CHECK(parse_criterion(to_string(Criterion::gain_ratio)) == Criterion::gain_ratio);
    CHECK_THROWS_AS(parse_criterion("gini"), CriterionError);
}
