#include <doctest.h>

#include "asmf/error.hpp"
#include "asmf/report.hpp"
#include "asmf/rules.hpp"
#include "oracle_values.hpp"

using namespace asmf;

TEST_CASE("half-up rounding") {
    CHECK(format_fixed(1.0654761904761905) == "1.07");
    CHECK(format_fixed(2.2) == "2.20");
    CHECK(format_fixed(2.545) == "2.55");
    CHECK(format_fixed(0.125) == "0.13");
    CHECK(format_fixed(1.005) == "1.01");
    CHECK(format_fixed(0.0) == "0.00");
    CHECK(format_fixed(0.9250, 4) == "0.9250");
    CHECK(round_half_up(2.5494505494505493) == doctest::Approx(2.55));
}

TEST_CASE("criterion report on the bundled corpus") {
    Dataset d = bundled_dataset();
    auto report = criterion_report(d, Criterion::asmf_diagonal);
    REQUIRE(report.rows.size() == 6);
    const std::vector<std::pair<std::string, std::string>> expected{
        {"PS", "2.55"}, {"DKA", "2.20"}, {"TE", "2.09"}, {"RS", "1.79"}, {"CS", "1.25"}, {"GPA", "1.07"}};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(report.rows[i].attribute == expected[i].first);
        CHECK(format_fixed(report.rows[i].value) == expected[i].second);
    }
    // Full precision is kept internally.
    CHECK(report.rows[0].value == asmf::asmf(contingency(d, "PS")).value);
    CHECK(render_text(report) ==
          "ATTRIBUTE  asmf-diagonal\nPS         2.55\nDKA        2.20\nTE         2.09\nRS         1.79\n"
          "CS         1.25\nGPA        1.07\n");
    const std::string csv = render_csv(report);
    CHECK(csv.rfind("attribute,criterion,value,rounded\nPS,asmf-diagonal,2.549450549450549", 0) == 0);
}

TEST_CASE("maxcell report dominates the diagonal one") {
    Dataset d = bundled_dataset();
    auto diag = criterion_report(d, Criterion::asmf_diagonal);
    auto maxc = criterion_report(d, Criterion::asmf_maxcell);
    for (const auto& row : maxc.rows)
        for (const auto& drow : diag.rows)
            if (drow.attribute == row.attribute) CHECK(row.value >= drow.value);
}

TEST_CASE("report edge cases") {
    Dataset d = bundled_dataset();
    SUBCASE("single-attribute dataset") {
        Schema s = parse_schema("class P levels=Good,Average,Poor labels=1,2,3\nattr PS levels=Good,Average,Poor\n");
        Dataset one = ingest_csv(s, "PS,P\nGood,1\nPoor,3\nAverage,3\n").dataset;
        CHECK(criterion_report(one, Criterion::asmf_diagonal).rows.size() == 1);
    }
    SUBCASE("empty dataset") {
        d.records.clear();
        CHECK_THROWS_WITH_AS(criterion_report(d, Criterion::asmf_diagonal), "no records", DataError);
    }
    SUBCASE("undefined gain ratio renders as such") {
        Schema s = parse_schema("class Y levels=a,b\nattr K levels=p,q\n");
        Dataset k{s, {{{0}, 0, 1}, {{0}, 1, 2}}};
        auto r = criterion_report(k, Criterion::gain_ratio);
        CHECK_FALSE(r.rows[0].defined);
        CHECK(render_text(r).find("undefined") != std::string::npos);
    }
}

TEST_CASE("resubstitution confusion matrix") {
    Dataset d = bundled_dataset();
    SUBCASE("pruned default tree against the per-row oracle") {
        auto cm = resubstitution_report(train(d), d);
        std::size_t oracle_correct = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            oracle_correct += static_cast<ClassIndex>(oracle::kPrunedPredictions[i]) == *d.records[i].label;
        CHECK(oracle_correct == oracle::kPrunedCorrect);
        CHECK(cm.correct == oracle_correct);
        CHECK(cm.total == 40);
        CHECK(cm.accuracy() == doctest::Approx(37.0 / 40));
        CHECK(render_text(cm, d.schema).find("accuracy=37/40 (0.9250)") != std::string::npos);
    }
    SUBCASE("single majority leaf") {
        auto cm = resubstitution_report(prune(build_tree(d), 1000), d);
        CHECK(cm.accuracy() == doctest::Approx(16.0 / 40));
        CHECK(cm.counts[0][1] == 10);
    }
    SUBCASE("single perfect record") {
        d.records.resize(1);
        CHECK(resubstitution_report(build_tree(d), d).accuracy() == 1.0);
    }
    SUBCASE("empty dataset") {
        DecisionTree t = train(d);
        d.records.clear();
        CHECK_THROWS_AS(resubstitution_report(t, d), DataError);
    }
}

TEST_CASE("DOT export") {
    Dataset d = bundled_dataset();
    SUBCASE("single leaf") {
        const std::string dot = export_dot(prune(build_tree(d), 1000), d.schema);
        CHECK(dot == "digraph asmf_tree {\n  node [fontname=\"Helvetica\"];\n"
                     "  n0 [shape=ellipse, label=\"Average\\nsupport=40\\nconfidence=0.40\"];\n}\n");
    }
    SUBCASE("pruned tree") {
        DecisionTree t = train(d);
        const std::string dot = export_dot(t, d.schema);
        CHECK(dot.find("n0 [shape=box, label=\"PS\\nsupport=40\"];") != std::string::npos);
        CHECK(dot.find("n0 -> n1 [label=\"Good\"];") != std::string::npos);
        CHECK(dot.find("n0 -> n8 [label=\"Average\"];") != std::string::npos);
        CHECK(dot.find("n0 -> n12 [label=\"Poor\"];") != std::string::npos);
        CHECK(dot == export_dot(t, d.schema));
    }
}
