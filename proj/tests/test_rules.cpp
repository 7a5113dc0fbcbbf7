#include <doctest.h>

#include "asmf/error.hpp"
#include "asmf/rules.hpp"
#include "asmf/tree.hpp"
#include "oracle_values.hpp"

using namespace asmf;

namespace {

Record person(const Schema& s, std::initializer_list<std::pair<const char*, const char*>> values) {
    Record r;
    r.values.assign(s.attribute_count(), std::nullopt);
    for (auto [name, level] : values) {
        const AttributeIndex a = s.attribute_index(name);
        r.values[a] = *s.attributes[a].find_level(level);
    }
    return r;
}

}  // namespace

TEST_CASE("pruned rules include PS in {Poor} -> Poor with support 13, correct 12") {
    Dataset d = bundled_dataset();
    DecisionTree t = train(d);
    const AttributeIndex ps = d.schema.attribute_index("PS");
    bool found = false;
    for (const Rule& r : extract_rules(t, d)) {
        if (r.conditions.size() == 1 && r.conditions[0].attribute == ps && r.conditions[0].levels == std::vector<LevelIndex>{2}) {
            found = true;
            CHECK(d.schema.class_label(r.predicted) == "Poor");
            CHECK(r.support == 13);
            CHECK(r.correct == 12);
            CHECK(render_rule(r, d.schema) == "IF PS in {Poor} THEN P = Poor  [support=13, confidence=0.92]");
        }
    }
    CHECK(found);
}

TEST_CASE("rules from leaf statistics equal rules counted against the training set") {
    Dataset d = bundled_dataset();
    DecisionTree t = train(d);
    CHECK(extract_rules(t) == extract_rules(t, d));
    DecisionTree full = build_tree(d);
    CHECK(extract_rules(full) == extract_rules(full, d));
}

TEST_CASE("single-leaf tree gives one unconditional rule") {
    Dataset d = bundled_dataset();
    DecisionTree t = prune(build_tree(d), 100);
    auto rules = extract_rules(t, d);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].conditions.empty());
    CHECK(d.schema.class_label(rules[0].predicted) == "Average");
    CHECK(rules[0].support == 40);
    CHECK(rules[0].correct == 16);
    CHECK(render_rule(rules[0], d.schema) == "IF TRUE THEN P = Average  [support=40, confidence=0.40]");
}

TEST_CASE("rules and tree agree on every training record") {
    Dataset d = bundled_dataset();
    for (const DecisionTree& t : {build_tree(d), train(d)}) {
        const RuleSet rules = extract_rules(t, d);
        const RuleSet merged = merge_rules(rules, d.schema);
        CHECK(merged.size() <= rules.size());
        for (const Record& r : d.records) {
            const auto p = classify(t, d.schema, r);
            auto i = first_match(rules, r);
            auto j = first_match(merged, r);
            REQUIRE(i);
            REQUIRE(j);
            CHECK(rules[*i].predicted == p.predicted);
            CHECK(merged[*j].predicted == p.predicted);
        }
    }
}

TEST_CASE("sibling rules with the same class merge into a level set") {
    Schema s = parse_schema(bundled_schema_text());
    const AttributeIndex ps = s.attribute_index("PS"), gpa = s.attribute_index("GPA");
    RuleSet rules{
        {{{ps, {0}}, {gpa, {0}}}, 0, 3, 3},
        {{{ps, {0}}, {gpa, {1}}}, 0, 2, 1},
    };
    auto merged = merge_rules(rules, s);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].conditions[1].levels == std::vector<LevelIndex>{0, 1});
    CHECK(merged[0].support == 5);
    CHECK(merged[0].correct == 4);
    CHECK(render_rule(merged[0], s) == "IF PS in {Good} AND GPA in {Good,Average} THEN P = Good  [support=5, confidence=0.80]");
}

TEST_CASE("merging stops at a fixpoint and drops conditions that cover every level") {
    Schema s = parse_schema(bundled_schema_text());
    const AttributeIndex ps = s.attribute_index("PS"), gpa = s.attribute_index("GPA");
    RuleSet rules{
        {{{ps, {0}}, {gpa, {0}}}, 0, 1, 1},
        {{{ps, {0}}, {gpa, {1}}}, 0, 1, 1},
        {{{ps, {0}}, {gpa, {2}}}, 0, 1, 1},
        {{{ps, {1}}}, 1, 4, 4},
    };
    auto merged = merge_rules(rules, s);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].conditions.size() == 1);
    CHECK(merged[0].support == 3);

    RuleSet distinct{{{{ps, {0}}}, 0, 1, 1}, {{{ps, {1}}}, 1, 1, 1}};
    CHECK(merge_rules(distinct, s) == distinct);
}

TEST_CASE("classify") {
    Dataset d = bundled_dataset();
    const Schema& s = d.schema;
    DecisionTree pruned = train(d);

    SUBCASE("all-Good candidate") {
        Record r = person(s, {{"GPA", "Good"}, {"PS", "Good"}, {"DKA", "Good"}, {"CS", "Good"}, {"TE", "Good"}, {"RS", "Good"}});
        auto p = classify(pruned, s, r);
        CHECK(s.class_label(p.predicted) == "Good");
        CHECK(p.recommendation == Recommendation::deploy);
        REQUIRE(p.path.size() == 2);
        CHECK(p.path[0] == PathStep{s.attribute_index("PS"), 0});
        CHECK(p.confidence() == doctest::Approx(1.0));
    }
    SUBCASE("weak programmer") {
        Record r = person(s, {{"GPA", "Good"}, {"PS", "Poor"}, {"DKA", "Good"}, {"CS", "Good"}, {"TE", "Good"}, {"RS", "Good"}});
        auto p = classify(pruned, s, r);
        CHECK(s.class_label(p.predicted) == "Poor");
        CHECK(p.recommendation == Recommendation::do_not_deploy);
        CHECK(p.distribution == std::vector<std::size_t>{0, 1, 12});
    }
    SUBCASE("unseen combination lands on a default leaf") {
        Record r = person(s, {{"PS", "Good"}, {"DKA", "Poor"}});
        auto p = classify(pruned, s, r);
        CHECK(p.from_default_leaf);
        CHECK_FALSE(p.confidence().has_value());
        CHECK(s.class_label(p.predicted) == "Good");
    }
    SUBCASE("missing attribute on the path") {
        Record r = person(s, {{"PS", "Good"}});
        r.row_id = 9;
        CHECK_THROWS_WITH_AS(classify(pruned, s, r), "row 9: missing value for DKA, which the tree tests", DataError);
    }
    SUBCASE("every bundled row matches the frozen oracle predictions") {
        for (std::size_t i = 0; i < d.size(); ++i)
            CHECK(classify(pruned, s, d.records[i]).predicted == static_cast<ClassIndex>(oracle::kPrunedPredictions[i]));
    }
}

TEST_CASE("recommendations") {
    Schema s = parse_schema(bundled_schema_text());
    CHECK(recommend(s, "Good") == Recommendation::deploy);
    CHECK(recommend(s, "Average") == Recommendation::deploy_with_training);
    CHECK(recommend(s, "Poor") == Recommendation::do_not_deploy);
    CHECK(recommend(s, "3") == Recommendation::do_not_deploy);
    CHECK_THROWS_AS(recommend(s, "Excellent"), DataError);
    CHECK_THROWS_AS(recommend(s, ClassIndex{3}), DataError);
    CHECK(to_string(Recommendation::deploy_with_training) == "deploy-with-training");

    Schema two = parse_schema("class R levels=Hire,Reject\nattr A levels=x\n");
    CHECK(recommend(two, "Hire") == Recommendation::deploy);
    CHECK(recommend(two, "Reject") == Recommendation::do_not_deploy);

    Schema five = parse_schema("class R levels=A,B,C,D,E\nattr A levels=x\n");
    CHECK(recommend(five, "A") == Recommendation::deploy);
    for (const char* mid : {"B", "C", "D"}) CHECK(recommend(five, mid) == Recommendation::deploy_with_training);
    CHECK(recommend(five, "E") == Recommendation::do_not_deploy);
}
