#include <doctest.h>

#include <string>

#include "asmf/error.hpp"
#include "asmf/model.hpp"
#include "asmf/rules.hpp"

using namespace asmf;

namespace {

ModelFile bundled_model() { return make_model(bundled_dataset(), TreeConfig{}, "2026-01-01T00:00:00Z"); }

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("model text round-trips byte for byte") {
    ModelFile m = bundled_model();
    const std::string text = serialize_model(m);
    CHECK(text.rfind("asmf-tree-model v1\nschema\nclass P levels=Good,Average,Poor labels=1,2,3\n", 0) == 0);
    ModelFile back = deserialize_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
}

TEST_CASE("round trip preserves every prediction") {
    Dataset d = bundled_dataset();
    ModelFile m = bundled_model();
    ModelFile back = deserialize_model(serialize_model(m));
    for (const Record& r : d.records)
        CHECK(classify(m.tree, m.schema, r).predicted == classify(back.tree, back.schema, r).predicted);
}

TEST_CASE("config variants survive a round trip") {
    TreeConfig c{.criterion = Criterion::gain_ratio, .min_split = 3, .min_support = 1, .max_depth = 2};
    ModelFile m = make_model(bundled_dataset(), c, "x");
    ModelFile back = deserialize_model(serialize_model(m));
    CHECK(back.config == c);
    CHECK(back.provenance.created == "x");
    CHECK(back.provenance.rows == 40);
}

TEST_CASE("deserialize rejects bad input with positioned errors") {
    const std::string text = serialize_model(bundled_model());
    SUBCASE("unknown version") {
        CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "v1\n", "v999\n")),
                             "model line 1: unsupported model version 999 (this build reads v1)", ModelError);
    }
    SUBCASE("not a model") { CHECK_THROWS_AS(deserialize_model("hello\n"), ModelError); }
    SUBCASE("truncated") {
        CHECK_THROWS_AS(deserialize_model(text.substr(0, text.size() / 2)), ModelError);
        CHECK_THROWS_AS(deserialize_model(text.substr(0, text.rfind("end"))), ModelError);
        CHECK_THROWS_AS(deserialize_model(""), ModelError);
    }
    SUBCASE("child edge pointing at an undeclared level") {
        CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "DKA=Poor #7", "DKA=Excellent #7")),
                             doctest::Contains("node #7: level 'Excellent' is not declared for attribute DKA"),
                             ModelError);
    }
    SUBCASE("split on an unknown attribute") {
        CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "split DKA support=13", "split GP support=13")),
                             doctest::Contains("node #1: attribute 'GP' is not in the schema"), ModelError);
    }
    SUBCASE("unknown class") {
        CHECK_THROWS_AS(deserialize_model(replace_once(text, "class=Poor\nend", "class=Awful\nend")), ModelError);
    }
    SUBCASE("node count mismatch") {
        CHECK_THROWS_AS(deserialize_model(replace_once(text, "tree 13", "tree 14")), ModelError);
    }
    SUBCASE("support bookkeeping broken") {
        CHECK_THROWS_AS(deserialize_model(replace_once(text, "#12 leaf support=13 dist=0,1,12",
                                                       "#12 leaf support=14 dist=0,2,12")),
                        ModelError);
    }
    SUBCASE("bad config value") {
        CHECK_THROWS_WITH_AS(deserialize_model(replace_once(text, "min_support 2", "min_support 0")),
                             doctest::Contains("model line"), ModelError);
    }
}
