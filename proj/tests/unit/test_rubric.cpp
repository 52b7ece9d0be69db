#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bltrend/errors.hpp"
#include "bltrend/rubric.hpp"
#include "test_util.hpp"

using namespace bltrend;

namespace {

const RubricDefinition& rubric() { return RubricDefinition::builtin(); }

std::string example_payload() {
    return testutil::read_file(std::filesystem::path(BLT_SOURCE_DIR) / "tests/fixtures/example_payload.json");
}

json valid_payload_json(int score = 5) {
    return json::parse(testutil::payload({score, score, score, score, score}));
}

}  // namespace

TEST(Rubric, ExamplePayloadRoundTrip) {
    const ScoreSet scores = validate_response(example_payload(), rubric());
    std::array<int, kDimensionCount> got{};
    for (const auto& s : scores) got[index_of(s.dimension)] = s.score;
    EXPECT_EQ(got, (std::array<int, kDimensionCount>{9, 8, 9, 9, 8}));
    EXPECT_EQ(overall_score(scores), 43);
    for (const auto& s : scores) EXPECT_FALSE(s.explanation.empty());

    // Canonical form re-validates to the same scores.
    EXPECT_EQ(validate_response(serialize_scores(scores), rubric()), scores);
}

TEST(Rubric, AcceptsCodeFence) {
    const std::string fenced = "```json\n" + testutil::payload({1, 2, 3, 4, 5}) + "\n```";
    EXPECT_EQ(overall_score(validate_response(fenced, rubric())), 15);
}

TEST(Rubric, ScoreAboveScaleIsRangeError) {
    json p = valid_payload_json();
    p["search_over_heuristics_score"]["score"] = 11;
    EXPECT_THROW(validate_response(p.dump(), rubric()), RangeError);
    p["search_over_heuristics_score"]["score"] = -1;
    EXPECT_THROW(validate_response(p.dump(), rubric()), RangeError);
}

TEST(Rubric, BoundaryScoresAccepted) {
    EXPECT_EQ(overall_score(validate_response(testutil::payload({0, 0, 0, 0, 0}), rubric())), 0);
    EXPECT_EQ(overall_score(validate_response(testutil::payload({10, 10, 10, 10, 10}), rubric())), 50);
}

TEST(Rubric, MissingFieldIsSchemaErrorNamingIt) {
    json p = valid_payload_json();
    p.erase("generality_over_specificity_score");
    try {
        validate_response(p.dump(), rubric());
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.missing(), std::vector<std::string>{"generality_over_specificity_score"});
    }
}

TEST(Rubric, EmptyExplanationRejected) {
    json p = valid_payload_json();
    p["learning_over_engineering_score"]["explanation"] = "  ";
    EXPECT_THROW(validate_response(p.dump(), rubric()), SchemaError);
}

TEST(Rubric, NonIntegerScoreRejected) {
    json p = valid_payload_json();
    p["learning_over_engineering_score"]["score"] = 7.5;
    EXPECT_THROW(validate_response(p.dump(), rubric()), SchemaError);
    p["learning_over_engineering_score"]["score"] = "7";
    EXPECT_THROW(validate_response(p.dump(), rubric()), SchemaError);
}

TEST(Rubric, GarbageRejected) {
    EXPECT_THROW(validate_response("I think it's a 7.", rubric()), SchemaError);
    EXPECT_THROW(validate_response("[]", rubric()), SchemaError);
}

TEST(Rubric, FieldOrderDoesNotMatter) {
    const json base = valid_payload_json();
    std::vector<std::string> keys;
    for (auto it = base.begin(); it != base.end(); ++it) keys.push_back(it.key());
    std::mt19937 gen(5);
    const ScoreSet expected = validate_response(base.dump(), rubric());
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(keys.begin(), keys.end(), gen);
        ordered_json shuffled;
        for (const auto& k : keys) shuffled[k] = base.at(k);
        EXPECT_EQ(validate_response(shuffled.dump(), rubric()), expected);
    }
}

TEST(Rubric, OverallNeedsEveryDimensionOnce) {
    ScoreSet scores = validate_response(testutil::payload({1, 2, 3, 4, 5}), rubric());
    EXPECT_EQ(overall_score(scores), 15);
    std::vector<DimensionScore> four(scores.begin(), scores.begin() + 4);
    EXPECT_THROW(overall_score(four), ValidationError);
    scores[1].dimension = scores[0].dimension;
    EXPECT_THROW(overall_score(scores), ValidationError);
}

TEST(Rubric, OverallIsPermutationInvariant) {
    ScoreSet scores = validate_response(testutil::payload({3, 1, 4, 1, 5}), rubric());
    std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
    EXPECT_EQ(overall_score(scores), 14);
}

TEST(Prompt, InterpolatesVerbatim) {
    const auto p = testutil::paper("p", 2012, "Weird {abstract} Title", "Abstract with {title} and \"quotes\"\nnewline");
    const auto rendered = render_prompt(rubric(), p);
    EXPECT_NE(rendered.text.find("Title: Weird {abstract} Title\n"), std::string::npos);
    EXPECT_NE(rendered.text.find("Abstract: Abstract with {title} and \"quotes\"\nnewline"), std::string::npos);
}

TEST(Prompt, DependsOnlyOnTitleAndAbstract) {
    auto a = testutil::paper("p1", 2012, "Same", "Same abstract");
    auto b = testutil::paper("p2", 2019, "Same", "Same abstract");
    b.authors = {"Someone Else"};
    b.citation_count = 99;
    b.citations_fetched_at = "2024-07-20T00:00:00Z";
    const auto ra = render_prompt(rubric(), a);
    const auto rb = render_prompt(rubric(), b);
    EXPECT_EQ(ra.text, rb.text);
    EXPECT_EQ(ra.schema_version, rb.schema_version);
    EXPECT_EQ(ra.schema, rb.schema);
}

TEST(Prompt, EmptyAbstractRejected) {
    EXPECT_THROW(render_prompt(rubric(), testutil::paper("p", 2012, "T", "")), ValidationError);
    EXPECT_THROW(render_prompt(rubric(), testutil::paper("p", 2012, " ", "A")), ValidationError);
}

TEST(Schema, ExplanationPrecedesScore) {
    const auto schema = response_schema(rubric());
    for (Dimension d : kDimensions) {
        const auto& props = schema["properties"][dimension_field(d)]["properties"];
        auto it = props.begin();
        EXPECT_EQ(it.key(), "explanation");
        ++it;
        EXPECT_EQ(it.key(), "score");
        EXPECT_EQ(schema["properties"][dimension_field(d)]["properties"]["score"]["maximum"], 10);
    }
    EXPECT_EQ(schema["required"].size(), kDimensionCount);
}

TEST(Schema, FieldDescriptionCarriesLegend) {
    const std::string desc = rubric().field_description(Dimension::ScalabilityWithComputation);
    EXPECT_NE(desc.find("Please rate on a scale from 0 to 10, where:\n0 = "), std::string::npos);
    EXPECT_NE(desc.find(", 10 = "), std::string::npos);
}

TEST(RubricDocument, RoundTripsThroughJson) {
    const auto copy = RubricDefinition::from_json(json::parse(rubric().to_json().dump()));
    EXPECT_EQ(copy.to_json(), rubric().to_json());
    EXPECT_EQ(copy.prompt_template(), rubric().prompt_template());
}

TEST(RubricDocument, MissingDimensionRejected) {
    json doc = json::parse(rubric().to_json().dump());
    doc["dimensions"].erase("search_over_heuristics");
    EXPECT_THROW(RubricDefinition::from_json(doc), ValidationError);
}

TEST(RubricDocument, EmptyAnchorRejected) {
    json doc = json::parse(rubric().to_json().dump());
    doc["dimensions"]["search_over_heuristics"]["anchors"]["5"] = "";
    EXPECT_THROW(RubricDefinition::from_json(doc), ValidationError);
    doc = json::parse(rubric().to_json().dump());
    doc["dimensions"]["bogus"] = doc["dimensions"]["search_over_heuristics"];
    EXPECT_THROW(RubricDefinition::from_json(doc), ValidationError);
}

TEST(RubricDocument, CustomScaleEnforced) {
    json doc = json::parse(rubric().to_json().dump());
    doc["scale"] = {{"min", 1}, {"max", 5}};
    for (auto& [key, dim] : doc["dimensions"].items()) dim["anchors"] = {{"1", "low"}, {"5", "high"}};
    const auto small = RubricDefinition::from_json(doc);
    EXPECT_THROW(validate_response(testutil::payload({0, 1, 1, 1, 1}), small), RangeError);
    EXPECT_EQ(overall_score(validate_response(testutil::payload({5, 1, 1, 1, 1}), small)), 9);
}

TEST(AssessmentLine, RoundTrip) {
    const auto a = testutil::assessment("p1", "stub:hash", 2014, {1, 2, 3, 4, 5});
    EXPECT_EQ(a.overall(), 15);
    EXPECT_EQ(a.year(), 2014);
    const auto b = Assessment::from_json_line(a.to_json_line(), rubric());
    EXPECT_EQ(a, b);
}

TEST(AssessmentLine, TamperedOverallRejected) {
    auto line = json::parse(testutil::assessment("p1", "m:x", 2014, {1, 2, 3, 4, 5}).to_json_line());
    line["overall"] = 16;
    EXPECT_THROW(Assessment::from_json_line(line.dump(), rubric()), ValidationError);
    line["overall"] = 15;
    line["response"]["learning_over_engineering_score"]["score"] = 99;
    EXPECT_THROW(Assessment::from_json_line(line.dump(), rubric()), RangeError);
}
