#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bltrend/corpus.hpp"
#include "bltrend/jsonutil.hpp"

namespace bltrend {

/// The five rubric axes, in table-column order.
enum class Dimension {
    LearningOverEngineering,
    SearchOverHeuristics,
    ScalabilityWithComputation,
    GeneralityOverSpecificity,
    FavoringFundamentalPrinciples,
};

inline constexpr std::size_t kDimensionCount = 5;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::LearningOverEngineering,    Dimension::SearchOverHeuristics,
    Dimension::ScalabilityWithComputation, Dimension::GeneralityOverSpecificity,
    Dimension::FavoringFundamentalPrinciples,
};

/// snake_case key, e.g. "learning_over_engineering".
std::string_view dimension_key(Dimension d);
/// Human label, e.g. "Learning Over Engineering".
std::string_view dimension_label(Dimension d);
/// One-word column header used in the per-dimension regression table.
std::string_view dimension_column(Dimension d);
std::optional<Dimension> dimension_from_key(std::string_view key);
/// Name of the payload field carrying this dimension ("<key>_score").
std::string dimension_field(Dimension d);

inline std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

struct DimensionRubric {
    /// Bold heading plus the guiding question.
    std::string description;
    /// Scale point -> anchor text; ascending.
    std::map<int, std::string> anchors;
};

/// Rubric document: prompt template, per-dimension questions with anchor
/// texts, and scale bounds. Construction validates that every dimension is
/// present and every anchor is non-empty.
class RubricDefinition {
public:
    static RubricDefinition from_json(const json& document);
    static RubricDefinition load(const std::filesystem::path& path);
    /// The shipped bitter-lesson rubric.
    static const RubricDefinition& builtin();

    ordered_json to_json() const;

    const std::string& version() const noexcept { return version_; }
    const std::string& prompt_template() const noexcept { return prompt_template_; }
    int scale_min() const noexcept { return scale_min_; }
    int scale_max() const noexcept { return scale_max_; }
    const DimensionRubric& dimension(Dimension d) const { return dimensions_[index_of(d)]; }

    /// Field description sent for one dimension: question, blank line, rating legend.
    std::string field_description(Dimension d) const;

    const std::string& explanation_description() const noexcept { return explanation_description_; }
    const std::string& score_description() const noexcept { return score_description_; }

private:
    RubricDefinition() = default;

    std::string version_;
    std::string prompt_template_;
    int scale_min_ = 0;
    int scale_max_ = 10;
    std::string explanation_description_;
    std::string score_description_;
    std::array<DimensionRubric, kDimensionCount> dimensions_;
};

struct RenderedPrompt {
    std::string text;
    /// JSON schema the response must satisfy. Key order is significant:
    /// `explanation` precedes `score` in every dimension object.
    ordered_json schema;
    /// Rubric version plus a digest of `schema`; part of every cache key.
    std::string schema_version;
};

/// Interpolates {title} and {abstract} (and nothing else) into the template.
/// Throws ValidationError when either is empty.
RenderedPrompt render_prompt(const RubricDefinition& rubric, const PaperRecord& paper);

ordered_json response_schema(const RubricDefinition& rubric);

struct DimensionScore {
    Dimension dimension{};
    int score = 0;
    std::string explanation;

    bool operator==(const DimensionScore&) const = default;
};

using ScoreSet = std::array<DimensionScore, kDimensionCount>;

/// The only way a judge payload becomes scores. Throws SchemaError (missing
/// field, wrong type, non-integer score, empty explanation) or RangeError
/// (score outside the rubric scale).
ScoreSet validate_response(std::string_view raw, const RubricDefinition& rubric);

/// Sum of the five scores. Throws ValidationError unless each dimension appears exactly once.
int overall_score(std::span<const DimensionScore> scores);

/// Canonical payload text for a validated score set (round-trips through validate_response).
std::string serialize_scores(const ScoreSet& scores);

/// One (paper, judge model) scoring event. Only constructible from a judge
/// payload, which is validated on the way in.
class Assessment {
public:
    static Assessment from_response(std::string paper_id, std::string model_id, int year, std::string_view raw,
                                    const RubricDefinition& rubric);

    const std::string& paper_id() const noexcept { return paper_id_; }
    const std::string& model_id() const noexcept { return model_id_; }
    int year() const noexcept { return year_; }
    const ScoreSet& scores() const noexcept { return scores_; }
    int score(Dimension d) const { return scores_[index_of(d)].score; }
    int overall() const noexcept { return overall_; }

    /// One JSON line: paper_id, model, year, overall, response.
    std::string to_json_line() const;
    /// Parses a line written by to_json_line; the embedded payload is re-validated.
    static Assessment from_json_line(std::string_view line, const RubricDefinition& rubric);

    bool operator==(const Assessment&) const = default;

private:
    Assessment() = default;

    std::string paper_id_;
    std::string model_id_;
    int year_ = 0;
    ScoreSet scores_{};
    int overall_ = 0;
};

}  // namespace bltrend
