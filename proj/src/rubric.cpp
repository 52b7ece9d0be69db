#include "bltrend/rubric.hpp"

#include <algorithm>
#include <cctype>

#include "bltrend/digest.hpp"
#include "bltrend/errors.hpp"

namespace bltrend {

extern const char* const kBuiltinRubricJson;

namespace {

struct DimensionNames {
    std::string_view key;
    std::string_view label;
    std::string_view column;
};

constexpr std::array<DimensionNames, kDimensionCount> kNames = {{
    {"learning_over_engineering", "Learning Over Engineering", "Learning"},
    {"search_over_heuristics", "Search over Heuristics", "Search"},
    {"scalability_with_computation", "Scalability with Computation", "Scalability"},
    {"generality_over_specificity", "Generality over Specificity", "Generality"},
    {"favoring_fundamental_principles", "Favoring Fundamental Principles", "Principles"},
}};

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string require_text(const json& object, const char* field, const std::string& where) {
    auto it = object.find(field);
    if (it == object.end() || !it->is_string() || is_blank(it->get<std::string>())) {
        throw ValidationError("rubric: " + where + " needs a non-empty '" + field + "'");
    }
    return it->get<std::string>();
}

}  // namespace

std::string_view dimension_key(Dimension d) { return kNames[index_of(d)].key; }
std::string_view dimension_label(Dimension d) { return kNames[index_of(d)].label; }
std::string_view dimension_column(Dimension d) { return kNames[index_of(d)].column; }

std::optional<Dimension> dimension_from_key(std::string_view key) {
    for (Dimension d : kDimensions) {
        if (dimension_key(d) == key) return d;
    }
    return std::nullopt;
}

std::string dimension_field(Dimension d) { return std::string(dimension_key(d)) + "_score"; }

RubricDefinition RubricDefinition::from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("rubric document must be a JSON object");
    RubricDefinition r;
    r.version_ = require_text(doc, "version", "document");
    r.prompt_template_ = require_text(doc, "prompt_template", "document");

    const auto scale = doc.find("scale");
    if (scale == doc.end() || !scale->is_object() || !scale->contains("min") || !scale->contains("max") ||
        !scale->at("min").is_number_integer() || !scale->at("max").is_number_integer()) {
        throw ValidationError("rubric: 'scale' needs integer 'min' and 'max'");
    }
    r.scale_min_ = scale->at("min").get<int>();
    r.scale_max_ = scale->at("max").get<int>();
    if (r.scale_min_ >= r.scale_max_) throw ValidationError("rubric: scale min must be below max");

    const auto fields = doc.find("score_fields");
    if (fields == doc.end() || !fields->is_object()) throw ValidationError("rubric: missing 'score_fields'");
    r.explanation_description_ = require_text(*fields, "explanation", "score_fields");
    r.score_description_ = require_text(*fields, "score", "score_fields");

    const auto dims = doc.find("dimensions");
    if (dims == doc.end() || !dims->is_object()) throw ValidationError("rubric: missing 'dimensions'");
    for (auto it = dims->begin(); it != dims->end(); ++it) {
        if (!dimension_from_key(it.key())) throw ValidationError("rubric: unknown dimension '" + it.key() + "'");
    }
    for (Dimension d : kDimensions) {
        const std::string key(dimension_key(d));
        auto it = dims->find(key);
        if (it == dims->end() || !it->is_object()) throw ValidationError("rubric: missing dimension '" + key + "'");
        DimensionRubric& dr = r.dimensions_[index_of(d)];
        dr.description = require_text(*it, "description", key);
        const auto anchors = it->find("anchors");
        if (anchors == it->end() || !anchors->is_object() || anchors->empty()) {
            throw ValidationError("rubric: dimension '" + key + "' needs anchors");
        }
        for (auto a = anchors->begin(); a != anchors->end(); ++a) {
            int point = 0;
            try {
                std::size_t used = 0;
                point = std::stoi(a.key(), &used);
                if (used != a.key().size()) throw std::invalid_argument(a.key());
            } catch (const std::exception&) {
                throw ValidationError("rubric: anchor key '" + a.key() + "' in '" + key + "' is not an integer");
            }
            if (point < r.scale_min_ || point > r.scale_max_) {
                throw ValidationError("rubric: anchor " + a.key() + " in '" + key + "' is outside the scale");
            }
            if (!a->is_string() || is_blank(a->get<std::string>())) {
                throw ValidationError("rubric: anchor " + a.key() + " in '" + key + "' is empty");
            }
            dr.anchors.emplace(point, a->get<std::string>());
        }
    }
    return r;
}

RubricDefinition RubricDefinition::load(const std::filesystem::path& path) {
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw ValidationError("rubric " + path.string() + " is not valid JSON");
    return from_json(doc);
}

const RubricDefinition& RubricDefinition::builtin() {
    static const RubricDefinition rubric = from_json(json::parse(kBuiltinRubricJson));
    return rubric;
}

ordered_json RubricDefinition::to_json() const {
    ordered_json doc;
    doc["version"] = version_;
    doc["scale"] = {{"min", scale_min_}, {"max", scale_max_}};
    doc["prompt_template"] = prompt_template_;
    doc["score_fields"] = {{"explanation", explanation_description_}, {"score", score_description_}};
    ordered_json dims = ordered_json::object();
    for (Dimension d : kDimensions) {
        ordered_json anchors = ordered_json::object();
        for (const auto& [point, text] : dimension(d).anchors) anchors[std::to_string(point)] = text;
        dims[std::string(dimension_key(d))] = {{"description", dimension(d).description}, {"anchors", anchors}};
    }
    doc["dimensions"] = dims;
    return doc;
}

std::string RubricDefinition::field_description(Dimension d) const {
    const DimensionRubric& dr = dimension(d);
    std::string out = dr.description;
    out += "\n\nPlease rate on a scale from " + std::to_string(scale_min_) + " to " + std::to_string(scale_max_) +
           ", where:\n";
    bool first = true;
    for (const auto& [point, text] : dr.anchors) {
        if (!first) out += ", ";
        out += std::to_string(point) + " = " + text;
        first = false;
    }
    return out;
}

ordered_json response_schema(const RubricDefinition& rubric) {
    ordered_json score_object;
    score_object["type"] = "object";
    score_object["properties"]["explanation"] = {{"type", "string"},
                                                 {"description", rubric.explanation_description()}};
    score_object["properties"]["score"] = {{"type", "integer"},
                                           {"description", rubric.score_description()},
                                           {"minimum", rubric.scale_min()},
                                           {"maximum", rubric.scale_max()}};
    score_object["required"] = {"explanation", "score"};
    score_object["additionalProperties"] = false;

    ordered_json schema;
    schema["title"] = "BitterLessonScores";
    schema["type"] = "object";
    ordered_json props = ordered_json::object();
    ordered_json required = ordered_json::array();
    for (Dimension d : kDimensions) {
        ordered_json field = score_object;
        field["description"] = rubric.field_description(d);
        props[dimension_field(d)] = std::move(field);
        required.push_back(dimension_field(d));
    }
    schema["properties"] = std::move(props);
    schema["required"] = std::move(required);
    schema["additionalProperties"] = false;
    return schema;
}

RenderedPrompt render_prompt(const RubricDefinition& rubric, const PaperRecord& paper) {
    if (is_blank(paper.title)) throw ValidationError("paper " + paper.id + " has an empty title");
    if (is_blank(paper.abstract)) throw ValidationError("paper " + paper.id + " has an empty abstract; cannot score");

    static constexpr std::string_view kTitle = "{title}";
    static constexpr std::string_view kAbstract = "{abstract}";
    const std::string& tpl = rubric.prompt_template();
    std::string text;
    text.reserve(tpl.size() + paper.title.size() + paper.abstract.size());
    for (std::size_t i = 0; i < tpl.size();) {
        const std::string_view rest = std::string_view(tpl).substr(i);
        if (rest.starts_with(kTitle)) {
            text += paper.title;
            i += kTitle.size();
        } else if (rest.starts_with(kAbstract)) {
            text += paper.abstract;
            i += kAbstract.size();
        } else {
            text.push_back(tpl[i++]);
        }
    }

    RenderedPrompt out;
    out.text = std::move(text);
    out.schema = response_schema(rubric);
    out.schema_version = rubric.version() + "#" + sha256_hex(out.schema.dump()).substr(0, 16);
    return out;
}

ScoreSet validate_response(std::string_view raw, const RubricDefinition& rubric) {
    const json payload = parse_lenient_json(raw);

    std::vector<std::string> missing;
    for (Dimension d : kDimensions) {
        if (!payload.contains(dimension_field(d))) missing.push_back(dimension_field(d));
    }
    if (!missing.empty()) {
        std::string names;
        for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
        throw SchemaError("response is missing " + names, missing);
    }

    ScoreSet scores{};
    for (Dimension d : kDimensions) {
        const std::string field = dimension_field(d);
        const json& entry = payload.at(field);
        if (!entry.is_object()) throw SchemaError(field + " must be an object");

        auto expl = entry.find("explanation");
        if (expl == entry.end()) throw SchemaError(field + ".explanation is missing", {field + ".explanation"});
        if (!expl->is_string()) throw SchemaError(field + ".explanation must be a string");
        if (is_blank(expl->get<std::string>())) throw SchemaError(field + ".explanation is empty");

        auto score = entry.find("score");
        if (score == entry.end()) throw SchemaError(field + ".score is missing", {field + ".score"});
        if (!score->is_number_integer()) {
            throw SchemaError(field + ".score must be an integer, got " + score->dump());
        }
        const bool in_range = score->is_number_unsigned()
                                  ? score->get<std::uint64_t>() <= static_cast<std::uint64_t>(rubric.scale_max()) &&
                                        static_cast<std::int64_t>(score->get<std::uint64_t>()) >= rubric.scale_min()
                                  : score->get<std::int64_t>() >= rubric.scale_min() &&
                                        score->get<std::int64_t>() <= rubric.scale_max();
        if (!in_range) {
            throw RangeError(field + ".score " + score->dump() + " outside [" + std::to_string(rubric.scale_min()) +
                             ", " + std::to_string(rubric.scale_max()) + "]");
        }
        scores[index_of(d)] = DimensionScore{d, score->get<int>(), expl->get<std::string>()};
    }
    return scores;
}

int overall_score(std::span<const DimensionScore> scores) {
    if (scores.size() != kDimensionCount) {
        throw ValidationError("overall score needs exactly " + std::to_string(kDimensionCount) + " dimension scores");
    }
    std::array<bool, kDimensionCount> seen{};
    int total = 0;
    for (const DimensionScore& s : scores) {
        const std::size_t i = index_of(s.dimension);
        if (i >= kDimensionCount) throw ValidationError("unknown dimension in score set");
        if (seen[i]) throw ValidationError("duplicate score for " + std::string(dimension_key(s.dimension)));
        seen[i] = true;
        total += s.score;
    }
    return total;
}

std::string serialize_scores(const ScoreSet& scores) {
    ordered_json payload;
    for (const DimensionScore& s : scores) {
        ordered_json entry;
        entry["explanation"] = s.explanation;
        entry["score"] = s.score;
        payload[dimension_field(s.dimension)] = std::move(entry);
    }
    return payload.dump();
}

Assessment Assessment::from_response(std::string paper_id, std::string model_id, int year, std::string_view raw,
                                     const RubricDefinition& rubric) {
    if (paper_id.empty() || model_id.empty()) throw ValidationError("assessment needs paper and model ids");
    Assessment a;
    a.scores_ = validate_response(raw, rubric);
    a.overall_ = overall_score(a.scores_);
    a.paper_id_ = std::move(paper_id);
    a.model_id_ = std::move(model_id);
    a.year_ = year;
    return a;
}

std::string Assessment::to_json_line() const {
    ordered_json line;
    line["paper_id"] = paper_id_;
    line["model"] = model_id_;
    line["year"] = year_;
    line["overall"] = overall_;
    line["response"] = ordered_json::parse(serialize_scores(scores_));
    return line.dump();
}

Assessment Assessment::from_json_line(std::string_view text, const RubricDefinition& rubric) {
    const json line = json::parse(text, nullptr, false);
    if (line.is_discarded() || !line.is_object()) throw ValidationError("assessment line is not a JSON object");
    for (const char* field : {"paper_id", "model", "year", "response"}) {
        if (!line.contains(field)) throw ValidationError(std::string("assessment line lacks '") + field + "'");
    }
    if (!line["paper_id"].is_string() || !line["model"].is_string() || !line["year"].is_number_integer()) {
        throw ValidationError("assessment line has mistyped ids or year");
    }
    Assessment a = from_response(line["paper_id"].get<std::string>(), line["model"].get<std::string>(),
                                 line["year"].get<int>(), line["response"].dump(), rubric);
    if (auto overall = line.find("overall"); overall != line.end() && *overall != a.overall_) {
        throw ValidationError("assessment for " + a.paper_id_ + " records overall " + overall->dump() +
                              " but its scores sum to " + std::to_string(a.overall_));
    }
    return a;
}

}  // namespace bltrend
