#include "bltrend/config.hpp"

#include <set>

#include "bltrend/backend.hpp"
#include "bltrend/errors.hpp"

namespace bltrend {

namespace {

template <typename T>
void read(const json& doc, const char* key, T& target) {
    if (!doc.contains(key) || doc[key].is_null()) return;
    try {
        target = doc[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

void read_path(const json& doc, const char* key, std::filesystem::path& target) {
    std::string s;
    read(doc, key, s);
    if (doc.contains(key)) target = s;
}

std::filesystem::path absolute_against(const std::filesystem::path& p, const std::filesystem::path& base) {
    if (p.empty() || p.is_absolute()) return p.lexically_normal();
    return (base / p).lexically_normal();
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "corpus",       "cache_dir",        "out",         "rubric",         "annotations",
        "seed",         "per_year",         "year_min",    "year_max",       "models",
        "temperature",  "max_retries",      "parallelism", "timeout_ms",     "citation_endpoint",
        "fetch_batch_size", "fetch_rate_limit", "fetch_max_retries", "force_fetch", "alpha_metric",
        "standardize",  "allow_mixed_snapshots", "histogram_bins"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
    }

    RunConfig c;
    read_path(doc, "corpus", c.corpus);
    read_path(doc, "cache_dir", c.cache_dir);
    read_path(doc, "out", c.out);
    read_path(doc, "rubric", c.rubric);
    read_path(doc, "annotations", c.annotations);
    read(doc, "seed", c.seed);
    read(doc, "per_year", c.per_year);
    for (auto [key, target] : {std::pair{"year_min", &c.year_min}, std::pair{"year_max", &c.year_max}}) {
        if (!doc.contains(key) || doc[key].is_null()) continue;
        int year = 0;
        read(doc, key, year);
        *target = year;
    }
    read(doc, "models", c.models);
    read(doc, "temperature", c.temperature);
    read(doc, "max_retries", c.max_retries);
    read(doc, "parallelism", c.parallelism);
    read(doc, "timeout_ms", c.timeout_ms);
    read(doc, "citation_endpoint", c.citation_endpoint);
    read(doc, "fetch_batch_size", c.fetch_batch_size);
    read(doc, "fetch_rate_limit", c.fetch_rate_limit);
    read(doc, "fetch_max_retries", c.fetch_max_retries);
    read(doc, "force_fetch", c.force_fetch);
    std::string metric;
    read(doc, "alpha_metric", metric);
    if (!metric.empty()) {
        try {
            c.alpha_metric = alpha_metric_from_string(metric);
        } catch (const ValidationError& e) {
            throw ConfigError(e.what());
        }
    }
    read(doc, "standardize", c.standardize);
    read(doc, "allow_mixed_snapshots", c.allow_mixed_snapshots);
    read(doc, "histogram_bins", c.histogram_bins);
    c.resolve_paths(base_dir);
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(doc, std::filesystem::absolute(path).parent_path());
}

void RunConfig::resolve_paths(const std::filesystem::path& base_dir) {
    corpus = absolute_against(corpus, base_dir);
    cache_dir = absolute_against(cache_dir, base_dir);
    out = absolute_against(out, base_dir);
    rubric = absolute_against(rubric, base_dir);
    annotations = absolute_against(annotations, base_dir);
}

void RunConfig::validate() const {
    if (per_year <= 0) throw ConfigError("per_year must be positive");
    if (year_min && year_max && *year_min > *year_max) throw ConfigError("year_min exceeds year_max");
    if (models.empty()) throw ConfigError("at least one model is required");
    std::set<std::string> seen;
    for (const auto& m : models) {
        ModelId::parse(m);
        if (!seen.insert(m).second) throw ConfigError("model '" + m + "' listed twice");
    }
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw ConfigError("temperature must lie in [0, 2]");
    if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
    if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (timeout_ms <= 0) throw ConfigError("timeout_ms must be positive");
    if (fetch_batch_size == 0) throw ConfigError("fetch_batch_size must be positive");
    if (!(fetch_rate_limit > 0.0)) throw ConfigError("fetch_rate_limit must be positive");
    if (fetch_max_retries < 0) throw ConfigError("fetch_max_retries must be non-negative");
    if (histogram_bins == 0) throw ConfigError("histogram_bins must be positive");
    if (!rubric.empty() && !std::filesystem::exists(rubric)) {
        throw ConfigError("rubric file " + rubric.string() + " does not exist");
    }
    if (!annotations.empty() && !std::filesystem::exists(annotations)) {
        throw ConfigError("annotation file " + annotations.string() + " does not exist");
    }
}

ordered_json RunConfig::snapshot() const {
    ordered_json j;
    j["corpus"] = corpus.string();
    j["rubric"] = rubric.empty() ? "builtin" : rubric.string();
    j["annotations"] = annotations.empty() ? ordered_json(nullptr) : ordered_json(annotations.string());
    j["seed"] = seed;
    j["per_year"] = per_year;
    j["year_min"] = year_min ? ordered_json(*year_min) : ordered_json(nullptr);
    j["year_max"] = year_max ? ordered_json(*year_max) : ordered_json(nullptr);
    j["models"] = models;
    j["temperature"] = temperature;
    j["max_retries"] = max_retries;
    j["timeout_ms"] = timeout_ms;
    j["citation_endpoint"] = citation_endpoint;
    j["fetch_batch_size"] = fetch_batch_size;
    j["fetch_rate_limit"] = fetch_rate_limit;
    j["fetch_max_retries"] = fetch_max_retries;
    j["force_fetch"] = force_fetch;
    j["alpha_metric"] = std::string(to_string(alpha_metric));
    j["standardize"] = standardize;
    j["allow_mixed_snapshots"] = allow_mixed_snapshots;
    j["histogram_bins"] = histogram_bins;
    return j;
}

}  // namespace bltrend
