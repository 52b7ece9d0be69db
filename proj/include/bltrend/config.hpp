#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bltrend/jsonutil.hpp"
#include "bltrend/reliability.hpp"

namespace bltrend {

inline const std::vector<std::string>& default_models() {
    static const std::vector<std::string> models = {
        "openai:gpt-4o-2024-05-13",
        "openai:gpt-4o-mini-2024-07-18",
        "anthropic:claude-3-5-sonnet-20240620",
    };
    return models;
}

/// Everything a pipeline run depends on. Paths are resolved to absolute form.
struct RunConfig {
    std::filesystem::path corpus = "data/corpus.jsonl";
    std::filesystem::path cache_dir = ".bltrend-cache";
    std::filesystem::path out = "out";
    /// Empty means the built-in rubric.
    std::filesystem::path rubric;
    /// Empty means no trend-plot annotations.
    std::filesystem::path annotations;

    std::uint64_t seed = 20240720;
    int per_year = 200;
    /// Unset bounds default to the corpus's first and last year.
    std::optional<int> year_min;
    std::optional<int> year_max;

    std::vector<std::string> models = default_models();
    double temperature = 0.0;
    int max_retries = 3;
    int parallelism = 1;
    int timeout_ms = 60000;

    std::string citation_endpoint;  // empty: env S2_BASE_URL or the public endpoint
    std::size_t fetch_batch_size = 20;
    double fetch_rate_limit = 1.0;
    int fetch_max_retries = 3;
    bool force_fetch = false;

    AlphaMetric alpha_metric = AlphaMetric::interval;
    bool standardize = false;
    bool allow_mixed_snapshots = false;
    std::size_t histogram_bins = 50;

    /// Reads a JSON object of the fields above (snake_case keys). Unknown keys
    /// are a ConfigError. Relative paths are taken relative to `base_dir`.
    static RunConfig from_json(const json& doc, const std::filesystem::path& base_dir);
    static RunConfig load(const std::filesystem::path& path);

    /// Makes relative paths absolute against `base_dir`.
    void resolve_paths(const std::filesystem::path& base_dir);

    /// Throws ConfigError on out-of-range values, malformed model ids or
    /// missing rubric/annotation files.
    void validate() const;

    /// Settings that determine results. Execution-only settings (output and
    /// cache locations, parallelism) are left out so that runs differing only
    /// in those produce identical snapshots.
    ordered_json snapshot() const;
};

}  // namespace bltrend
