#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "bltrend/backend.hpp"
#include "bltrend/cache.hpp"
#include "bltrend/corpus.hpp"
#include "bltrend/rubric.hpp"

namespace bltrend {

struct JudgeConfig {
    double temperature = 0.0;
    int max_retries = 3;
    int parallelism = 1;
    std::chrono::milliseconds timeout{60000};

    void validate() const;
};

struct JudgeStats {
    std::uint64_t backend_calls = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t retries = 0;

    double hit_rate() const {
        const auto total = cache_hits + cache_misses;
        return total > 0 ? static_cast<double>(cache_hits) / static_cast<double>(total) : 0.0;
    }
};

struct ScoreOutcome {
    Assessment assessment;
    int retries = 0;
    bool cache_hit = false;
};

struct PairFailure {
    std::string paper_id;
    std::string model_id;
    std::string kind;  // error kind, e.g. "JudgeError"
    std::string message;
};

struct BatchResult {
    std::vector<Assessment> assessments;  // ordered by (paper_id, model_id)
    std::vector<PairFailure> failures;    // same order
    JudgeStats stats;                     // for this batch only

    bool has_config_error() const;
};

using BackendFactory = std::function<std::shared_ptr<Backend>(const ModelId&)>;

/// Scores papers against the rubric through one or more backends, with an
/// optional on-disk response cache. Thread-safe; `score_batch` fans out to
/// `config.parallelism` workers.
class Judge {
public:
    Judge(const RubricDefinition& rubric, JudgeConfig config, ResponseCache* cache = nullptr,
          BackendFactory factory = make_backend);

    /// Cache hit returns without touching the backend. On a rejected answer
    /// the request is retried with the rejection reason attached, at most
    /// `max_retries` times; then JudgeError. ConfigError is never retried.
    ScoreOutcome score_paper(const PaperRecord& paper, const ModelId& model);

    /// One assessment per successful (paper, model) pair. A failing pair is
    /// recorded in `failures` and never aborts the batch.
    BatchResult score_batch(std::span<const PaperRecord> papers, std::span<const ModelId> models);

    JudgeStats stats() const;
    const JudgeConfig& config() const noexcept { return config_; }

private:
    std::shared_ptr<Backend> backend_for(const ModelId& model);

    const RubricDefinition& rubric_;
    JudgeConfig config_;
    ResponseCache* cache_;
    BackendFactory factory_;

    std::mutex backends_mu_;
    std::map<ModelId, std::shared_ptr<Backend>> backends_;

    std::atomic<std::uint64_t> backend_calls_{0};
    std::atomic<std::uint64_t> cache_hits_{0};
    std::atomic<std::uint64_t> cache_misses_{0};
    std::atomic<std::uint64_t> retries_{0};
};

/// Reads/writes assessments as JSON lines. Reading re-validates every payload.
std::string serialize_assessments(std::span<const Assessment> assessments);
std::vector<Assessment> parse_assessments(std::string_view text, const RubricDefinition& rubric);

}  // namespace bltrend
