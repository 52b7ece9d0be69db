#include "bltrend/judge.hpp"

#include <algorithm>
#include <optional>
#include <thread>

#include "bltrend/errors.hpp"
#include "bltrend/timeutil.hpp"

namespace bltrend {

namespace {

/// Serializes work on one cache key so concurrent identical prompts cost one call.
class KeyLocks {
public:
    std::shared_ptr<std::mutex> get(const std::string& key) {
        std::lock_guard lock(mu_);
        auto& slot = locks_[key];
        if (!slot) slot = std::make_shared<std::mutex>();
        return slot;
    }

private:
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

KeyLocks& key_locks() {
    static KeyLocks locks;
    return locks;
}

}  // namespace

void JudgeConfig::validate() const {
    if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
    if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

bool BatchResult::has_config_error() const {
    return std::any_of(failures.begin(), failures.end(), [](const PairFailure& f) { return f.kind == "ConfigError"; });
}

Judge::Judge(const RubricDefinition& rubric, JudgeConfig config, ResponseCache* cache, BackendFactory factory)
    : rubric_(rubric), config_(config), cache_(cache), factory_(std::move(factory)) {
    config_.validate();
}

std::shared_ptr<Backend> Judge::backend_for(const ModelId& model) {
    std::lock_guard lock(backends_mu_);
    auto it = backends_.find(model);
    if (it != backends_.end()) return it->second;
    auto backend = factory_(model);
    if (!backend) throw ConfigError("no backend for " + model.str());
    backends_.emplace(model, backend);
    return backend;
}

ScoreOutcome Judge::score_paper(const PaperRecord& paper, const ModelId& model) {
    const RenderedPrompt prompt = render_prompt(rubric_, paper);
    const std::string model_id = model.str();
    const std::string key = ResponseCache::key_for(model_id, prompt.text, prompt.schema_version);

    std::shared_ptr<std::mutex> key_mu;
    std::unique_lock<std::mutex> key_lock;
    if (cache_) {
        key_mu = key_locks().get(cache_->dir().string() + "/" + key);
        key_lock = std::unique_lock(*key_mu);
        if (auto entry = cache_->lookup(key)) {
            try {
                Assessment a = Assessment::from_response(paper.id, model_id, paper.year, entry->response, rubric_);
                cache_hits_.fetch_add(1);
                return {std::move(a), 0, true};
            } catch (const Error&) {
                // A cache entry that no longer validates is treated as absent.
            }
        }
        cache_misses_.fetch_add(1);
    }

    auto backend = backend_for(model);
    JudgeRequest request{model, paper, prompt, config_.temperature, config_.timeout, {}};
    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) retries_.fetch_add(1);
        std::string raw;
        try {
            backend_calls_.fetch_add(1);
            raw = backend->complete(request);
        } catch (const TransportError& e) {
            last_failure = e.what();
            continue;
        }
        try {
            Assessment a = Assessment::from_response(paper.id, model_id, paper.year, raw, rubric_);
            if (cache_) {
                cache_->store({key, model_id, prompt.schema_version, serialize_scores(a.scores()), utc_now_iso8601()});
            }
            return {std::move(a), attempt, false};
        } catch (const SchemaError& e) {
            last_failure = std::string("SchemaError: ") + e.what();
        } catch (const RangeError& e) {
            last_failure = std::string("RangeError: ") + e.what();
        }
        request.rejected.push_back({raw, last_failure});
    }
    throw JudgeError("paper " + paper.id + " with " + model_id + " failed after " +
                     std::to_string(config_.max_retries + 1) + " attempts; last failure: " + last_failure);
}

BatchResult Judge::score_batch(std::span<const PaperRecord> papers, std::span<const ModelId> models) {
    std::vector<const PaperRecord*> sorted_papers;
    for (const PaperRecord& p : papers) sorted_papers.push_back(&p);
    std::sort(sorted_papers.begin(), sorted_papers.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::vector<ModelId> sorted_models(models.begin(), models.end());
    std::sort(sorted_models.begin(), sorted_models.end(),
              [](const ModelId& a, const ModelId& b) { return a.str() < b.str(); });
    sorted_models.erase(std::unique(sorted_models.begin(), sorted_models.end()), sorted_models.end());

    const std::size_t pairs = sorted_papers.size() * sorted_models.size();
    std::vector<std::optional<Assessment>> results(pairs);
    std::vector<std::optional<PairFailure>> failures(pairs);
    const JudgeStats before = stats();

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < pairs; i = next.fetch_add(1)) {
            const PaperRecord& paper = *sorted_papers[i / sorted_models.size()];
            const ModelId& model = sorted_models[i % sorted_models.size()];
            try {
                results[i] = score_paper(paper, model).assessment;
            } catch (const Error& e) {
                failures[i] = PairFailure{paper.id, model.str(), e.kind(), e.what()};
            } catch (const std::exception& e) {
                failures[i] = PairFailure{paper.id, model.str(), "Error", e.what()};
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config_.parallelism), pairs);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }

    BatchResult out;
    for (std::size_t i = 0; i < pairs; ++i) {
        if (results[i]) out.assessments.push_back(std::move(*results[i]));
        if (failures[i]) out.failures.push_back(std::move(*failures[i]));
    }
    const JudgeStats after = stats();
    out.stats = {after.backend_calls - before.backend_calls, after.cache_hits - before.cache_hits,
                 after.cache_misses - before.cache_misses, after.retries - before.retries};
    return out;
}

JudgeStats Judge::stats() const {
    return {backend_calls_.load(), cache_hits_.load(), cache_misses_.load(), retries_.load()};
}

std::string serialize_assessments(std::span<const Assessment> assessments) {
    std::string out;
    for (const Assessment& a : assessments) {
        out += a.to_json_line();
        out += '\n';
    }
    return out;
}

std::vector<Assessment> parse_assessments(std::string_view text, const RubricDefinition& rubric) {
    std::vector<Assessment> out;
    std::size_t lineno = 0;
    for (std::size_t start = 0; start < text.size();) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(start, end - start);
        ++lineno;
        start = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            out.push_back(Assessment::from_json_line(line, rubric));
        } catch (const Error& e) {
            throw ValidationError("assessments line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace bltrend
