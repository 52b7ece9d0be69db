#include "bltrend/citations.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "bltrend/errors.hpp"
#include "bltrend/http.hpp"
#include "bltrend/timeutil.hpp"

namespace bltrend {

namespace {

/// Spaces request start times at least 1/rate apart across all workers.
class RateLimiter {
public:
    explicit RateLimiter(double per_second)
        : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(1.0 / per_second))) {}

    void acquire() {
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard lock(mu_);
            const auto now = std::chrono::steady_clock::now();
            slot = std::max(now, next_);
            next_ = slot + interval_;
        }
        std::this_thread::sleep_until(slot);
    }

private:
    std::mutex mu_;
    std::chrono::steady_clock::duration interval_;
    std::chrono::steady_clock::time_point next_{};
};

std::string lookup_url(const FetchOptions& options, const PaperRecord& record) {
    if (record.external_id && !record.external_id->empty()) {
        return http::join_url(options.endpoint, "/paper/" + http::url_encode(*record.external_id, ":/") +
                                                    "?fields=citationCount");
    }
    return http::join_url(options.endpoint,
                          "/paper/search/match?query=" + http::url_encode(record.title) + "&fields=citationCount");
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

FetchOutcome fetch_one(const PaperRecord& record, const FetchOptions& options, RateLimiter& limiter) {
    FetchOutcome outcome;
    outcome.id = record.id;
    http::Request request;
    request.url = lookup_url(options, record);
    request.timeout = options.timeout;
    if (!options.api_key.empty()) request.headers.emplace_back("x-api-key", options.api_key);

    for (int attempt = 0;; ++attempt) {
        outcome.retries = attempt;
        std::string failure;
        bool retry = true;
        try {
            limiter.acquire();
            const http::Response response = http::send(request);
            if (response.status == 200) {
                outcome.citation_count = parse_citation_response(response.body);
                outcome.status = FetchStatus::fetched;
                return outcome;
            }
            failure = "HTTP " + std::to_string(response.status);
            retry = retryable_status(response.status);
        } catch (const SchemaError& e) {
            failure = std::string("malformed response: ") + e.what();
        } catch (const TransportError& e) {
            failure = e.what();
        }
        if (!retry || attempt >= options.max_retries) {
            outcome.status = FetchStatus::failed;
            outcome.error = failure;
            return outcome;
        }
        if (options.retry_backoff.count() > 0) std::this_thread::sleep_for(options.retry_backoff * (attempt + 1));
    }
}

}  // namespace

void FetchOptions::validate() const {
    if (endpoint.empty()) throw ConfigError("citation endpoint is empty");
    if (batch_size < 1) throw ConfigError("batch_size must be positive");
    if (!(rate_limit > 0) || !std::isfinite(rate_limit)) throw ConfigError("rate_limit must be a positive number");
    if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
}

const char* to_string(FetchStatus status) {
    switch (status) {
        case FetchStatus::fetched: return "fetched";
        case FetchStatus::skipped: return "skipped";
        case FetchStatus::failed: return "failed";
    }
    return "unknown";
}

std::int64_t parse_citation_response(const std::string& body) {
    const json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) throw SchemaError("citation response is not a JSON object");
    const json* holder = &parsed;
    if (auto data = parsed.find("data"); data != parsed.end()) {
        if (!data->is_array() || data->empty()) throw SchemaError("citation response has no matches");
        holder = &data->front();
    }
    auto count = holder->find("citationCount");
    if (count == holder->end() || !count->is_number_integer()) {
        throw SchemaError("citation response lacks an integer citationCount");
    }
    const auto value = count->get<std::int64_t>();
    if (value < 0) throw SchemaError("citation response has a negative citationCount");
    return value;
}

FetchResult fetch_citations(const CorpusStore& store, const FetchOptions& options) {
    options.validate();
    const auto clock = options.clock ? options.clock : std::function<std::string()>(utc_now_iso8601);

    std::vector<const PaperRecord*> records;
    for (const PaperRecord& r : store.records()) records.push_back(&r);
    std::sort(records.begin(), records.end(), [](auto* a, auto* b) { return a->id < b->id; });

    FetchResult result{store, {}};
    RateLimiter limiter(options.rate_limit);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(options.batch_size, static_cast<std::size_t>(std::ceil(options.rate_limit))));

    for (std::size_t begin = 0; begin < records.size(); begin += options.batch_size) {
        const std::size_t end = std::min(records.size(), begin + options.batch_size);
        std::vector<FetchOutcome> batch(end - begin);
        std::atomic<std::size_t> next{begin};

        auto work = [&] {
            for (std::size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1)) {
                const PaperRecord& r = *records[i];
                if (!options.force && r.citation_count && r.citations_fetched_at) {
                    batch[i - begin].id = r.id;
                    batch[i - begin].status = FetchStatus::skipped;
                    continue;
                }
                batch[i - begin] = fetch_one(r, options, limiter);
            }
        };
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < std::min(workers, end - begin); ++w) pool.emplace_back(work);
        work();
        pool.clear();

        // Applied in id order so the merged store is independent of completion order.
        const std::string fetched_at = clock();
        for (FetchOutcome& outcome : batch) {
            switch (outcome.status) {
                case FetchStatus::fetched: {
                    PaperRecord updated = result.store.at(outcome.id);
                    updated.citation_count = outcome.citation_count;
                    updated.citations_fetched_at = fetched_at;
                    result.store.replace(std::move(updated));
                    ++result.report.fetched;
                    break;
                }
                case FetchStatus::skipped: ++result.report.skipped; break;
                case FetchStatus::failed: ++result.report.failed; break;
            }
            result.report.outcomes.push_back(std::move(outcome));
        }
    }
    return result;
}

}  // namespace bltrend
