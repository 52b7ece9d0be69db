#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bltrend/corpus.hpp"

namespace bltrend {

inline constexpr const char* kDefaultCitationEndpoint = "https://api.semanticscholar.org/graph/v1";
inline constexpr const char* kCitationApiKeyEnv = "S2_API_KEY";
inline constexpr const char* kCitationEndpointEnv = "S2_BASE_URL";

struct FetchOptions {
    std::string endpoint = kDefaultCitationEndpoint;
    std::size_t batch_size = 20;
    double rate_limit = 1.0;  // requests per second
    int max_retries = 3;
    bool force = false;
    std::chrono::milliseconds retry_backoff{1000};
    std::chrono::milliseconds timeout{30000};
    /// Sent as `x-api-key` when non-empty.
    std::string api_key;
    /// Timestamp source for `citations_fetched_at`.
    std::function<std::string()> clock;

    void validate() const;
};

enum class FetchStatus { fetched, skipped, failed };

struct FetchOutcome {
    std::string id;
    FetchStatus status = FetchStatus::skipped;
    int retries = 0;
    std::optional<std::int64_t> citation_count;
    std::string error;
};

struct FetchReport {
    std::vector<FetchOutcome> outcomes;  // id order
    std::size_t fetched = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
};

struct FetchResult {
    CorpusStore store;
    FetchReport report;
};

/// Looks up citation counts for every record lacking one (or all records when
/// `force`). Records with an `external_id` are looked up by id, the rest by
/// title match. Failed lookups leave the record untouched and are listed in
/// the report; nothing here throws for a single record's failure.
FetchResult fetch_citations(const CorpusStore& store, const FetchOptions& options);

/// Extracts a citation count from either lookup response shape:
/// `{"citationCount": N}` or `{"data": [{"citationCount": N}, ...]}`.
/// Throws SchemaError on anything else.
std::int64_t parse_citation_response(const std::string& body);

const char* to_string(FetchStatus status);

}  // namespace bltrend
