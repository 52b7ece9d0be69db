#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ranges>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bltrend/jsonutil.hpp"

namespace bltrend {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

/// One corpus item. `extra` holds fields this version does not know about so
/// that a load/save cycle keeps them.
struct PaperRecord {
    std::string id;
    int year = 0;
    std::string title;
    std::vector<std::string> authors;
    std::string abstract;
    std::optional<std::int64_t> citation_count;
    std::optional<std::string> citations_fetched_at;
    /// Identifier understood by the citation service (e.g. a Semantic Scholar paper id or "DOI:...").
    std::optional<std::string> external_id;
    json extra = json::object();

    bool operator==(const PaperRecord&) const = default;
};

/// Throws ValidationError if the record breaks a field invariant.
void validate_record(const PaperRecord& record);

PaperRecord record_from_json(const json& object);
ordered_json record_to_json(const PaperRecord& record);

struct CorpusProvenance {
    std::string source_path;
    std::string loaded_at;
};

/// Id-keyed record collection. Iteration is ordered by (year, id).
class CorpusStore {
public:
    using Key = std::pair<int, std::string>;

    /// Throws ValidationError on a duplicate id or an invalid record.
    void insert(PaperRecord record);

    /// Replaces the stored record with the same id. Year changes are rejected.
    void replace(PaperRecord record);

    const PaperRecord* find(const std::string& id) const;
    const PaperRecord& at(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.contains(id); }

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    auto records() const { return std::views::values(records_); }

    CorpusProvenance provenance;

private:
    std::map<Key, PaperRecord> records_;
    std::unordered_map<std::string, int> index_;  // id -> year
};

struct LineSkip {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

struct LoadResult {
    CorpusStore store;
    std::vector<LineSkip> skipped;
    std::size_t loaded = 0;
};

/// Reads a line-delimited JSON corpus. Malformed lines are reported in
/// `skipped`; an unreadable file throws IoError and a duplicate id throws
/// ValidationError naming it.
LoadResult load_corpus(const std::filesystem::path& path);

/// Writes one JSON object per line in (year, id) order.
std::string serialize_corpus(const CorpusStore& store);
void save_corpus(const CorpusStore& store, const std::filesystem::path& path);

/// year -> number of records.
std::map<int, std::size_t> corpus_census(const CorpusStore& store);

struct SampleSpec {
    int per_year = 200;
    std::uint64_t seed = 0;
    int year_min = kMinYear;
    int year_max = kMaxYear;

    void validate() const;
};

struct SampleResult {
    std::vector<PaperRecord> records;  // sorted by (year, id)
    std::vector<int> empty_years;      // years in range with no records
    std::map<int, std::size_t> selected_per_year;
};

/// Picks min(per_year, available) records per year uniformly without
/// replacement. The draw for a year depends only on (seed, year) and the
/// set of ids present in that year.
SampleResult sample_yearly(const CorpusStore& store, const SampleSpec& spec);

}  // namespace bltrend
