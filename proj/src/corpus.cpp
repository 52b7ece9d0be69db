#include "bltrend/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bltrend/errors.hpp"
#include "bltrend/rng.hpp"
#include "bltrend/timeutil.hpp"

namespace bltrend {

namespace {

const std::set<std::string> kKnownFields = {
    "id", "year", "title", "authors", "abstract", "citation_count", "citations_fetched_at", "external_id"};

const json& require(const json& object, const char* field) {
    auto it = object.find(field);
    if (it == object.end()) throw ValidationError(std::string("missing field '") + field + "'");
    return *it;
}

std::string require_string(const json& object, const char* field) {
    const json& v = require(object, field);
    if (!v.is_string()) throw ValidationError(std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& object, const char* field) {
    auto it = object.find(field);
    if (it == object.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ValidationError(std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

void validate_record(const PaperRecord& r) {
    if (r.id.empty()) throw ValidationError("record id is empty");
    if (r.year < kMinYear || r.year > kMaxYear) {
        throw ValidationError("record " + r.id + ": year " + std::to_string(r.year) + " outside [1900, 2100]");
    }
    if (r.title.empty()) throw ValidationError("record " + r.id + ": title is empty");
    if (r.citation_count && *r.citation_count < 0) {
        throw ValidationError("record " + r.id + ": negative citation_count");
    }
    if (r.citation_count && !r.citations_fetched_at) {
        throw ValidationError("record " + r.id + ": citation_count without citations_fetched_at");
    }
    if (r.citations_fetched_at && !is_utc_timestamp(*r.citations_fetched_at)) {
        throw ValidationError("record " + r.id + ": citations_fetched_at is not a UTC timestamp");
    }
}

PaperRecord record_from_json(const json& object) {
    if (!object.is_object()) throw ValidationError("record is not a JSON object");
    PaperRecord r;
    r.id = require_string(object, "id");
    const json& year = require(object, "year");
    if (!year.is_number_integer()) throw ValidationError("field 'year' must be an integer");
    r.year = year.get<int>();
    r.title = require_string(object, "title");
    r.abstract = require_string(object, "abstract");
    if (auto it = object.find("authors"); it != object.end() && !it->is_null()) {
        if (!it->is_array()) throw ValidationError("field 'authors' must be a list");
        for (const auto& a : *it) {
            if (!a.is_string()) throw ValidationError("author entries must be strings");
            r.authors.push_back(a.get<std::string>());
        }
    }
    if (auto it = object.find("citation_count"); it != object.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw ValidationError("field 'citation_count' must be an integer");
        r.citation_count = it->get<std::int64_t>();
    }
    r.citations_fetched_at = optional_string(object, "citations_fetched_at");
    r.external_id = optional_string(object, "external_id");
    for (auto it = object.begin(); it != object.end(); ++it) {
        if (!kKnownFields.contains(it.key())) r.extra[it.key()] = it.value();
    }
    validate_record(r);
    return r;
}

ordered_json record_to_json(const PaperRecord& r) {
    // ordered_json keeps the documented field order on disk.
    ordered_json out;
    out["id"] = r.id;
    out["year"] = r.year;
    out["title"] = r.title;
    out["authors"] = r.authors;
    out["abstract"] = r.abstract;
    if (r.citation_count) out["citation_count"] = *r.citation_count;
    if (r.citations_fetched_at) out["citations_fetched_at"] = *r.citations_fetched_at;
    if (r.external_id) out["external_id"] = *r.external_id;
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) out[it.key()] = it.value();
    return out;
}

void CorpusStore::insert(PaperRecord record) {
    validate_record(record);
    if (index_.contains(record.id)) throw ValidationError("duplicate record id '" + record.id + "'");
    index_.emplace(record.id, record.year);
    Key key{record.year, record.id};
    records_.emplace(std::move(key), std::move(record));
}

void CorpusStore::replace(PaperRecord record) {
    validate_record(record);
    auto it = index_.find(record.id);
    if (it == index_.end()) throw ValidationError("unknown record id '" + record.id + "'");
    if (it->second != record.year) throw ValidationError("record " + record.id + ": year may not change");
    records_.at(Key{record.year, record.id}) = std::move(record);
}

const PaperRecord* CorpusStore::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &records_.at(Key{it->second, id});
}

const PaperRecord& CorpusStore::at(const std::string& id) const {
    const PaperRecord* r = find(id);
    if (!r) throw ValidationError("unknown record id '" + id + "'");
    return *r;
}

LoadResult load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus " + path.string());

    LoadResult result;
    result.store.provenance = {path.string(), utc_now_iso8601()};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        PaperRecord record;
        try {
            record = record_from_json(json::parse(line));
        } catch (const json::exception& e) {
            result.skipped.push_back({lineno, std::string("invalid JSON: ") + e.what()});
            continue;
        } catch (const ValidationError& e) {
            result.skipped.push_back({lineno, e.what()});
            continue;
        }
        if (result.store.contains(record.id)) {
            throw ValidationError("duplicate record id '" + record.id + "' at line " + std::to_string(lineno));
        }
        result.store.insert(std::move(record));
        ++result.loaded;
    }
    if (in.bad()) throw IoError("read failed for corpus " + path.string());
    return result;
}

std::string serialize_corpus(const CorpusStore& store) {
    std::string out;
    for (const PaperRecord& r : store.records()) {
        out += record_to_json(r).dump(-1, ' ', false, json::error_handler_t::strict);
        out += '\n';
    }
    return out;
}

void save_corpus(const CorpusStore& store, const std::filesystem::path& path) {
    write_text_file(path, serialize_corpus(store));
}

std::map<int, std::size_t> corpus_census(const CorpusStore& store) {
    std::map<int, std::size_t> census;
    for (const PaperRecord& r : store.records()) ++census[r.year];
    return census;
}

void SampleSpec::validate() const {
    if (per_year < 1) throw ValidationError("per_year must be at least 1");
    if (year_min > year_max) throw ValidationError("year range is empty (min > max)");
}

SampleResult sample_yearly(const CorpusStore& store, const SampleSpec& spec) {
    spec.validate();
    std::map<int, std::vector<const PaperRecord*>> by_year;
    for (const PaperRecord& r : store.records()) {
        if (r.year >= spec.year_min && r.year <= spec.year_max) by_year[r.year].push_back(&r);
    }

    SampleResult result;
    for (int year = spec.year_min; year <= spec.year_max; ++year) {
        auto it = by_year.find(year);
        if (it == by_year.end()) {
            result.empty_years.push_back(year);
            continue;
        }
        // Store iteration already yields ids ascending within a year.
        std::vector<const PaperRecord*> pool = it->second;
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(spec.per_year), pool.size());
        SplitMix64 rng(stream_seed(spec.seed, year));
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(take);
        std::sort(pool.begin(), pool.end(), [](const PaperRecord* a, const PaperRecord* b) { return a->id < b->id; });
        for (const PaperRecord* r : pool) result.records.push_back(*r);
        result.selected_per_year[year] = take;
    }
    return result;
}

}  // namespace bltrend
