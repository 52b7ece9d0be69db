#include "bltrend/cache.hpp"

#include "bltrend/digest.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/jsonutil.hpp"

namespace bltrend {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string ResponseCache::key_for(const std::string& model_id, const std::string& prompt_text,
                                   const std::string& schema_version) {
    std::string material;
    material.reserve(model_id.size() + prompt_text.size() + schema_version.size() + 2);
    material += model_id;
    material += '\0';
    material += schema_version;
    material += '\0';
    material += prompt_text;
    return sha256_hex(material);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<CacheEntry> ResponseCache::lookup(const std::string& key) const {
    const auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
        const json doc = json::parse(read_text_file(path));
        CacheEntry entry{doc.at("key").get<std::string>(), doc.at("model").get<std::string>(),
                         doc.at("schema_version").get<std::string>(), doc.at("response").get<std::string>(),
                         doc.value("created_at", "")};
        if (entry.key != key) return std::nullopt;
        return entry;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void ResponseCache::store(const CacheEntry& entry) {
    std::lock_guard lock(write_mu_);
    const auto path = path_for(entry.key);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) return;
    ordered_json doc;
    doc["key"] = entry.key;
    doc["model"] = entry.model_id;
    doc["schema_version"] = entry.schema_version;
    doc["created_at"] = entry.created_at;
    doc["response"] = entry.response;
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace bltrend
