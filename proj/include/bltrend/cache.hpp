#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace bltrend {

struct CacheEntry {
    std::string key;
    std::string model_id;
    std::string schema_version;
    std::string response;  // validated payload, canonical JSON
    std::string created_at;
};

/// Content-addressed judge response cache. One file per entry at
/// `<dir>/<key[0:2]>/<key>.json`; the directory may be deleted at any time.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    /// SHA-256 over model id, schema version and prompt text (NUL-separated).
    static std::string key_for(const std::string& model_id, const std::string& prompt_text,
                               const std::string& schema_version);

    /// Unreadable or corrupt entries count as misses.
    std::optional<CacheEntry> lookup(const std::string& key) const;

    /// Existing entries are never overwritten.
    void store(const CacheEntry& entry);

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
    std::mutex write_mu_;
};

}  // namespace bltrend
