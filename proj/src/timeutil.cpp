#include "bltrend/timeutil.hpp"

#include <cctype>
#include <chrono>
#include <ctime>

namespace bltrend {

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool is_utc_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS
    static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:dd";
    if (text.size() < shape.size() + 1 || text.back() != 'Z') return false;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const char c = text[i];
        if (shape[i] == 'd') {
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        } else if (c != shape[i]) {
            return false;
        }
    }
    auto rest = text.substr(shape.size(), text.size() - shape.size() - 1);
    if (rest.empty()) return true;
    if (rest.front() != '.' || rest.size() < 2) return false;
    for (char c : rest.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string snapshot_date(std::string_view timestamp) {
    return std::string(timestamp.substr(0, 10));
}

}  // namespace bltrend
