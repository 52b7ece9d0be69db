#include "bltrend/stub_backend.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include "bltrend/errors.hpp"

namespace bltrend {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("stub script: " + std::string(what) + " '" + std::string(text) + "' is not an integer");
    }
    return value;
}

constexpr int kStubMax = 10;

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

StubScript StubScript::parse(std::string_view script) {
    StubScript s;
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
        const auto plus = script.find('+', start);
        parts.push_back(script.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }

    const std::string_view base = parts.front();
    if (base == "hash") {
        s.rule = Rule::hash;
    } else if (base == "year-trend") {
        s.rule = Rule::year_trend;
    } else if (base.starts_with("constant-")) {
        s.rule = Rule::constant;
        s.constant_value = parse_int(base.substr(9), "constant");
    } else {
        throw ConfigError("stub script: unknown rule '" + std::string(base) + "'");
    }

    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string_view m = parts[i];
        if (m.starts_with("jitter=")) {
            s.jitter_salt = std::string(m.substr(7));
        } else if (m.starts_with("const:")) {
            const auto eq = m.find('=');
            if (eq == std::string_view::npos) throw ConfigError("stub script: const modifier needs '='");
            const auto dim = dimension_from_key(m.substr(6, eq - 6));
            if (!dim) throw ConfigError("stub script: unknown dimension in '" + std::string(m) + "'");
            s.pinned[*dim] = parse_int(m.substr(eq + 1), "pinned score");
        } else if (m == "fault=first-malformed") {
            s.first_malformed = true;
        } else if (m == "fault=first-out-of-range") {
            s.first_out_of_range = true;
        } else if (m.starts_with("fail=")) {
            s.failing_papers.emplace(m.substr(5));
        } else if (m.starts_with("delay=")) {
            s.delay = std::chrono::milliseconds(parse_int(m.substr(6), "delay"));
        } else if (m.starts_with("id=")) {
            // Label only: lets several identically scripted judges coexist.
        } else if (m == "auth-error") {
            s.auth_error = true;
        } else {
            throw ConfigError("stub script: unknown modifier '" + std::string(m) + "'");
        }
    }
    return s;
}

int StubScript::score(const PaperRecord& paper, Dimension d) const {
    if (auto it = pinned.find(d); it != pinned.end()) return it->second;
    const std::string key(dimension_key(d));
    int value = 0;
    switch (rule) {
        case Rule::constant: value = constant_value; break;
        case Rule::hash: value = static_cast<int>(fnv1a64(paper.id + '\x1f' + key) % 11); break;
        case Rule::year_trend: value = std::clamp(paper.year - 2005, 0, kStubMax); break;
    }
    if (!jitter_salt.empty()) {
        value += static_cast<int>(fnv1a64(jitter_salt + '\x1f' + paper.id + '\x1f' + key) % 3) - 1;
        value = std::clamp(value, 0, kStubMax);
    }
    return value;
}

std::string StubScript::payload(const PaperRecord& paper) const {
    ordered_json out;
    for (Dimension d : kDimensions) {
        ordered_json entry;
        entry["explanation"] = "Scripted score for " + std::string(dimension_label(d)) + ".";
        entry["score"] = score(paper, d);
        out[dimension_field(d)] = std::move(entry);
    }
    return out.dump(2);
}

std::string StubBackend::complete(const JudgeRequest& request) {
    calls_.fetch_add(1);
    if (script_.delay.count() > 0) std::this_thread::sleep_for(script_.delay);
    if (script_.auth_error) throw ConfigError("stub backend scripted to reject credentials");
    if (script_.failing_papers.contains(request.paper.id)) return "I cannot answer that.";

    if (script_.first_malformed || script_.first_out_of_range) {
        bool first = false;
        {
            std::lock_guard lock(mu_);
            first = answered_.insert(request.paper.id).second;
        }
        if (first && script_.first_malformed) return "{\"learning_over_engineering_score\": ";
        if (first && script_.first_out_of_range) {
            json payload = json::parse(script_.payload(request.paper));
            payload[dimension_field(Dimension::LearningOverEngineering)]["score"] = 12;
            return payload.dump();
        }
    }
    return script_.payload(request.paper);
}

}  // namespace bltrend
