#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <string_view>

#include "bltrend/backend.hpp"

namespace bltrend {

/// Deterministic stand-in for an LLM judge. The script is the model name of a
/// "stub:" model id: a base rule followed by '+'-separated modifiers.
///
///   constant-<v>        every dimension scores v
///   hash                score = fnv1a64(paper_id "\x1f" dimension_key) mod 11
///   year-trend          score = clamp(year - 2005, 0, 10)
///
///   +jitter=<salt>      add (fnv1a64(salt "\x1f" paper_id "\x1f" dimension_key) mod 3) - 1, clamped
///   +const:<dim>=<v>    pin one dimension (by key) to v
///   +fault=first-malformed      first call per paper returns unparseable text
///   +fault=first-out-of-range   first call per paper reports score 12 on the first dimension
///   +fail=<paper_id>    every call for that paper returns unparseable text
///   +delay=<ms>         sleep before answering
///   +auth-error         every call throws ConfigError
///   +id=<label>         no effect on scores; distinguishes otherwise identical judges
///
/// Example: "stub:year-trend+jitter=b+const:favoring_fundamental_principles=9".
struct StubScript {
    enum class Rule { constant, hash, year_trend };

    Rule rule = Rule::hash;
    int constant_value = 0;
    std::string jitter_salt;
    std::map<Dimension, int> pinned;
    bool first_malformed = false;
    bool first_out_of_range = false;
    bool auth_error = false;
    std::set<std::string> failing_papers;
    std::chrono::milliseconds delay{0};

    /// Throws ConfigError on an unknown rule or modifier.
    static StubScript parse(std::string_view script);

    /// Scripted score; a pure function of the paper and dimension.
    int score(const PaperRecord& paper, Dimension d) const;

    /// Well-formed payload carrying `score` for every dimension.
    std::string payload(const PaperRecord& paper) const;
};

std::uint64_t fnv1a64(std::string_view data);

class StubBackend : public Backend {
public:
    explicit StubBackend(StubScript script) : script_(std::move(script)) {}

    std::string complete(const JudgeRequest& request) override;

    std::uint64_t calls() const noexcept { return calls_.load(); }
    const StubScript& script() const noexcept { return script_; }

private:
    StubScript script_;
    std::atomic<std::uint64_t> calls_{0};
    std::mutex mu_;
    std::set<std::string> answered_;  // papers that already got their faulty first answer
};

}  // namespace bltrend
