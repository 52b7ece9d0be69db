#pragma once

#include <cstdint>
#include <string>

#include "bltrend/corpus.hpp"
#include "bltrend/rng.hpp"

namespace bltrend {

struct SynthSpec {
    int year_min = 2005;
    int year_max = 2007;
    int per_year = 50;
    std::uint64_t seed = 7;
    /// Citation counts are log-normal: exp(N(log_mean, log_sd)) - 1, floored at 0.
    double log_mean = 3.0;
    double log_sd = 1.2;
    std::string fetched_at = "2024-07-20T00:00:00Z";

    void validate() const;
};

/// Deterministic placeholder corpus for offline runs: generated titles and
/// abstracts with citation counts already attached.
CorpusStore synthesize_corpus(const SynthSpec& spec);

/// Standard normal draw (Box-Muller on two uniforms).
double normal_draw(SplitMix64& rng);

}  // namespace bltrend
