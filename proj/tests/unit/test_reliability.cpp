#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bltrend/errors.hpp"
#include "bltrend/reliability.hpp"
#include "bltrend/stub_backend.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bltrend;

namespace {

std::vector<std::string> labels(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

RatingsMatrix matrix(std::size_t n, std::size_t k, const std::vector<std::optional<int>>& cells) {
    return RatingsMatrix(labels("s", n), labels("r", k), cells);
}

RatingsMatrix complete(std::size_t n, std::size_t k, const std::vector<int>& values) {
    return matrix(n, k, std::vector<std::optional<int>>(values.begin(), values.end()));
}

std::vector<std::vector<int>> units_of(const RatingsMatrix& m) {
    std::vector<std::vector<int>> units(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m.at(i, j)) units[i].push_back(*m.at(i, j));
        }
    }
    return units;
}

/// Correlated random grid: a subject level plus rater noise.
std::vector<int> random_grid(std::mt19937& gen, std::size_t n, std::size_t k, int lo = 0, int hi = 10) {
    std::uniform_int_distribution<int> level(lo, hi), noise(-2, 2);
    std::vector<int> out;
    for (std::size_t i = 0; i < n; ++i) {
        const int base = level(gen);
        for (std::size_t j = 0; j < k; ++j) out.push_back(std::clamp(base + noise(gen), lo, hi));
    }
    return out;
}

}  // namespace

TEST(RatingsMatrix, Validation) {
    EXPECT_THROW(RatingsMatrix({"a"}, {"r"}, {1}), ValidationError);
    EXPECT_THROW(RatingsMatrix({"a"}, {"r", "q"}, {1}), ValidationError);
    EXPECT_THROW(RatingsMatrix({"a", "a"}, {"r", "q"}, {1, 1, 1, 1}), ValidationError);
    EXPECT_THROW(RatingsMatrix({"a"}, {"r", "q"}, {1, 11}), ValidationError);
}

TEST(Icc, MatchesOracle) {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + gen() % 28, k = 2 + gen() % 4;
        const auto grid = random_grid(gen, n, k);
        std::vector<double> as_double(grid.begin(), grid.end());
        double want = 0;
        try {
            want = oracle::icc_2k(as_double, n, k);
        } catch (...) {
            continue;
        }
        if (!std::isfinite(want)) continue;
        EXPECT_NEAR(icc_2k(complete(n, k, grid)).value, want, 1e-9);
    }
}

TEST(Icc, PerfectAgreementIsOne) {
    const auto r = icc_2k(complete(4, 3, {1, 1, 1, 5, 5, 5, 9, 9, 9, 2, 2, 2}));
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.n_subjects, 4u);
    EXPECT_EQ(r.k_raters, 3u);
}

TEST(Icc, ConstantMatrixIsDegenerate) {
    EXPECT_THROW(icc_2k(complete(3, 2, {4, 4, 4, 4, 4, 4})), DegenerateMatrix);
}

TEST(Icc, ZeroDenominatorIsDegenerate) {
    EXPECT_THROW(icc_2k(complete(3, 2, {0, 0, 0, 1, 1, 0})), DegenerateMatrix);
}

TEST(Icc, NegativeDenominatorStillReported) {
    // Raters disagree more than chance: the ratio is returned as computed.
    const auto r = icc_2k(complete(3, 2, {0, 1, 0, 1, 1, 0}));
    EXPECT_NEAR(r.value, oracle::icc_2k({0, 1, 0, 1, 1, 0}, 3, 2), 1e-12);
    EXPECT_NEAR(r.value, 4.0, 1e-12);
}

TEST(Icc, IncompleteRowsDropped) {
    const std::vector<std::optional<int>> cells = {1, 2, std::nullopt, 5, 4, 6, 8, 9};
    const auto with_gap = icc_2k(matrix(4, 2, cells));
    const auto trimmed = icc_2k(complete(3, 2, {1, 2, 4, 6, 8, 9}));
    EXPECT_EQ(with_gap.n_subjects, 3u);
    EXPECT_DOUBLE_EQ(with_gap.value, trimmed.value);
    EXPECT_THROW(icc_2k(matrix(2, 2, {1, std::nullopt, 3, 4})), InsufficientData);
}

TEST(Icc, InvariantUnderPermutationShiftAndScale) {
    std::mt19937 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 6, k = 3;
        const auto grid = random_grid(gen, n, k, 0, 5);
        const double base = icc_2k(complete(n, k, grid)).value;

        std::vector<std::size_t> rows(n), cols(k);
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        std::shuffle(rows.begin(), rows.end(), gen);
        std::shuffle(cols.begin(), cols.end(), gen);
        std::vector<int> permuted, shifted, scaled;
        for (std::size_t i : rows) {
            for (std::size_t j : cols) permuted.push_back(grid[i * k + j]);
        }
        for (int v : grid) {
            shifted.push_back(v + 3);
            scaled.push_back(2 * v);
        }
        EXPECT_NEAR(icc_2k(complete(n, k, permuted)).value, base, 1e-12);
        EXPECT_NEAR(icc_2k(complete(n, k, shifted)).value, base, 1e-12);
        EXPECT_NEAR(icc_2k(complete(n, k, scaled)).value, base, 1e-12);
    }
}

TEST(Alpha, MatchesOracleWithMissingCells) {
    std::mt19937 gen(12);
    std::bernoulli_distribution missing(0.2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + gen() % 28, k = 2 + gen() % 4;
        const auto grid = random_grid(gen, n, k);
        std::vector<std::optional<int>> cells;
        for (int v : grid) cells.push_back(missing(gen) ? std::nullopt : std::optional<int>(v));
        const auto m = matrix(n, k, cells);
        for (auto [metric, om] : {std::pair{AlphaMetric::interval, oracle::Metric::interval},
                                  std::pair{AlphaMetric::ordinal, oracle::Metric::ordinal}}) {
            double want = 0;
            try {
                want = oracle::alpha(units_of(m), om);
            } catch (...) {
                EXPECT_THROW(krippendorff_alpha(m, metric), Error);
                continue;
            }
            EXPECT_NEAR(krippendorff_alpha(m, metric).value, want, 1e-9) << trial;
        }
    }
}

TEST(Alpha, PerfectAgreementIsExactlyOne) {
    const auto m = matrix(3, 3, {2, 2, std::nullopt, 7, 7, 7, 0, std::nullopt, 0});
    EXPECT_EQ(krippendorff_alpha(m, AlphaMetric::interval).value, 1.0);
    EXPECT_EQ(krippendorff_alpha(m, AlphaMetric::ordinal).value, 1.0);
    EXPECT_EQ(krippendorff_alpha(m, AlphaMetric::nominal).value, 1.0);
}

TEST(Alpha, NoExpectedDisagreementIsDegenerate) {
    EXPECT_THROW(krippendorff_alpha(complete(3, 2, {5, 5, 5, 5, 5, 5})), DegenerateMatrix);
    EXPECT_THROW(krippendorff_alpha(matrix(2, 2, {1, std::nullopt, std::nullopt, 2})), InsufficientData);
}

TEST(Alpha, ShiftAndScaleInvariance) {
    std::mt19937 gen(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto grid = random_grid(gen, 8, 3, 0, 5);
        std::vector<int> shifted, scaled;
        for (int v : grid) {
            shifted.push_back(v + 4);
            scaled.push_back(2 * v);
        }
        const double base = krippendorff_alpha(complete(8, 3, grid)).value;
        EXPECT_NEAR(krippendorff_alpha(complete(8, 3, shifted)).value, base, 1e-12);
        EXPECT_NEAR(krippendorff_alpha(complete(8, 3, scaled)).value, base, 1e-12);
        EXPECT_NEAR(krippendorff_alpha(complete(8, 3, shifted), AlphaMetric::ordinal).value,
                    krippendorff_alpha(complete(8, 3, grid), AlphaMetric::ordinal).value, 1e-12);
    }
}

TEST(Alpha, MetricNames) {
    EXPECT_EQ(alpha_metric_from_string("ordinal"), AlphaMetric::ordinal);
    EXPECT_EQ(to_string(AlphaMetric::interval), "interval");
    EXPECT_THROW(alpha_metric_from_string("cosine"), ValidationError);
}

TEST(Bands, Boundaries) {
    EXPECT_EQ(interpret_reliability(0.51, ReliabilityScale::icc), "moderate");
    EXPECT_EQ(interpret_reliability(0.49, ReliabilityScale::icc), "poor");
    EXPECT_EQ(interpret_reliability(0.5, ReliabilityScale::icc), "moderate");
    EXPECT_EQ(interpret_reliability(0.75, ReliabilityScale::icc), "good");
    EXPECT_EQ(interpret_reliability(0.95, ReliabilityScale::icc), "excellent");
    EXPECT_EQ(interpret_reliability(0.39, ReliabilityScale::alpha), "low");
    EXPECT_EQ(interpret_reliability(0.8, ReliabilityScale::alpha), "reliable");

    const auto& low = interpret_band(0.39, ReliabilityScale::alpha);
    EXPECT_FALSE(low.acceptable_range);
    const auto& tentative = interpret_band(0.41, ReliabilityScale::alpha);
    EXPECT_TRUE(tentative.acceptable_range);
    EXPECT_EQ(tentative.label, "tentative");
    EXPECT_TRUE(interpret_band(0.51, ReliabilityScale::icc).acceptable_range);
    EXPECT_FALSE(interpret_band(0.49, ReliabilityScale::icc).acceptable_range);
    EXPECT_EQ(interpret_reliability(-0.3, ReliabilityScale::alpha), "low");
}

TEST(Bands, TablesAscend) {
    for (auto scale : {ReliabilityScale::icc, ReliabilityScale::alpha}) {
        const auto& bands = reliability_bands(scale);
        for (std::size_t i = 1; i < bands.size(); ++i) EXPECT_LT(bands[i - 1].lower, bands[i].lower);
    }
}

namespace {

std::vector<Assessment> stub_assessments(const std::vector<std::string>& scripts, int n_papers) {
    std::vector<Assessment> out;
    for (int i = 0; i < n_papers; ++i) {
        const auto paper = testutil::paper("p" + std::to_string(i), 2010 + i % 3);
        for (const auto& s : scripts) {
            const auto script = StubScript::parse(s);
            out.push_back(Assessment::from_response(paper.id, "stub:" + s, paper.year, script.payload(paper),
                                                    RubricDefinition::builtin()));
        }
    }
    return out;
}

}  // namespace

TEST(PerDimension, IdenticalJudgesAgreePerfectly) {
    const auto a = stub_assessments({"hash+id=a", "hash+id=b", "hash+id=c"}, 20);
    for (const auto& d : per_dimension_reliability(a)) {
        ASSERT_TRUE(d.icc.ok()) << d.icc.error_message;
        ASSERT_TRUE(d.alpha.ok()) << d.alpha.error_message;
        EXPECT_EQ(d.icc.result->value, 1.0);
        EXPECT_EQ(d.alpha.result->value, 1.0);
        EXPECT_EQ(d.n_subjects, 20u);
        EXPECT_EQ(d.k_raters, 3u);
    }
}

TEST(PerDimension, ConstantDimensionReportsDegenerate) {
    const auto a = stub_assessments(
        {"hash+jitter=a+const:favoring_fundamental_principles=5", "hash+jitter=b+const:favoring_fundamental_principles=5"},
        15);
    const auto rel = per_dimension_reliability(a);
    const auto& principles = rel[index_of(Dimension::FavoringFundamentalPrinciples)];
    EXPECT_FALSE(principles.icc.ok());
    EXPECT_EQ(principles.icc.error_kind, "DegenerateMatrix");
    EXPECT_FALSE(principles.alpha.ok());
    EXPECT_EQ(principles.alpha.error_kind, "DegenerateMatrix");
    EXPECT_TRUE(rel[index_of(Dimension::LearningOverEngineering)].icc.ok());
}

TEST(PerDimension, InputOrderDoesNotMatter) {
    auto a = stub_assessments({"hash+jitter=a", "hash+jitter=b", "year-trend+jitter=c"}, 25);
    const auto base = per_dimension_reliability(a, AlphaMetric::ordinal);
    std::mt19937 gen(2);
    std::shuffle(a.begin(), a.end(), gen);
    const auto shuffled = per_dimension_reliability(a, AlphaMetric::ordinal);
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        EXPECT_EQ(base[i].icc.result->value, shuffled[i].icc.result->value);
        EXPECT_EQ(base[i].alpha.result->value, shuffled[i].alpha.result->value);
    }
}

TEST(PerDimension, NeedsTwoModels) {
    EXPECT_THROW(per_dimension_reliability(stub_assessments({"hash"}, 5)), InsufficientData);
}

TEST(PerDimension, RatingsPivot) {
    const auto a = stub_assessments({"constant-3", "constant-8"}, 4);
    const auto m = ratings_for(a, Dimension::SearchOverHeuristics);
    EXPECT_EQ(m.rows(), 4u);
    EXPECT_EQ(m.raters(), (std::vector<std::string>{"stub:constant-3", "stub:constant-8"}));
    EXPECT_EQ(*m.at(2, 1), 8);
}
