#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bltrend/corpus.hpp"
#include "bltrend/rubric.hpp"

namespace bltrend {

inline constexpr const char* kInterceptName = "intercept";

/// Row-major n x p design with a leading intercept column of ones.
struct DesignMatrix {
    std::vector<std::string> columns;
    std::vector<double> values;
    std::vector<double> response;

    std::size_t rows() const noexcept { return response.size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

    /// Prepends the intercept column to `predictors` (one inner vector per row).
    static DesignMatrix with_intercept(std::vector<std::string> predictor_names,
                                       const std::vector<std::vector<double>>& predictors,
                                       std::vector<double> response);

    /// Throws ValidationError on shape problems, non-finite cells, duplicate
    /// names or a first column that is not all ones; InsufficientData when n <= p.
    void validate() const;
};

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double ci_low = 0.0;   // 95%
    double ci_high = 0.0;  // 95%
};

struct RegressionResult {
    std::vector<Coefficient> coefficients;  // design column order
    double r_squared = 0.0;
    double f_stat = 0.0;
    double f_p_value = 1.0;
    std::size_t n = 0;
    std::size_t dof_residual = 0;
    double rss = 0.0;
    double tss = 0.0;

    const Coefficient& coefficient(std::string_view name) const;
};

/// Ordinary least squares via the thin SVD of the design. A singular value
/// at or below 1e-10 times the largest marks rank deficiency and raises
/// RankError naming the columns involved. Inference uses Student's t with
/// n - p dof and F with (p - 1, n - p) dof.
RegressionResult ols_fit(const DesignMatrix& design);

/// ln(1 + count). Throws ValidationError for negative counts.
double log_citation_transform(std::int64_t count);

/// exp(coefficient): factor on citations per unit of predictor when the response is log citations.
double multiplicative_effect(double coefficient);

/// "***" p < 0.01, "**" p < 0.05, "*" p < 0.10, otherwise "".
std::string significance_stars(double p_value);

/// One paper's regression row: predictors averaged over the judge models that scored it.
struct PaperObservation {
    std::string paper_id;
    int year = 0;
    std::int64_t citations = 0;
    double log_citations = 0.0;
    std::array<double, kDimensionCount> mean_scores{};
    double mean_overall = 0.0;
    std::size_t n_models = 0;
};

struct RegressionOptions {
    /// Years to fit; empty means every year present.
    std::vector<int> years;
    /// z-score each predictor within a year before fitting.
    bool standardize = false;
    /// Permit citation counts fetched on different dates within one analysis.
    bool allow_mixed_snapshots = false;
};

struct StratifiedResults {
    std::map<int, RegressionResult> by_year;
    std::map<int, std::string> skipped;  // year -> reason
    std::size_t papers_without_citations = 0;
    std::size_t papers_not_in_corpus = 0;  // assessed ids with no corpus record
};

/// Joins assessments to corpus records. Papers lacking a citation count are
/// counted and left out. Throws SnapshotError when the included papers'
/// citations were fetched on more than one date and mixing is not allowed.
std::vector<PaperObservation> build_observations(std::span<const Assessment> assessments, const CorpusStore& store,
                                                 const RegressionOptions& options, StratifiedResults* tally = nullptr);

/// Per year: ln(1+citations) ~ intercept + five dimension scores.
StratifiedResults per_dimension_regressions(std::span<const Assessment> assessments, const CorpusStore& store,
                                            const RegressionOptions& options = {});

/// Per year: ln(1+citations) ~ intercept + overall score.
StratifiedResults overall_regression(std::span<const Assessment> assessments, const CorpusStore& store,
                                     const RegressionOptions& options = {});

/// Predictor name used for the overall-score model.
inline constexpr const char* kOverallPredictor = "overall";

}  // namespace bltrend
