#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bltrend/rubric.hpp"

namespace bltrend {

/// Subjects (rows) x raters (columns) grid of optional integer scores.
class RatingsMatrix {
public:
    /// Throws ValidationError on duplicate labels, fewer than two raters, a
    /// cell count mismatch, or a score outside [min_score, max_score].
    RatingsMatrix(std::vector<std::string> subjects, std::vector<std::string> raters,
                  std::vector<std::optional<int>> cells, int min_score = 0, int max_score = 10);

    std::size_t rows() const noexcept { return subjects_.size(); }
    std::size_t cols() const noexcept { return raters_.size(); }
    const std::optional<int>& at(std::size_t row, std::size_t col) const { return cells_[row * cols() + col]; }

    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    const std::vector<std::string>& raters() const noexcept { return raters_; }

private:
    std::vector<std::string> subjects_;
    std::vector<std::string> raters_;
    std::vector<std::optional<int>> cells_;  // row-major
};

struct IccResult {
    double value = 0.0;
    double ms_rows = 0.0;
    double ms_cols = 0.0;
    double ms_error = 0.0;
    std::size_t n_subjects = 0;
    std::size_t k_raters = 0;
};

/// ICC(2,k): two-way random effects, absolute agreement, mean of k raters.
/// Rows with any missing cell are dropped first. Throws InsufficientData
/// when fewer than two complete rows remain and DegenerateMatrix when the
/// grid has no variance (or the ANOVA denominator is exactly zero).
IccResult icc_2k(const RatingsMatrix& matrix);

enum class AlphaMetric { nominal, ordinal, interval, ratio };

std::string_view to_string(AlphaMetric metric);
/// Throws ValidationError for anything but nominal/ordinal/interval/ratio.
AlphaMetric alpha_metric_from_string(std::string_view name);

struct AlphaResult {
    double value = 0.0;
    AlphaMetric metric = AlphaMetric::interval;
    std::size_t n_pairable = 0;
};

/// Krippendorff's alpha from the coincidence matrix. Units (rows) with fewer
/// than two ratings are not pairable and drop out. Throws InsufficientData
/// below two pairable values and DegenerateMatrix when expected
/// disagreement is zero.
AlphaResult krippendorff_alpha(const RatingsMatrix& matrix, AlphaMetric metric = AlphaMetric::interval);

enum class ReliabilityScale { icc, alpha };

struct ReliabilityBand {
    std::string label;
    double lower = 0.0;  // inclusive
    /// True at or above the lowest threshold treated as adequate agreement
    /// (ICC 0.5, alpha 0.4).
    bool acceptable_range = false;
};

/// Band table, ascending by lower edge:
///   ICC:   poor < 0.5 <= moderate < 0.75 <= good < 0.9 <= excellent
///   alpha: low < 0.4 <= tentative < 0.667 <= acceptable < 0.8 <= reliable
const std::vector<ReliabilityBand>& reliability_bands(ReliabilityScale scale);
const ReliabilityBand& interpret_band(double value, ReliabilityScale scale);
std::string interpret_reliability(double value, ReliabilityScale scale);

/// Outcome for one statistic on one dimension: a value or the error kind that prevented one.
template <typename Result>
struct StatOutcome {
    std::optional<Result> result;
    std::string error_kind;  // "DegenerateMatrix", "InsufficientData", ...
    std::string error_message;

    bool ok() const noexcept { return result.has_value(); }
};

struct DimensionReliability {
    Dimension dimension{};
    StatOutcome<IccResult> icc;
    StatOutcome<AlphaResult> alpha;
    std::size_t n_subjects = 0;
    std::size_t k_raters = 0;
};

/// Pivots assessments into one matrix per dimension (subjects and raters
/// sorted by id) and applies both statistics. Needs at least two models;
/// per-dimension failures are reported, not thrown.
std::array<DimensionReliability, kDimensionCount> per_dimension_reliability(
    std::span<const Assessment> assessments, AlphaMetric metric = AlphaMetric::interval);

/// Builds the ratings matrix for one dimension from assessments.
RatingsMatrix ratings_for(std::span<const Assessment> assessments, Dimension dimension);

}  // namespace bltrend
