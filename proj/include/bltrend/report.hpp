#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bltrend/regression.hpp"
#include "bltrend/reliability.hpp"
#include "bltrend/rubric.hpp"

namespace bltrend {

struct TrendPoint {
    int year = 0;
    double mean = 0.0;
    std::size_t count = 0;
};

/// Per dimension, yearly mean score over every (paper, model) assessment.
struct TrendSeries {
    std::array<std::vector<TrendPoint>, kDimensionCount> by_dimension;

    const std::vector<TrendPoint>& operator[](Dimension d) const { return by_dimension[index_of(d)]; }
    bool empty() const;
};

TrendSeries trend_series(std::span<const Assessment> assessments);

/// Vertical marker on the trend plot.
struct Annotation {
    int year = 0;
    std::string label;
};

/// Reads a JSON array of {"year": int, "label": string}. Throws
/// ValidationError on an empty label, IoError if unreadable.
std::vector<Annotation> load_annotations(const std::filesystem::path& path);

std::string trends_csv(const TrendSeries& series);
std::string trends_text(const TrendSeries& series);
/// One polyline and legend entry per dimension, one dashed line per annotation.
/// Throws ValidationError if the series is empty.
std::string line_plot_svg(const TrendSeries& series, std::span<const Annotation> annotations);
void render_line_plot(const TrendSeries& series, std::span<const Annotation> annotations,
                      const std::filesystem::path& path);

struct Histogram {
    double lo = 0.0;
    double bin_width = 1.0;
    std::vector<std::size_t> counts;
    double skewness = 0.0;
    std::size_t total = 0;
};

/// Equal-width bins over [min, max]; the maximum falls in the last bin. A
/// constant input puts everything in the first bin. Throws ValidationError
/// if `values` is empty or `bins` is zero.
Histogram build_histogram(std::span<const double> values, std::size_t bins = 50);

struct HistogramPair {
    Histogram raw;
    Histogram log;  // of ln(1 + count)
};

HistogramPair citation_histograms(std::span<const std::int64_t> counts, std::size_t bins = 50);
std::string histogram_svg(const Histogram& histogram, const std::string& title, const std::string& x_label);
std::string histograms_csv(const HistogramPair& pair);
/// Includes a footer comparing raw and log skewness.
std::string histograms_text(const HistogramPair& pair);
/// Writes the raw and log-transformed histograms to two SVG files.
HistogramPair render_histograms(std::span<const std::int64_t> counts, const std::filesystem::path& raw_path,
                                const std::filesystem::path& log_path, std::size_t bins = 50);

std::string census_csv(const std::map<int, std::size_t>& census);
std::string census_text(const std::map<int, std::size_t>& census);
std::string census_svg(const std::map<int, std::size_t>& census);

using ReliabilityTable = std::array<DimensionReliability, kDimensionCount>;

/// Failed statistics show their error kind (e.g. "DegenerateMatrix") in place of a value.
std::string reliability_csv(const ReliabilityTable& table);
std::string reliability_text(const ReliabilityTable& table);
/// Grouped bars with dashed lines at ICC 0.5 and alpha 0.4.
std::string reliability_svg(const ReliabilityTable& table);

enum class TableStyle { table1, table2 };

/// Rounds the shortest round-trip decimal of `value` half away from zero.
/// 0.1285 -> "0.129"; a negative value that rounds to zero keeps its sign.
std::string format_fixed(double value, int decimals = 3);

/// "0.141***", or "0.141*** [0.097, 0.184]" with the 95% interval.
std::string coefficient_cell(const Coefficient& c, bool with_interval);

/// Unrounded values, one row per year; skipped years carry their reason.
std::string regression_table_csv(const StratifiedResults& results, TableStyle style);
/// Aligned columns with three-decimal rounding and significance stars.
std::string regression_table_text(const StratifiedResults& results, TableStyle style);
void render_regression_tables(const StratifiedResults& results, TableStyle style,
                              const std::filesystem::path& csv_path, const std::filesystem::path& txt_path);

/// Left-aligned first column, right-aligned rest, two spaces between.
std::string align_columns(const std::vector<std::vector<std::string>>& rows);

}  // namespace bltrend
