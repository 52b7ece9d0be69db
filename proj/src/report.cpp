#include "bltrend/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bltrend/distributions.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/jsonutil.hpp"
#include "bltrend/svg.hpp"

namespace bltrend {

namespace {

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
    }
    return out + "\n";
}

std::string year_label(int year) { return std::to_string(year); }

}  // namespace

std::string align_columns(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            const std::string pad(widths[i] - row[i].size(), ' ');
            line += i == 0 ? row[i] + pad : pad + row[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

// ---- trends ----

bool TrendSeries::empty() const {
    return std::all_of(by_dimension.begin(), by_dimension.end(), [](const auto& s) { return s.empty(); });
}

TrendSeries trend_series(std::span<const Assessment> assessments) {
    struct Sum {
        long long total = 0;
        std::size_t count = 0;
    };
    std::array<std::map<int, Sum>, kDimensionCount> sums;
    for (const Assessment& a : assessments) {
        for (Dimension d : kDimensions) {
            Sum& s = sums[index_of(d)][a.year()];
            s.total += a.score(d);
            ++s.count;
        }
    }
    TrendSeries out;
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        for (const auto& [year, s] : sums[i]) {
            out.by_dimension[i].push_back(
                {year, static_cast<double>(s.total) / static_cast<double>(s.count), s.count});
        }
    }
    return out;
}

std::vector<Annotation> load_annotations(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ValidationError("annotation file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ValidationError("annotation file must hold a JSON array");
    std::vector<Annotation> out;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("year") || !item["year"].is_number_integer() ||
            !item.contains("label") || !item["label"].is_string()) {
            throw ValidationError("annotation entries need an integer 'year' and a string 'label'");
        }
        Annotation a{item["year"].get<int>(), item["label"].get<std::string>()};
        if (a.label.empty()) throw ValidationError("annotation label must not be empty");
        out.push_back(std::move(a));
    }
    std::stable_sort(out.begin(), out.end(), [](const Annotation& a, const Annotation& b) { return a.year < b.year; });
    return out;
}

std::string trends_csv(const TrendSeries& series) {
    std::string out = csv_row({"dimension", "year", "mean_score", "count"});
    for (Dimension d : kDimensions) {
        for (const auto& p : series[d]) {
            out += csv_row({std::string(dimension_key(d)), year_label(p.year), shortest_decimal(p.mean),
                            std::to_string(p.count)});
        }
    }
    return out;
}

std::string trends_text(const TrendSeries& series) {
    std::map<int, std::array<const TrendPoint*, kDimensionCount>> by_year;
    for (Dimension d : kDimensions) {
        for (const auto& p : series[d]) by_year[p.year][index_of(d)] = &p;
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Year"};
    for (Dimension d : kDimensions) header.emplace_back(dimension_column(d));
    header.emplace_back("N");
    rows.push_back(std::move(header));
    for (const auto& [year, points] : by_year) {
        std::vector<std::string> row{year_label(year)};
        std::size_t count = 0;
        for (const TrendPoint* p : points) {
            row.push_back(p ? format_fixed(p->mean, 3) : "-");
            if (p) count = std::max(count, p->count);
        }
        row.push_back(std::to_string(count));
        rows.push_back(std::move(row));
    }
    return "Average alignment score by year (all papers, all models)\n\n" + align_columns(rows);
}

std::string line_plot_svg(const TrendSeries& series, std::span<const Annotation> annotations) {
    if (series.empty()) throw ValidationError("trend series is empty");
    int year_min = std::numeric_limits<int>::max();
    int year_max = std::numeric_limits<int>::min();
    for (const auto& s : series.by_dimension) {
        for (const auto& p : s) {
            year_min = std::min(year_min, p.year);
            year_max = std::max(year_max, p.year);
        }
    }
    for (const auto& a : annotations) {
        year_min = std::min(year_min, a.year);
        year_max = std::max(year_max, a.year);
    }
    if (year_min == year_max) {
        --year_min;
        ++year_max;
    }

    constexpr double W = 860, H = 480, left = 60, right = 260, top = 40, bottom = 60;
    const svg::LinearScale x{static_cast<double>(year_min), static_cast<double>(year_max), left, W - right};
    const svg::LinearScale y{0.0, 10.0, H - bottom, top};
    svg::Document doc(W, H);
    doc.text(W / 2 - (right - left) / 2, 24, "Average alignment score by year", "middle", 16);

    for (double t : svg::nice_ticks(0, 10, 5)) {
        doc.line(left, y(t), W - right, y(t), "#dddddd");
        doc.text(left - 8, y(t) + 4, format_fixed(t, 0), "end", 11);
    }
    const int span = year_max - year_min;
    const int step = span > 20 ? 5 : (span > 10 ? 2 : 1);
    for (int yr = year_min; yr <= year_max; yr += step) {
        doc.line(x(yr), H - bottom, x(yr), H - bottom + 5, "black");
        doc.text(x(yr), H - bottom + 20, year_label(yr), "middle", 11);
    }
    doc.line(left, H - bottom, W - right, H - bottom, "black");
    doc.line(left, top, left, H - bottom, "black");
    doc.text((left + W - right) / 2, H - 16, "Year", "middle", 12);
    doc.text(18, (top + H - bottom) / 2, "Average score (0-10)", "middle", 12, -90);

    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const double ax = x(annotations[i].year);
        doc.line(ax, top, ax, H - bottom, "#555555", 1.0, "4 3");
        doc.text(ax + 3, top + 12 + 12.0 * static_cast<double>(i % 4), annotations[i].label, "start", 10);
    }

    for (Dimension d : kDimensions) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : series[d]) pts.emplace_back(x(p.year), y(p.mean));
        const auto color = svg::palette(index_of(d));
        doc.polyline(pts, color);
        for (const auto& [px, py] : pts) doc.circle(px, py, 2.5, color);
    }
    for (Dimension d : kDimensions) {
        const double ly = top + 20.0 * static_cast<double>(index_of(d));
        const auto color = svg::palette(index_of(d));
        doc.line(W - right + 20, ly, W - right + 44, ly, color, 2.0);
        doc.text(W - right + 50, ly + 4, dimension_label(d), "start", 11);
    }
    return doc.str();
}

void render_line_plot(const TrendSeries& series, std::span<const Annotation> annotations,
                      const std::filesystem::path& path) {
    write_text_file(path, line_plot_svg(series, annotations));
}

// ---- histograms ----

Histogram build_histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty()) throw ValidationError("histogram needs at least one value");
    if (bins == 0) throw ValidationError("histogram needs at least one bin");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Histogram h;
    h.lo = *mn;
    h.bin_width = *mx > *mn ? (*mx - *mn) / static_cast<double>(bins) : 1.0;
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>(std::floor((v - h.lo) / h.bin_width));
        h.counts[std::min(idx, bins - 1)] += 1;
    }
    h.skewness = sample_skewness(values);
    h.total = values.size();
    return h;
}

HistogramPair citation_histograms(std::span<const std::int64_t> counts, std::size_t bins) {
    std::vector<double> raw;
    std::vector<double> logged;
    for (std::int64_t c : counts) {
        logged.push_back(log_citation_transform(c));
        raw.push_back(static_cast<double>(c));
    }
    return {build_histogram(raw, bins), build_histogram(logged, bins)};
}

std::string histogram_svg(const Histogram& h, const std::string& title, const std::string& x_label) {
    constexpr double W = 640, H = 400, left = 60, right = 20, top = 40, bottom = 70;
    const std::size_t peak = *std::max_element(h.counts.begin(), h.counts.end());
    const double x_hi = h.lo + h.bin_width * static_cast<double>(h.counts.size());
    const svg::LinearScale x{h.lo, x_hi, left, W - right};
    const svg::LinearScale y{0.0, static_cast<double>(std::max<std::size_t>(peak, 1)), H - bottom, top};
    svg::Document doc(W, H);
    doc.text(W / 2, 24, title, "middle", 16);
    for (double t : svg::nice_ticks(0, static_cast<double>(std::max<std::size_t>(peak, 1)), 5)) {
        doc.line(left, y(t), W - right, y(t), "#dddddd");
        doc.text(left - 8, y(t) + 4, format_fixed(t, 0), "end", 11);
    }
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] == 0) continue;
        const double x0 = x(h.lo + h.bin_width * static_cast<double>(i));
        const double x1 = x(h.lo + h.bin_width * static_cast<double>(i + 1));
        const double y0 = y(static_cast<double>(h.counts[i]));
        doc.rect(x0, y0, x1 - x0, H - bottom - y0, "#4c72b0", "white");
    }
    for (double t : svg::nice_ticks(h.lo, x_hi, 5)) {
        doc.line(x(t), H - bottom, x(t), H - bottom + 5, "black");
        doc.text(x(t), H - bottom + 18, format_fixed(t, t == std::floor(t) ? 0 : 2), "middle", 11);
    }
    doc.line(left, H - bottom, W - right, H - bottom, "black");
    doc.line(left, top, left, H - bottom, "black");
    doc.text((left + W - right) / 2, H - bottom + 38, x_label, "middle", 12);
    doc.text(18, (top + H - bottom) / 2, "Papers", "middle", 12, -90);
    doc.text(left, H - 10, "n = " + std::to_string(h.total) + ", skewness = " + format_fixed(h.skewness, 3),
             "start", 11);
    return doc.str();
}

std::string histograms_csv(const HistogramPair& pair) {
    std::string out = csv_row({"scale", "bin", "lower", "upper", "count"});
    auto emit = [&](const Histogram& h, const char* scale) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            out += csv_row({scale, std::to_string(i), shortest_decimal(h.lo + h.bin_width * static_cast<double>(i)),
                            shortest_decimal(h.lo + h.bin_width * static_cast<double>(i + 1)),
                            std::to_string(h.counts[i])});
        }
    };
    emit(pair.raw, "raw");
    emit(pair.log, "log1p");
    return out;
}

std::string histograms_text(const HistogramPair& pair) {
    std::vector<std::vector<std::string>> rows{{"Scale", "N", "Min", "Max", "Bins", "Skewness"}};
    auto row = [](const Histogram& h, const char* name) {
        return std::vector<std::string>{name,
                                        std::to_string(h.total),
                                        format_fixed(h.lo, 3),
                                        format_fixed(h.lo + h.bin_width * static_cast<double>(h.counts.size()), 3),
                                        std::to_string(h.counts.size()),
                                        format_fixed(h.skewness, 3)};
    };
    rows.push_back(row(pair.raw, "citations"));
    rows.push_back(row(pair.log, "ln(1+citations)"));
    std::string footer = std::fabs(pair.log.skewness) < std::fabs(pair.raw.skewness)
                             ? "Log transform reduces skewness magnitude (" + format_fixed(pair.raw.skewness, 3) +
                                   " -> " + format_fixed(pair.log.skewness, 3) + ")."
                             : "Log transform does not reduce skewness magnitude (" +
                                   format_fixed(pair.raw.skewness, 3) + " -> " + format_fixed(pair.log.skewness, 3) +
                                   ").";
    return "Citation count distribution\n\n" + align_columns(rows) + "\n" + footer + "\n";
}

HistogramPair render_histograms(std::span<const std::int64_t> counts, const std::filesystem::path& raw_path,
                                const std::filesystem::path& log_path, std::size_t bins) {
    HistogramPair pair = citation_histograms(counts, bins);
    write_text_file(raw_path, histogram_svg(pair.raw, "Citation counts", "Citations"));
    write_text_file(log_path, histogram_svg(pair.log, "Log-transformed citation counts", "ln(1 + citations)"));
    return pair;
}

// ---- census ----

std::string census_csv(const std::map<int, std::size_t>& census) {
    std::string out = csv_row({"year", "papers"});
    for (const auto& [year, n] : census) out += csv_row({year_label(year), std::to_string(n)});
    return out;
}

std::string census_text(const std::map<int, std::size_t>& census) {
    std::vector<std::vector<std::string>> rows{{"Year", "Papers"}};
    std::size_t total = 0;
    for (const auto& [year, n] : census) {
        rows.push_back({year_label(year), std::to_string(n)});
        total += n;
    }
    rows.push_back({"Total", std::to_string(total)});
    return "Papers in corpus by year\n\n" + align_columns(rows);
}

std::string census_svg(const std::map<int, std::size_t>& census) {
    constexpr double W = 720, H = 400, left = 60, right = 20, top = 40, bottom = 60;
    svg::Document doc(W, H);
    doc.text(W / 2, 24, "Papers in corpus by year", "middle", 16);
    std::size_t peak = 1;
    for (const auto& [year, n] : census) peak = std::max(peak, n);
    const svg::LinearScale y{0.0, static_cast<double>(peak), H - bottom, top};
    for (double t : svg::nice_ticks(0, static_cast<double>(peak), 5)) {
        doc.line(left, y(t), W - right, y(t), "#dddddd");
        doc.text(left - 8, y(t) + 4, format_fixed(t, 0), "end", 11);
    }
    const double slot = census.empty() ? 0.0 : (W - left - right) / static_cast<double>(census.size());
    double x = left;
    for (const auto& [year, n] : census) {
        const double y0 = y(static_cast<double>(n));
        doc.rect(x + slot * 0.1, y0, slot * 0.8, H - bottom - y0, "#4c72b0");
        doc.text(x + slot / 2, y0 - 4, std::to_string(n), "middle", 10);
        doc.text(x + slot / 2, H - bottom + 16, year_label(year), "middle", 10, census.size() > 12 ? -45 : 0);
        x += slot;
    }
    doc.line(left, H - bottom, W - right, H - bottom, "black");
    doc.line(left, top, left, H - bottom, "black");
    doc.text(18, (top + H - bottom) / 2, "Papers", "middle", 12, -90);
    return doc.str();
}

// ---- reliability ----

namespace {

std::string metric_name(const ReliabilityTable& table) {
    for (const auto& r : table) {
        if (r.alpha.ok()) return std::string(to_string(r.alpha.result->metric));
    }
    return "interval";
}

}  // namespace

std::string reliability_csv(const ReliabilityTable& table) {
    std::string out = csv_row({"dimension", "icc_2k", "icc_band", "icc_acceptable_range", "alpha", "alpha_metric",
                               "alpha_band", "alpha_acceptable_range", "n_subjects", "n_complete", "n_pairable",
                               "k_raters"});
    const std::string metric = metric_name(table);
    for (const auto& r : table) {
        std::vector<std::string> row{std::string(dimension_key(r.dimension))};
        if (r.icc.ok()) {
            const auto& band = interpret_band(r.icc.result->value, ReliabilityScale::icc);
            row.insert(row.end(), {shortest_decimal(r.icc.result->value), band.label,
                                   band.acceptable_range ? "true" : "false"});
        } else {
            row.insert(row.end(), {r.icc.error_kind, "", ""});
        }
        if (r.alpha.ok()) {
            const auto& band = interpret_band(r.alpha.result->value, ReliabilityScale::alpha);
            row.insert(row.end(), {shortest_decimal(r.alpha.result->value), metric, band.label,
                                   band.acceptable_range ? "true" : "false"});
        } else {
            row.insert(row.end(), {r.alpha.error_kind, metric, "", ""});
        }
        row.push_back(std::to_string(r.n_subjects));
        row.push_back(r.icc.ok() ? std::to_string(r.icc.result->n_subjects) : "");
        row.push_back(r.alpha.ok() ? std::to_string(r.alpha.result->n_pairable) : "");
        row.push_back(std::to_string(r.k_raters));
        out += csv_row(row);
    }
    return out;
}

std::string reliability_text(const ReliabilityTable& table) {
    const std::string metric = metric_name(table);
    std::vector<std::vector<std::string>> rows{
        {"Dimension", "ICC(2,k)", "ICC band", "Alpha (" + metric + ")", "Alpha band", "N", "k"}};
    std::vector<std::string> notes;
    for (const auto& r : table) {
        std::vector<std::string> row{std::string(dimension_label(r.dimension))};
        if (r.icc.ok()) {
            row.push_back(format_fixed(r.icc.result->value, 3));
            row.push_back(interpret_reliability(r.icc.result->value, ReliabilityScale::icc));
        } else {
            row.push_back(r.icc.error_kind);
            row.push_back("-");
            notes.push_back(std::string(dimension_label(r.dimension)) + " ICC: " + r.icc.error_message);
        }
        if (r.alpha.ok()) {
            row.push_back(format_fixed(r.alpha.result->value, 3));
            row.push_back(interpret_reliability(r.alpha.result->value, ReliabilityScale::alpha));
        } else {
            row.push_back(r.alpha.error_kind);
            row.push_back("-");
            notes.push_back(std::string(dimension_label(r.dimension)) + " alpha: " + r.alpha.error_message);
        }
        row.push_back(std::to_string(r.n_subjects));
        row.push_back(std::to_string(r.k_raters));
        rows.push_back(std::move(row));
    }
    std::string out = "Inter-rater reliability by dimension\n\n" + align_columns(rows);
    out += "\nBands: ICC poor < 0.5 <= moderate < 0.75 <= good < 0.9 <= excellent; "
           "alpha low < 0.4 <= tentative < 0.667 <= acceptable < 0.8 <= reliable.\n";
    for (const auto& n : notes) out += n + "\n";
    return out;
}

std::string reliability_svg(const ReliabilityTable& table) {
    constexpr double W = 760, H = 420, left = 60, right = 150, top = 40, bottom = 80;
    double lo = 0.0;
    for (const auto& r : table) {
        if (r.icc.ok()) lo = std::min(lo, r.icc.result->value);
        if (r.alpha.ok()) lo = std::min(lo, r.alpha.result->value);
    }
    lo = std::floor(lo * 5.0) / 5.0;
    const svg::LinearScale y{lo, 1.0, H - bottom, top};
    svg::Document doc(W, H);
    doc.text((left + W - right) / 2, 24, "Inter-rater reliability by dimension", "middle", 16);
    for (double t : svg::nice_ticks(lo, 1.0, 5)) {
        doc.line(left, y(t), W - right, y(t), "#dddddd");
        doc.text(left - 8, y(t) + 4, format_fixed(t, 1), "end", 11);
    }
    const double slot = (W - left - right) / static_cast<double>(kDimensionCount);
    const double bar = slot * 0.35;
    constexpr std::string_view icc_color = "#4c72b0";
    constexpr std::string_view alpha_color = "#dd8452";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& r = table[i];
        const double x0 = left + slot * static_cast<double>(i) + slot * 0.15;
        auto draw = [&](double x, const auto& outcome, std::string_view color) {
            if (outcome.ok()) {
                const double v = outcome.result->value;
                const double ytop = y(std::max(v, 0.0));
                const double ybot = y(std::min(v, 0.0));
                doc.rect(x, ytop, bar, ybot - ytop, color);
            } else {
                doc.text(x + bar / 2, y(0.0) - 6, outcome.error_kind, "start", 9, -90);
            }
        };
        draw(x0, r.icc, icc_color);
        draw(x0 + bar, r.alpha, alpha_color);
        doc.text(left + slot * (static_cast<double>(i) + 0.5), H - bottom + 18, dimension_column(r.dimension),
                 "middle", 11);
    }
    doc.line(left, y(0.0), W - right, y(0.0), "black");
    doc.line(left, top, left, H - bottom, "black");
    doc.line(left, y(0.5), W - right, y(0.5), icc_color, 1.0, "6 4");
    doc.line(left, y(0.4), W - right, y(0.4), alpha_color, 1.0, "6 4");
    doc.rect(W - right + 16, top, 14, 14, icc_color);
    doc.text(W - right + 36, top + 11, "ICC(2,k)", "start", 11);
    doc.rect(W - right + 16, top + 22, 14, 14, alpha_color);
    doc.text(W - right + 36, top + 33, "Krippendorff alpha", "start", 11);
    doc.text(W - right + 16, top + 60, "dashed: ICC 0.5, alpha 0.4", "start", 9);
    return doc.str();
}

}  // namespace bltrend
