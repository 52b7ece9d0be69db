#include <algorithm>
#include <charconv>
#include <cmath>

#include "bltrend/errors.hpp"
#include "bltrend/jsonutil.hpp"
#include "bltrend/regression.hpp"
#include "bltrend/report.hpp"

namespace bltrend {

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return shortest_decimal(value);
    if (decimals < 0) throw ValidationError("decimals must be non-negative");
    char buf[512];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    std::string digits(buf, end);
    const bool negative = !digits.empty() && digits.front() == '-';
    if (negative) digits.erase(0, 1);

    const auto dot = digits.find('.');
    std::string whole = dot == std::string::npos ? digits : digits.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : digits.substr(dot + 1);
    const auto keep = static_cast<std::size_t>(decimals);
    bool round_up = frac.size() > keep && frac[keep] >= '5';
    frac.resize(keep, '0');

    if (round_up) {
        std::string all = whole + frac;
        int i = static_cast<int>(all.size()) - 1;
        for (; i >= 0; --i) {
            if (all[static_cast<std::size_t>(i)] == '9') {
                all[static_cast<std::size_t>(i)] = '0';
            } else {
                ++all[static_cast<std::size_t>(i)];
                break;
            }
        }
        if (i < 0) all.insert(all.begin(), '1');
        whole = all.substr(0, all.size() - keep);
        frac = all.substr(all.size() - keep);
    }
    std::string out = (negative && value != 0.0) ? "-" : "";
    out += whole;
    if (keep > 0) out += "." + frac;
    return out;
}

std::string coefficient_cell(const Coefficient& c, bool with_interval) {
    std::string cell = format_fixed(c.estimate) + significance_stars(c.p_value);
    if (with_interval) cell += " [" + format_fixed(c.ci_low) + ", " + format_fixed(c.ci_high) + "]";
    return cell;
}

namespace {

std::vector<std::string> predictor_names(TableStyle style) {
    if (style == TableStyle::table2) return {kOverallPredictor};
    std::vector<std::string> names;
    for (Dimension d : kDimensions) names.emplace_back(dimension_key(d));
    return names;
}

std::string csv_escape(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_escape(cells[i]);
    return out + "\n";
}

std::vector<int> all_years(const StratifiedResults& results) {
    std::vector<int> years;
    for (const auto& [y, r] : results.by_year) years.push_back(y);
    for (const auto& [y, r] : results.skipped) years.push_back(y);
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
    return years;
}

}  // namespace

std::string regression_table_csv(const StratifiedResults& results, TableStyle style) {
    std::vector<std::string> columns{kInterceptName};
    for (auto& n : predictor_names(style)) columns.push_back(std::move(n));

    std::vector<std::string> header{"year", "status", "r_squared", "n", "f_stat", "f_p_value"};
    for (const auto& c : columns) {
        for (const char* suffix : {"", "_se", "_t", "_p", "_ci_low", "_ci_high"}) header.push_back(c + suffix);
    }
    header.emplace_back("note");
    std::string out = join_csv(header);

    for (int year : all_years(results)) {
        std::vector<std::string> row{std::to_string(year)};
        if (auto it = results.by_year.find(year); it != results.by_year.end()) {
            const RegressionResult& r = it->second;
            row.insert(row.end(), {"ok", shortest_decimal(r.r_squared), std::to_string(r.n),
                                   shortest_decimal(r.f_stat), shortest_decimal(r.f_p_value)});
            for (const auto& name : columns) {
                const Coefficient& c = r.coefficient(name);
                row.insert(row.end(), {shortest_decimal(c.estimate), shortest_decimal(c.std_error),
                                       shortest_decimal(c.t_stat), shortest_decimal(c.p_value),
                                       shortest_decimal(c.ci_low), shortest_decimal(c.ci_high)});
            }
            row.emplace_back();
        } else {
            row.emplace_back("skipped");
            row.resize(header.size() - 1);
            row.push_back(results.skipped.at(year));
        }
        out += join_csv(row);
    }
    return out;
}

std::string regression_table_text(const StratifiedResults& results, TableStyle style) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Year", "R-squared", "N"};
    if (style == TableStyle::table1) {
        for (Dimension d : kDimensions) header.emplace_back(dimension_column(d));
    } else {
        header.insert(header.end(), {"F-statistic", "Prob (F-statistic)", "Overall Alignment Score"});
    }
    rows.push_back(header);

    std::vector<std::string> notes;
    for (int year : all_years(results)) {
        std::vector<std::string> row{std::to_string(year)};
        auto it = results.by_year.find(year);
        if (it == results.by_year.end()) {
            row.resize(header.size(), "-");
            notes.push_back(std::to_string(year) + " skipped: " + results.skipped.at(year));
            rows.push_back(std::move(row));
            continue;
        }
        const RegressionResult& r = it->second;
        row.push_back(format_fixed(r.r_squared));
        row.push_back(std::to_string(r.n));
        if (style == TableStyle::table1) {
            for (Dimension d : kDimensions) row.push_back(coefficient_cell(r.coefficient(dimension_key(d)), false));
        } else {
            row.push_back(format_fixed(r.f_stat));
            row.push_back(format_fixed(r.f_p_value));
            row.push_back(coefficient_cell(r.coefficient(kOverallPredictor), true));
        }
        rows.push_back(std::move(row));
    }

    std::string title = style == TableStyle::table1
                            ? "ln(1 + citations) on dimension scores, by year"
                            : "ln(1 + citations) on overall score, by year (95% CI in brackets)";
    std::string out = title + "\n\n" + align_columns(rows) + "\n";
    out += "*** p < 0.01, ** p < 0.05, * p < 0.10\n";
    for (const auto& n : notes) out += n + "\n";
    return out;
}

void render_regression_tables(const StratifiedResults& results, TableStyle style,
                              const std::filesystem::path& csv_path, const std::filesystem::path& txt_path) {
    write_text_file(csv_path, regression_table_csv(results, style));
    write_text_file(txt_path, regression_table_text(results, style));
}

}  // namespace bltrend
