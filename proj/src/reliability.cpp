#include "bltrend/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "bltrend/errors.hpp"

namespace bltrend {

RatingsMatrix::RatingsMatrix(std::vector<std::string> subjects, std::vector<std::string> raters,
                             std::vector<std::optional<int>> cells, int min_score, int max_score)
    : subjects_(std::move(subjects)), raters_(std::move(raters)), cells_(std::move(cells)) {
    if (raters_.size() < 2) throw ValidationError("ratings matrix needs at least two raters");
    if (cells_.size() != subjects_.size() * raters_.size()) {
        throw ValidationError("ratings matrix has " + std::to_string(cells_.size()) + " cells, expected " +
                              std::to_string(subjects_.size() * raters_.size()));
    }
    if (std::set<std::string>(subjects_.begin(), subjects_.end()).size() != subjects_.size()) {
        throw ValidationError("ratings matrix has duplicate subject labels");
    }
    if (std::set<std::string>(raters_.begin(), raters_.end()).size() != raters_.size()) {
        throw ValidationError("ratings matrix has duplicate rater labels");
    }
    for (const auto& c : cells_) {
        if (c && (*c < min_score || *c > max_score)) {
            throw ValidationError("rating " + std::to_string(*c) + " outside [" + std::to_string(min_score) + ", " +
                                  std::to_string(max_score) + "]");
        }
    }
}

IccResult icc_2k(const RatingsMatrix& m) {
    const std::size_t k = m.cols();
    std::vector<std::size_t> complete;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        bool full = true;
        for (std::size_t c = 0; c < k && full; ++c) full = m.at(r, c).has_value();
        if (full) complete.push_back(r);
    }
    const std::size_t n = complete.size();
    if (n < 2) {
        throw InsufficientData("ICC needs at least 2 complete subjects, have " + std::to_string(n));
    }

    // Integer totals keep N*SS exact: N*SS_total = N*sum(x^2) - T^2, etc.
    const auto N = static_cast<long long>(n * k);
    long long total = 0;
    long long sum_sq = 0;
    long long row_sq = 0;
    std::vector<long long> col_tot(k, 0);
    for (std::size_t r : complete) {
        long long row_tot = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const long long x = *m.at(r, c);
            row_tot += x;
            col_tot[c] += x;
            sum_sq += x * x;
        }
        total += row_tot;
        row_sq += row_tot * row_tot;
    }
    long long col_sq = 0;
    for (long long t : col_tot) col_sq += t * t;

    const long long t2 = total * total;
    const long long n_ss_total = N * sum_sq - t2;
    if (n_ss_total == 0) throw DegenerateMatrix("ICC undefined: every rating is identical");
    const long long n_ss_rows = static_cast<long long>(n) * row_sq - t2;
    const long long n_ss_cols = static_cast<long long>(k) * col_sq - t2;
    const long long n_ss_error = n_ss_total - n_ss_rows - n_ss_cols;

    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    IccResult out;
    out.n_subjects = n;
    out.k_raters = k;
    out.ms_rows = static_cast<double>(n_ss_rows) / static_cast<double>(N) / (dn - 1.0);
    out.ms_cols = static_cast<double>(n_ss_cols) / static_cast<double>(N) / (dk - 1.0);
    out.ms_error = static_cast<double>(n_ss_error) / static_cast<double>(N) / ((dn - 1.0) * (dk - 1.0));
    // Denominator scaled by N n (n-1)(k-1), exact in integers. It can be negative for
    // anti-correlated raters; only a zero is undefined.
    const long long n_denom = n_ss_rows * static_cast<long long>(n) * static_cast<long long>(k - 1) +
                              n_ss_cols * static_cast<long long>(n - 1) - n_ss_error;
    if (n_denom == 0) throw DegenerateMatrix("ICC undefined: zero ANOVA denominator");
    const double denom = out.ms_rows + (out.ms_cols - out.ms_error) / dn;
    out.value = (out.ms_rows - out.ms_error) / denom;
    return out;
}

std::string_view to_string(AlphaMetric metric) {
    switch (metric) {
        case AlphaMetric::nominal: return "nominal";
        case AlphaMetric::ordinal: return "ordinal";
        case AlphaMetric::interval: return "interval";
        case AlphaMetric::ratio: return "ratio";
    }
    return "unknown";
}

AlphaMetric alpha_metric_from_string(std::string_view name) {
    for (AlphaMetric m : {AlphaMetric::nominal, AlphaMetric::ordinal, AlphaMetric::interval, AlphaMetric::ratio}) {
        if (to_string(m) == name) return m;
    }
    throw ValidationError("unknown alpha metric '" + std::string(name) + "'");
}

AlphaResult krippendorff_alpha(const RatingsMatrix& m, AlphaMetric metric) {
    // Distinct values present anywhere; coincidences are indexed by position.
    std::map<int, std::size_t> value_index;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m.at(r, c)) value_index.emplace(*m.at(r, c), 0);
        }
    }
    std::vector<int> values;
    for (auto& [v, idx] : value_index) {
        idx = values.size();
        values.push_back(v);
    }
    const std::size_t V = values.size();

    std::vector<double> coincidence(V * V, 0.0);
    std::vector<double> unit_counts(V);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::fill(unit_counts.begin(), unit_counts.end(), 0.0);
        double m_u = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m.at(r, c)) {
                unit_counts[value_index.at(*m.at(r, c))] += 1.0;
                m_u += 1.0;
            }
        }
        if (m_u < 2) continue;
        for (std::size_t a = 0; a < V; ++a) {
            if (unit_counts[a] == 0) continue;
            for (std::size_t b = 0; b < V; ++b) {
                if (unit_counts[b] == 0) continue;
                const double pairs = a == b ? unit_counts[a] * (unit_counts[a] - 1.0) : unit_counts[a] * unit_counts[b];
                coincidence[a * V + b] += pairs / (m_u - 1.0);
            }
        }
    }

    std::vector<double> marginal(V, 0.0);
    double n = 0.0;
    for (std::size_t a = 0; a < V; ++a) {
        for (std::size_t b = 0; b < V; ++b) marginal[a] += coincidence[a * V + b];
        n += marginal[a];
    }
    // n is a sum of integers m_u, so rounding recovers it exactly.
    const auto n_pairable = static_cast<std::size_t>(std::llround(n));
    if (n_pairable < 2) {
        throw InsufficientData("alpha needs at least 2 pairable values, have " + std::to_string(n_pairable));
    }

    auto delta2 = [&](std::size_t a, std::size_t b) -> double {
        if (a == b) return 0.0;
        const double c = values[a];
        const double k = values[b];
        switch (metric) {
            case AlphaMetric::nominal: return 1.0;
            case AlphaMetric::interval: return (c - k) * (c - k);
            case AlphaMetric::ratio: {
                const double s = c + k;
                if (s == 0.0) return 0.0;
                return ((c - k) / s) * ((c - k) / s);
            }
            case AlphaMetric::ordinal: {
                const std::size_t lo = std::min(a, b);
                const std::size_t hi = std::max(a, b);
                double span = 0.0;
                for (std::size_t g = lo; g <= hi; ++g) span += marginal[g];
                span -= 0.5 * (marginal[a] + marginal[b]);
                return span * span;
            }
        }
        return 0.0;
    };

    double observed = 0.0;
    double expected = 0.0;
    for (std::size_t a = 0; a < V; ++a) {
        for (std::size_t b = 0; b < V; ++b) {
            if (a == b) continue;
            const double d = delta2(a, b);
            observed += coincidence[a * V + b] * d;
            expected += marginal[a] * marginal[b] * d;
        }
    }
    const double d_o = observed / n;
    const double d_e = expected / (n * (n - 1.0));
    if (!(d_e > 0.0)) throw DegenerateMatrix("alpha undefined: all pairable values are identical");
    return {1.0 - d_o / d_e, metric, n_pairable};
}

const std::vector<ReliabilityBand>& reliability_bands(ReliabilityScale scale) {
    static const std::vector<ReliabilityBand> icc = {
        {"poor", -std::numeric_limits<double>::infinity(), false},
        {"moderate", 0.5, true},
        {"good", 0.75, true},
        {"excellent", 0.9, true},
    };
    static const std::vector<ReliabilityBand> alpha = {
        {"low", -std::numeric_limits<double>::infinity(), false},
        {"tentative", 0.4, true},
        {"acceptable", 0.667, true},
        {"reliable", 0.8, true},
    };
    return scale == ReliabilityScale::icc ? icc : alpha;
}

const ReliabilityBand& interpret_band(double value, ReliabilityScale scale) {
    if (!std::isfinite(value)) throw ValidationError("reliability value must be finite");
    const auto& bands = reliability_bands(scale);
    const ReliabilityBand* chosen = &bands.front();
    for (const auto& band : bands) {
        if (value >= band.lower) chosen = &band;
    }
    return *chosen;
}

std::string interpret_reliability(double value, ReliabilityScale scale) { return interpret_band(value, scale).label; }

RatingsMatrix ratings_for(std::span<const Assessment> assessments, Dimension dimension) {
    std::set<std::string> subject_set;
    std::set<std::string> rater_set;
    for (const Assessment& a : assessments) {
        subject_set.insert(a.paper_id());
        rater_set.insert(a.model_id());
    }
    std::vector<std::string> subjects(subject_set.begin(), subject_set.end());
    std::vector<std::string> raters(rater_set.begin(), rater_set.end());
    std::map<std::string, std::size_t> row_of;
    std::map<std::string, std::size_t> col_of;
    for (std::size_t i = 0; i < subjects.size(); ++i) row_of[subjects[i]] = i;
    for (std::size_t j = 0; j < raters.size(); ++j) col_of[raters[j]] = j;

    std::vector<std::optional<int>> cells(subjects.size() * raters.size());
    for (const Assessment& a : assessments) {
        auto& cell = cells[row_of[a.paper_id()] * raters.size() + col_of[a.model_id()]];
        if (cell) throw ValidationError("duplicate assessment for " + a.paper_id() + " by " + a.model_id());
        cell = a.score(dimension);
    }
    return RatingsMatrix(std::move(subjects), std::move(raters), std::move(cells));
}

std::array<DimensionReliability, kDimensionCount> per_dimension_reliability(std::span<const Assessment> assessments,
                                                                            AlphaMetric metric) {
    std::set<std::string> models;
    for (const Assessment& a : assessments) models.insert(a.model_id());
    if (models.size() < 2) {
        throw InsufficientData("inter-rater reliability needs at least 2 models, have " + std::to_string(models.size()));
    }

    std::array<DimensionReliability, kDimensionCount> out{};
    for (Dimension d : kDimensions) {
        const RatingsMatrix matrix = ratings_for(assessments, d);
        DimensionReliability& dr = out[index_of(d)];
        dr.dimension = d;
        dr.n_subjects = matrix.rows();
        dr.k_raters = matrix.cols();
        try {
            dr.icc.result = icc_2k(matrix);
        } catch (const Error& e) {
            dr.icc.error_kind = e.kind();
            dr.icc.error_message = e.what();
        }
        try {
            dr.alpha.result = krippendorff_alpha(matrix, metric);
        } catch (const Error& e) {
            dr.alpha.error_kind = e.kind();
            dr.alpha.error_message = e.what();
        }
    }
    return out;
}

}  // namespace bltrend
