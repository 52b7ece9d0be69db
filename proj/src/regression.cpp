#include "bltrend/regression.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "bltrend/distributions.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/timeutil.hpp"

namespace bltrend {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kCollinearLoading = 1e-6;

}  // namespace

DesignMatrix DesignMatrix::with_intercept(std::vector<std::string> predictor_names,
                                          const std::vector<std::vector<double>>& predictors,
                                          std::vector<double> response) {
    DesignMatrix d;
    d.columns.push_back(kInterceptName);
    for (auto& name : predictor_names) d.columns.push_back(std::move(name));
    if (predictors.size() != response.size()) {
        throw ValidationError("design has " + std::to_string(predictors.size()) + " rows but " +
                              std::to_string(response.size()) + " responses");
    }
    d.values.reserve(predictors.size() * d.columns.size());
    for (const auto& row : predictors) {
        if (row.size() + 1 != d.columns.size()) throw ValidationError("design row has the wrong number of predictors");
        d.values.push_back(1.0);
        d.values.insert(d.values.end(), row.begin(), row.end());
    }
    d.response = std::move(response);
    return d;
}

void DesignMatrix::validate() const {
    const std::size_t n = rows();
    const std::size_t p = cols();
    if (p == 0) throw ValidationError("design has no columns");
    if (values.size() != n * p) throw ValidationError("design cell count does not match rows x columns");
    if (std::set<std::string>(columns.begin(), columns.end()).size() != p) {
        throw ValidationError("design column names are not unique");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("design contains a non-finite cell");
    }
    for (double v : response) {
        if (!std::isfinite(v)) throw ValidationError("response contains a non-finite value");
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (at(r, 0) != 1.0) throw ValidationError("first design column must be an intercept of ones");
    }
    if (p < 2) throw ValidationError("design needs at least one predictor besides the intercept");
    if (n <= p) {
        throw InsufficientData("regression needs more observations than columns (n=" + std::to_string(n) +
                               ", p=" + std::to_string(p) + ")");
    }
}

const Coefficient& RegressionResult::coefficient(std::string_view name) const {
    for (const auto& c : coefficients) {
        if (c.name == name) return c;
    }
    throw ValidationError("no coefficient named '" + std::string(name) + "'");
}

RegressionResult ols_fit(const DesignMatrix& design) {
    design.validate();
    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto p = static_cast<Eigen::Index>(design.cols());
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        design.values.data(), n, p);
    const Eigen::Map<const Eigen::VectorXd> y(design.response.data(), n);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = kRankTolerance * s(0);
    std::set<std::string> collinear;
    for (Eigen::Index i = 0; i < p; ++i) {
        if (s(i) > cutoff) continue;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (std::fabs(svd.matrixV()(j, i)) > kCollinearLoading) collinear.insert(design.columns[j]);
        }
    }
    if (!collinear.empty()) {
        std::vector<std::string> names(collinear.begin(), collinear.end());
        std::string joined;
        for (const auto& name : names) joined += (joined.empty() ? "" : ", ") + name;
        throw RankError("design is rank deficient; collinear columns: " + joined, std::move(names));
    }

    const Eigen::VectorXd inv_s = s.cwiseInverse();
    const Eigen::VectorXd beta = svd.matrixV() * inv_s.asDiagonal() * (svd.matrixU().transpose() * y);
    const Eigen::VectorXd resid = y - X * beta;
    const double rss = resid.squaredNorm();
    const double tss = (y.array() - y.mean()).matrix().squaredNorm();
    if (!(tss > 0.0)) throw DegenerateMatrix("response has zero variance");

    RegressionResult out;
    out.n = static_cast<std::size_t>(n);
    out.dof_residual = static_cast<std::size_t>(n - p);
    out.rss = rss;
    out.tss = tss;
    const double dof = static_cast<double>(n - p);
    const double sigma2 = rss / dof;
    // (X'X)^-1 = V S^-2 V'
    const Eigen::MatrixXd unscaled = svd.matrixV() * inv_s.cwiseAbs2().asDiagonal() * svd.matrixV().transpose();
    const double t_crit = student_t_upper_quantile(0.025, dof);

    for (Eigen::Index j = 0; j < p; ++j) {
        Coefficient c;
        c.name = design.columns[static_cast<std::size_t>(j)];
        c.estimate = beta(j);
        c.std_error = std::sqrt(sigma2 * unscaled(j, j));
        if (c.std_error > 0.0) {
            c.t_stat = c.estimate / c.std_error;
            c.p_value = student_t_two_sided_p(c.t_stat, dof);
        } else if (c.estimate == 0.0) {
            c.t_stat = 0.0;
            c.p_value = 1.0;
        } else {
            c.t_stat = std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
            c.p_value = 0.0;
        }
        c.ci_low = c.estimate - t_crit * c.std_error;
        c.ci_high = c.estimate + t_crit * c.std_error;
        out.coefficients.push_back(std::move(c));
    }

    out.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
    const double df_model = static_cast<double>(p - 1);
    if (rss > 0.0) {
        out.f_stat = ((tss - rss) / df_model) / (rss / dof);
        out.f_p_value = f_sf(out.f_stat, df_model, dof);
    } else {
        out.f_stat = std::numeric_limits<double>::infinity();
        out.f_p_value = 0.0;
    }
    return out;
}

double log_citation_transform(std::int64_t count) {
    if (count < 0) throw ValidationError("citation count must be non-negative, got " + std::to_string(count));
    return std::log1p(static_cast<double>(count));
}

double multiplicative_effect(double coefficient) { return std::exp(coefficient); }

std::string significance_stars(double p_value) {
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

std::vector<PaperObservation> build_observations(std::span<const Assessment> assessments, const CorpusStore& store,
                                                 const RegressionOptions& options, StratifiedResults* tally) {
    struct Accumulator {
        std::array<double, kDimensionCount> sums{};
        double overall = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, Accumulator> per_paper;
    for (const Assessment& a : assessments) {
        Accumulator& acc = per_paper[a.paper_id()];
        for (Dimension d : kDimensions) acc.sums[index_of(d)] += a.score(d);
        acc.overall += a.overall();
        ++acc.count;
    }

    const std::set<int> wanted(options.years.begin(), options.years.end());
    std::vector<PaperObservation> out;
    std::set<std::string> snapshot_dates;
    for (const auto& [paper_id, acc] : per_paper) {
        const PaperRecord* record = store.find(paper_id);
        if (!record) {
            if (tally) ++tally->papers_not_in_corpus;
            continue;
        }
        if (!wanted.empty() && !wanted.contains(record->year)) continue;
        if (!record->citation_count) {
            if (tally) ++tally->papers_without_citations;
            continue;
        }
        snapshot_dates.insert(snapshot_date(*record->citations_fetched_at));
        PaperObservation obs;
        obs.paper_id = paper_id;
        obs.year = record->year;
        obs.citations = *record->citation_count;
        obs.log_citations = log_citation_transform(obs.citations);
        const auto count = static_cast<double>(acc.count);
        for (std::size_t i = 0; i < kDimensionCount; ++i) obs.mean_scores[i] = acc.sums[i] / count;
        obs.mean_overall = acc.overall / count;
        obs.n_models = acc.count;
        out.push_back(std::move(obs));
    }
    if (snapshot_dates.size() > 1 && !options.allow_mixed_snapshots) {
        std::string dates;
        for (const auto& d : snapshot_dates) dates += (dates.empty() ? "" : ", ") + d;
        throw SnapshotError("citation counts come from several snapshot dates (" + dates +
                            "); refetch or pass --allow-mixed-snapshots");
    }
    std::sort(out.begin(), out.end(), [](const PaperObservation& a, const PaperObservation& b) {
        return std::tie(a.year, a.paper_id) < std::tie(b.year, b.paper_id);
    });
    return out;
}

namespace {

void standardize_columns(std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return;
    const std::size_t k = rows.front().size();
    const auto n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < k; ++c) {
        double mean = 0.0;
        for (const auto& r : rows) mean += r[c];
        mean /= n;
        double var = 0.0;
        for (const auto& r : rows) var += (r[c] - mean) * (r[c] - mean);
        const double sd = rows.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        // A constant column stays constant and surfaces as a RankError.
        for (auto& r : rows) r[c] = sd > 0.0 ? (r[c] - mean) / sd : r[c];
    }
}

template <typename RowFn>
StratifiedResults stratified_fit(std::span<const Assessment> assessments, const CorpusStore& store,
                                 const RegressionOptions& options, std::vector<std::string> names, RowFn row_of) {
    StratifiedResults results;
    const auto observations = build_observations(assessments, store, options, &results);
    std::map<int, std::vector<const PaperObservation*>> by_year;
    for (const auto& obs : observations) by_year[obs.year].push_back(&obs);
    for (int year : options.years) {
        if (!by_year.contains(year)) results.skipped[year] = "no scored papers with citation counts";
    }

    const std::size_t p = names.size() + 1;
    for (const auto& [year, rows] : by_year) {
        if (rows.size() <= p) {
            results.skipped[year] = "InsufficientData: " + std::to_string(rows.size()) + " observations for " +
                                    std::to_string(p) + " columns";
            continue;
        }
        std::vector<std::vector<double>> predictors;
        std::vector<double> response;
        for (const PaperObservation* obs : rows) {
            predictors.push_back(row_of(*obs));
            response.push_back(obs->log_citations);
        }
        if (options.standardize) standardize_columns(predictors);
        try {
            results.by_year.emplace(year, ols_fit(DesignMatrix::with_intercept(names, predictors, std::move(response))));
        } catch (const Error& e) {
            results.skipped[year] = e.kind() + ": " + e.what();
        }
    }
    return results;
}

}  // namespace

StratifiedResults per_dimension_regressions(std::span<const Assessment> assessments, const CorpusStore& store,
                                            const RegressionOptions& options) {
    std::vector<std::string> names;
    for (Dimension d : kDimensions) names.emplace_back(dimension_key(d));
    return stratified_fit(assessments, store, options, std::move(names), [](const PaperObservation& obs) {
        return std::vector<double>(obs.mean_scores.begin(), obs.mean_scores.end());
    });
}

StratifiedResults overall_regression(std::span<const Assessment> assessments, const CorpusStore& store,
                                     const RegressionOptions& options) {
    return stratified_fit(assessments, store, options, {kOverallPredictor},
                          [](const PaperObservation& obs) { return std::vector<double>{obs.mean_overall}; });
}

}  // namespace bltrend
