// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bltrend/config.hpp"
#include "bltrend/distributions.hpp"
#include "bltrend/errors.hpp"
#include "bltrend/pipeline.hpp"
#include "bltrend/regression.hpp"
#include "bltrend/reliability.hpp"
#include "bltrend/report.hpp"
#include "bltrend/rubric.hpp"
#include "oracles.hpp"
#include "synthetic_truth.hpp"
#include "test_util.hpp"

using namespace bltrend;

namespace {

const std::filesystem::path kSource = BLT_SOURCE_DIR;

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::vector<std::string> labels(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// 1,000 complete grids, n in [3, 30], k in [2, 5], scores 0..10; tolerance 1e-9; under 5 s.
Verdict icc_oracle() {
    std::mt19937 gen(101);
    std::uniform_int_distribution<int> score(0, 10);
    double worst = 0;
    int compared = 0, mismatched_errors = 0;
    const auto t0 = Clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + gen() % 28, k = 2 + gen() % 4;
        std::vector<std::optional<int>> cells;
        std::vector<double> raw;
        // Half the grids share a per-subject level so high agreement is exercised too.
        const bool correlated = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int base = score(gen);
            for (std::size_t j = 0; j < k; ++j) {
                const int v = correlated ? std::clamp(base + static_cast<int>(gen() % 5) - 2, 0, 10) : score(gen);
                cells.emplace_back(v);
                raw.push_back(v);
            }
        }
        std::optional<double> got;
        try {
            got = icc_2k(RatingsMatrix(labels("s", n), labels("r", k), cells)).value;
        } catch (const DegenerateMatrix&) {
        }
        const double want = oracle::icc_2k(raw, n, k);
        if (!got) {
            if (std::isfinite(want)) ++mismatched_errors;
            continue;
        }
        worst = std::max(worst, std::fabs(*got - want));
        ++compared;
    }
    const double elapsed = seconds_since(t0);
    Verdict v;
    v.pass = worst <= 1e-9 && elapsed < 5.0 && mismatched_errors == 0 && compared >= 990;
    v.detail = std::to_string(compared) + " grids, max |diff| " + fmt("%.2e", worst) + ", " + fmt("%.2f", elapsed) +
               " s (limit 1e-9, 5 s)";
    return v;
}

// 1,000 grids with 20% missing cells, interval and ordinal; tolerance 1e-9; perfect agreement exactly 1.
Verdict alpha_oracle() {
    std::mt19937 gen(202);
    std::uniform_int_distribution<int> score(0, 10);
    std::bernoulli_distribution missing(0.2);
    double worst = 0;
    int compared = 0, disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + gen() % 28, k = 2 + gen() % 4;
        std::vector<std::optional<int>> cells;
        std::vector<std::vector<int>> units(n);
        const bool correlated = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int base = score(gen);
            for (std::size_t j = 0; j < k; ++j) {
                const int v = correlated ? std::clamp(base + static_cast<int>(gen() % 5) - 2, 0, 10) : score(gen);
                if (missing(gen)) {
                    cells.emplace_back(std::nullopt);
                } else {
                    cells.emplace_back(v);
                    units[i].push_back(v);
                }
            }
        }
        const RatingsMatrix m(labels("s", n), labels("r", k), cells);
        for (auto [metric, om] : {std::pair{AlphaMetric::interval, oracle::Metric::interval},
                                  std::pair{AlphaMetric::ordinal, oracle::Metric::ordinal}}) {
            std::optional<double> want, got;
            try {
                want = oracle::alpha(units, om);
            } catch (const std::exception&) {
            }
            try {
                got = krippendorff_alpha(m, metric).value;
            } catch (const Error&) {
            }
            if (want.has_value() != got.has_value()) {
                ++disagreements;
                continue;
            }
            if (!want) continue;
            worst = std::max(worst, std::fabs(*got - *want));
            ++compared;
        }
    }

    // Perfect agreement with gaps: every present rating in a row equal.
    bool perfect_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + gen() % 10, k = 2 + gen() % 4;
        std::vector<std::optional<int>> cells;
        for (std::size_t i = 0; i < n; ++i) {
            const int v = static_cast<int>(i % 11);
            for (std::size_t j = 0; j < k; ++j) {
                cells.emplace_back(j > 0 && missing(gen) ? std::nullopt : std::optional<int>(v));
            }
        }
        const RatingsMatrix m(labels("s", n), labels("r", k), cells);
        for (auto metric : {AlphaMetric::interval, AlphaMetric::ordinal}) {
            try {
                if (krippendorff_alpha(m, metric).value != 1.0) perfect_ok = false;
            } catch (const InsufficientData&) {
            }
        }
    }
    Verdict v;
    v.pass = worst <= 1e-9 && disagreements == 0 && perfect_ok && compared >= 1900;
    v.detail = std::to_string(compared) + " fits, max |diff| " + fmt("%.2e", worst) + ", perfect agreement " +
               (perfect_ok ? "== 1.0" : "!= 1.0") + " (limit 1e-9)";
    return v;
}

bool close(double got, double want, double tol) { return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want)); }

// 500 problems, n = 50, p (with intercept) in [2, 5]; tolerance 1e-6 (relative above magnitude 1);
// F against R^2 within 1e-9.
Verdict ols_oracle() {
    std::mt19937 gen(303);
    std::uniform_int_distribution<int> score(0, 10);
    std::normal_distribution<double> noise(0.0, 1.0);
    double worst = 0, worst_identity = 0;
    int fits = 0;
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t p = 2 + trial % 4, n = 50;
        std::vector<std::vector<double>> rows;
        std::vector<double> flat, y;
        std::vector<std::string> names;
        for (std::size_t j = 1; j < p; ++j) names.push_back("x" + std::to_string(j));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row;
            double yi = 0.3;
            flat.push_back(1.0);
            for (std::size_t j = 1; j < p; ++j) {
                row.push_back(score(gen));
                flat.push_back(row.back());
                yi += (trial % 3 == 0 ? 0.0 : 0.05 * static_cast<double>(j)) * row.back();
            }
            rows.push_back(row);
            y.push_back(yi + noise(gen));
        }
        const auto fit = ols_fit(DesignMatrix::with_intercept(names, rows, y));
        const auto want = oracle::ols(flat, y, n, p);
        auto check = [&](double a, double b) {
            const double d = std::fabs(a - b) / std::max(1.0, std::fabs(b));
            worst = std::max(worst, d);
            if (!close(a, b, 1e-6)) ok = false;
        };
        for (std::size_t j = 0; j < p; ++j) {
            const auto& c = fit.coefficients[j];
            check(c.estimate, want.beta[j]);
            check(c.std_error, want.se[j]);
            check(c.t_stat, want.t[j]);
            check(c.p_value, want.p[j]);
        }
        check(fit.r_squared, want.r2);
        check(fit.f_stat, want.f);
        check(fit.f_p_value, want.f_p);

        const double pp = static_cast<double>(p), nn = static_cast<double>(n);
        const double identity = (fit.r_squared / (pp - 1.0)) / ((1.0 - fit.r_squared) / (nn - pp));
        const double id_err = std::fabs(fit.f_stat - identity) / std::max(1.0, std::fabs(identity));
        worst_identity = std::max(worst_identity, id_err);
        if (id_err > 1e-9) ok = false;
        ++fits;
    }
    Verdict v;
    v.pass = ok && fits == 500;
    v.detail = std::to_string(fits) + " fits, max rel diff " + fmt("%.2e", worst) + ", F/R2 identity " +
               fmt("%.2e", worst_identity) + " (limits 1e-6, 1e-9)";
    return v;
}

// dof in {1, 2, 5, 10, 100, 1e5}, t in [-50, 50] step 0.25: 1e-9 vs quadrature, symmetry 1e-12, sf(1; 1) = 0.25 to 1e-12.
Verdict t_numerics() {
    double worst = 0, worst_sym = 0;
    int points = 0;
    for (double dof : {1.0, 2.0, 5.0, 10.0, 100.0, 1e5}) {
        for (int i = -200; i <= 200; ++i) {
            const double t = 0.25 * i;
            worst = std::max(worst, std::fabs(student_t_sf(t, dof) - oracle::t_sf(t, dof)));
            worst_sym = std::max(worst_sym, std::fabs(student_t_sf(t, dof) + student_t_sf(-t, dof) - 1.0));
            ++points;
        }
    }
    const double cauchy = std::fabs(student_t_sf(1.0, 1.0) - 0.25);
    Verdict v;
    v.pass = worst <= 1e-9 && worst_sym <= 1e-12 && cauchy <= 1e-12;
    v.detail = std::to_string(points) + " points, max |diff| " + fmt("%.2e", worst) + ", symmetry " +
               fmt("%.2e", worst_sym) + ", Cauchy " + fmt("%.2e", cauchy);
    return v;
}

// ln(1+c) = 0.5 * scalability + N(0, 0.1), 200 per year x 3 years; slope in [0.4, 0.6]; exp(0.5) = 1.6487 +- 1e-3; under 10 s.
Verdict synthetic_truth() {
    const auto t0 = Clock::now();
    const auto truth = testutil::planted_truth(2024, {2015, 2016, 2017}, 200, 0.5, 0.1);
    const auto results = per_dimension_regressions(truth.assessments, truth.store);
    bool ok = results.by_year.size() == 3;
    std::string slopes;
    for (const auto& [year, fit] : results.by_year) {
        const double b = fit.coefficient("scalability_with_computation").estimate;
        ok = ok && b >= 0.4 && b <= 0.6;
        slopes += (slopes.empty() ? "" : ", ") + std::to_string(year) + ": " + format_fixed(b, 4);
    }
    const double effect = multiplicative_effect(0.5);
    ok = ok && std::fabs(effect - 1.6487) <= 1e-3;
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 10.0;
    return {ok, "slopes " + slopes + "; exp(0.5) = " + format_fixed(effect, 4) + "; " + fmt("%.2f", elapsed) + " s"};
}

Verdict table_fidelity() {
    Coefficient c;
    c.estimate = 0.141;
    c.p_value = 0.0001;
    c.ci_low = 0.097;
    c.ci_high = 0.184;
    const std::string cell = coefficient_cell(c, true);
    const bool stars = significance_stars(0.0099) == "***" && significance_stars(0.01) == "**" &&
                       significance_stars(0.0499) == "**" && significance_stars(0.05) == "*" &&
                       significance_stars(0.0999) == "*" && significance_stars(0.10) == "" &&
                       significance_stars(0.5) == "";
    return {cell == "0.141*** [0.097, 0.184]" && stars, "cell \"" + cell + "\", thresholds 1%/5%/10% " +
                                                            (stars ? "ok" : "wrong")};
}

Verdict example_round_trip() {
    const std::string raw = testutil::read_file(kSource / "tests/fixtures/example_payload.json");
    const ScoreSet scores = validate_response(raw, RubricDefinition::builtin());
    std::string got;
    std::array<int, kDimensionCount> values{};
    for (const auto& s : scores) values[index_of(s.dimension)] = s.score;
    for (int s : values) got += (got.empty() ? "" : ",") + std::to_string(s);
    const int overall = overall_score(scores);
    return {got == "9,8,9,9,8" && overall == 43, "scores (" + got + "), overall " + std::to_string(overall)};
}

RunConfig synthetic_config(const testutil::TempDir& dir, const std::string& name, int parallelism) {
    RunConfig c = RunConfig::load(kSource / "configs/synthetic.json");
    c.out = dir / ("out-" + name);
    c.cache_dir = dir / ("cache-" + name);
    c.parallelism = parallelism;
    return c;
}

// Shipped synthetic corpus and config, stub judges only: parallelism 1 and 8, twice each, byte-identical; under 60 s.
Verdict end_to_end() {
    testutil::TempDir dir;
    const auto t0 = Clock::now();
    std::ostringstream sink;
    bool ok = true;
    std::vector<std::vector<std::pair<std::string, std::string>>> trees;
    const std::vector<std::pair<std::string, int>> runs = {{"p1a", 1}, {"p8a", 8}, {"p1b", 1}, {"p8b", 8}};
    for (const auto& [name, par] : runs) {
        const RunConfig c = synthetic_config(dir, name, par);
        for (const auto& m : c.models) ok = ok && m.rfind("stub:", 0) == 0;
        ok = ok && Pipeline(c, sink, sink).run("run-all") == kExitOk;
        trees.push_back(testutil::snapshot_tree(c.out));
    }
    std::size_t files = trees[0].size();
    for (const auto& t : trees) ok = ok && t == trees[0];
    ok = ok && files > 10;
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    return {ok, "4 runs, " + std::to_string(files) + " files each, trees " + (ok ? "identical" : "differ or failed") +
                    ", " + fmt("%.2f", elapsed) + " s"};
}

Verdict degenerate_visibility() {
    testutil::TempDir dir;
    RunConfig c = synthetic_config(dir, "degenerate", 1);
    c.models = {"stub:year-trend+jitter=a+const:favoring_fundamental_principles=5",
                "stub:year-trend+jitter=b+const:favoring_fundamental_principles=5",
                "stub:hash+jitter=c+const:favoring_fundamental_principles=5"};
    std::ostringstream sink;
    Pipeline p(c, sink, sink);
    const int code = p.run("run-all");
    const std::string csv = testutil::read_file(p.layout().report("reliability", "csv"));
    std::string row;
    for (std::istringstream in(csv); std::getline(in, row);) {
        if (row.rfind("favoring_fundamental_principles", 0) == 0) break;
        row.clear();
    }
    const bool marked = row.find("DegenerateMatrix") != std::string::npos;
    const bool others_fine = csv.find("learning_over_engineering,DegenerateMatrix") == std::string::npos;
    const bool finished = code != kExitFatal && std::filesystem::exists(p.layout().report("trends", "svg"));
    return {marked && others_fine && finished,
            "exit " + std::to_string(code) + ", principles row: " + (marked ? "DegenerateMatrix" : "no marker")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"1 ICC(2,k) oracle equivalence", icc_oracle},
        {"2 Krippendorff alpha oracle equivalence", alpha_oracle},
        {"3 OLS oracle equivalence", ols_oracle},
        {"4 Student t numerics", t_numerics},
        {"5 Synthetic truth recovery", synthetic_truth},
        {"6 Table cell fidelity", table_fidelity},
        {"7 Example payload round trip", example_round_trip},
        {"8 End-to-end determinism", end_to_end},
        {"9 Degenerate dimension visibility", degenerate_visibility},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s  criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
