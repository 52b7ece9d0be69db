#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bltrend/distributions.hpp"
#include "bltrend/errors.hpp"
#include "oracles.hpp"

using namespace bltrend;

namespace {

const std::vector<double> kDofs = {1, 2, 5, 10, 100, 1e5};

std::vector<double> t_grid() {
    std::vector<double> ts;
    for (double t = -50; t <= 50; t += 2.5) ts.push_back(t);
    for (double t : {-3.7, -1.96, -0.5, -0.01, 0.01, 0.5, 1.0, 1.645, 1.96, 2.576, 3.3}) ts.push_back(t);
    return ts;
}

}  // namespace

TEST(StudentT, MatchesQuadrature) {
    for (double dof : kDofs) {
        for (double t : t_grid()) {
            const double got = student_t_sf(t, dof);
            const double want = oracle::t_sf(t, dof);
            EXPECT_NEAR(got, want, 1e-9) << "t=" << t << " dof=" << dof;
        }
    }
}

TEST(StudentT, Symmetry) {
    for (double dof : kDofs) {
        for (double t : t_grid()) {
            EXPECT_NEAR(student_t_sf(t, dof) + student_t_sf(-t, dof), 1.0, 1e-12) << t << " " << dof;
        }
    }
}

TEST(StudentT, ClosedForms) {
    EXPECT_NEAR(student_t_sf(1.0, 1.0), 0.25, 1e-12);
    for (double t : {-4.0, -0.3, 0.7, 2.0, 25.0}) {
        EXPECT_NEAR(student_t_sf(t, 1.0), 0.5 - std::atan(t) / std::numbers::pi, 1e-13);
        // dof = 2 has sf = 1/2 - t / (2 sqrt(2 + t^2)).
        EXPECT_NEAR(student_t_sf(t, 2.0), 0.5 - t / (2.0 * std::sqrt(2.0 + t * t)), 1e-13);
    }
    for (double dof : kDofs) EXPECT_EQ(student_t_sf(0.0, dof), 0.5);
}

TEST(StudentT, TwoSided) {
    EXPECT_NEAR(student_t_two_sided_p(2.0, 10), 2 * student_t_sf(2.0, 10), 1e-15);
    EXPECT_NEAR(student_t_two_sided_p(-2.0, 10), 2 * student_t_sf(2.0, 10), 1e-15);
    EXPECT_EQ(student_t_two_sided_p(0.0, 4), 1.0);
}

TEST(StudentT, QuantileInvertsSf) {
    for (double dof : {1.0, 3.0, 30.0, 197.0}) {
        for (double q : {0.4, 0.1, 0.05, 0.025, 0.005}) {
            const double x = student_t_upper_quantile(q, dof);
            EXPECT_NEAR(student_t_sf(x, dof), q, 1e-12) << q << " " << dof;
        }
    }
    EXPECT_NEAR(student_t_upper_quantile(0.025, 1e6), 1.959963984540054, 1e-5);
    EXPECT_THROW(student_t_upper_quantile(0.0, 3), ValidationError);
}

TEST(StudentT, RejectsBadInput) {
    EXPECT_THROW(student_t_sf(1.0, 0.0), ValidationError);
    EXPECT_THROW(student_t_sf(NAN, 3.0), ValidationError);
}

TEST(FisherF, MatchesQuadrature) {
    for (auto [d1, d2] : std::vector<std::pair<double, double>>{{1, 5}, {2, 10}, {4, 45}, {5, 194}, {1, 198}}) {
        for (double f : {0.05, 0.5, 1.0, 2.0, 3.5, 8.0, 30.0}) {
            EXPECT_NEAR(f_sf(f, d1, d2), oracle::f_sf(f, d1, d2), 1e-10) << f << " " << d1 << " " << d2;
        }
    }
    EXPECT_EQ(f_sf(0.0, 3, 10), 1.0);
}

TEST(FisherF, SquaredTEquivalence) {
    for (double t : {0.3, 1.2, 2.7}) {
        EXPECT_NEAR(f_sf(t * t, 1, 17), student_t_two_sided_p(t, 17), 1e-12);
    }
}

TEST(IncompleteBeta, KnownValues) {
    EXPECT_NEAR(regularized_incomplete_beta(1, 1, 0.3), 0.3, 1e-15);
    EXPECT_NEAR(regularized_incomplete_beta(2, 3, 0.4), 0.5248, 1e-14);
    EXPECT_EQ(regularized_incomplete_beta(2, 3, 0.0), 0.0);
    EXPECT_EQ(regularized_incomplete_beta(2, 3, 1.0), 1.0);
    EXPECT_NEAR(log_beta(0.5, 0.5), std::log(std::numbers::pi), 1e-14);
    EXPECT_NEAR(log_beta(3, 4), std::log(1.0 / 60.0), 1e-14);
}

TEST(Skewness, MatchesDefinition) {
    const std::vector<double> v = {1, 2, 2, 3, 10, 0, 4};
    EXPECT_NEAR(sample_skewness(v), oracle::skewness(v), 1e-12);
    const std::vector<double> sym = {-2, -1, 0, 1, 2};
    EXPECT_NEAR(sample_skewness(sym), 0.0, 1e-15);
    const std::vector<double> flat = {3, 3, 3};
    EXPECT_EQ(sample_skewness(flat), 0.0);
}
