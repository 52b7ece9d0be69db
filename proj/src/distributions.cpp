#include "bltrend/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bltrend/errors.hpp"

namespace bltrend {

namespace {

// lgamma(x) - [(x - 0.5) ln x - x + 0.5 ln(2 pi)], asymptotic series; |error| < 1e-13 for x >= 10.
double stirling_correction(double x) {
    const double x2 = x * x;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x;
}

// Continued fraction for I_x(a, b); converges quickly for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 200000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

double accurate_log(double v, double complement) {
    return v < 0.5 ? std::log(v) : std::log1p(-complement);
}

}  // namespace

double log_beta(double a, double b) {
    const double big = std::max(a, b);
    const double small = std::min(a, b);
    if (big < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    // lgamma(big + small) - lgamma(big), rearranged to avoid cancellation.
    const double diff = (big - 0.5) * std::log1p(small / big) + small * std::log(big + small) - small +
                        stirling_correction(big + small) - stirling_correction(big);
    return std::lgamma(small) - diff;
}

double regularized_incomplete_beta(double a, double b, double x, double y) {
    if (!(a > 0) || !(b > 0)) throw ValidationError("incomplete beta needs positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = a * accurate_log(x, y) + b * accurate_log(y, x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front - std::log(a)) * beta_continued_fraction(a, b, x);
    }
    return 1.0 - std::exp(log_front - std::log(b)) * beta_continued_fraction(b, a, y);
}

double regularized_incomplete_beta(double a, double b, double x) {
    return regularized_incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_sf(double t, double dof) {
    if (!std::isfinite(t)) throw ValidationError("student_t_sf: t must be finite");
    if (!(dof > 0) || !std::isfinite(dof)) throw ValidationError("student_t_sf: dof must be positive");
    if (t == 0.0) return 0.5;
    const double t2 = t * t;
    const double denom = dof + t2;
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, dof / denom, t2 / denom);
    return t > 0 ? tail : 1.0 - tail;
}

double student_t_two_sided_p(double t, double dof) {
    return std::min(1.0, 2.0 * student_t_sf(std::fabs(t), dof));
}

double student_t_upper_quantile(double upper_tail, double dof) {
    if (!(upper_tail > 0.0 && upper_tail < 1.0)) throw ValidationError("quantile tail must lie in (0, 1)");
    if (upper_tail > 0.5) return -student_t_upper_quantile(1.0 - upper_tail, dof);
    if (upper_tail == 0.5) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_sf(hi, dof) > upper_tail) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ValidationError("quantile search diverged");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_sf(mid, dof) > upper_tail) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double f_sf(double f, double d1, double d2) {
    if (!(d1 > 0) || !(d2 > 0)) throw ValidationError("f_sf: degrees of freedom must be positive");
    if (std::isnan(f)) throw ValidationError("f_sf: statistic is NaN");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double denom = d2 + d1 * f;
    return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / denom, d1 * f / denom);
}

double sample_skewness(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(values.size());
    m3 /= static_cast<double>(values.size());
    if (m2 <= 0.0) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

}  // namespace bltrend
