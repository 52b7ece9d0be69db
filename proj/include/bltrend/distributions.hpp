#pragma once

#include <span>

namespace bltrend {

/// ln B(a, b). Uses a Stirling-series difference when the larger argument
/// is big, where lgamma(a+b) - lgamma(a) would cancel.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) with y = 1 - x supplied separately
/// so callers can pass a tail probability without cancellation.
/// Modified Lentz evaluation of the continued fraction, reflected through
/// I_x(a,b) = 1 - I_y(b,a) when x is past the mean.
double regularized_incomplete_beta(double a, double b, double x, double y);
double regularized_incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with `dof` degrees of freedom.
/// Throws ValidationError for non-finite t or non-positive dof.
double student_t_sf(double t, double dof);

/// 2 * P(T > |t|).
double student_t_two_sided_p(double t, double dof);

/// q with P(T > q) = upper_tail, for upper_tail in (0, 1).
double student_t_upper_quantile(double upper_tail, double dof);

/// P(F > f) for Fisher's F with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

/// Moment skewness m3 / m2^(3/2); 0 for constant input.
double sample_skewness(std::span<const double> values);

}  // namespace bltrend
