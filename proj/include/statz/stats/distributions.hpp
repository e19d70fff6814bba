#pragma once

namespace statz::stats {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
/// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double normal_cdf(double z);
double normal_sf(double z);
/// Inverse of the standard normal CDF (Wichura AS 241, ~1e-16 relative).
double normal_quantile(double p);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);
/// Upper tail of the F distribution.
double f_sf(double f, double df1, double df2);
/// Upper tail of the chi-square distribution.
double chi2_sf(double x, double df);

/// Upper tail of the studentized range distribution for `k` means with
/// infinite error degrees of freedom:
///
///   P(Q > q) = k * Integral phi(z) [Phi(z)^(k-1) - (Phi(z) - Phi(z - q))^(k-1)] dz
///
/// evaluated by adaptive Gauss-Kronrod quadrature (absolute error < 1e-10).
double studentized_range_sf(double q, int k);

}  // namespace statz::stats
