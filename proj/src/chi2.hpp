#pragma once

namespace gcmp {

// Regularized upper incomplete gamma Q(a, x): power series for x < a + 1,
// Lentz continued fraction otherwise.
double gamma_q(double a, double x);

// Upper tail P(X > t) for X ~ chi-squared(df).
double chi2_sf(double t, double df);

// x with chi2_sf(x, df) = 1 - p, by bracketing and bisection.
double chi2_quantile(double p, double df);

}  // namespace gcmp
