// Scalar special functions used by the bound calculators.
#pragma once

namespace mbrlab {

// Regularized incomplete beta I(x; a, b) via Lentz's continued fraction.
// Absolute error below 1e-12 for a, b in the ranges used here.
double reg_inc_beta(double x, double a, double b);

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

// Inverse of the standard normal CDF.
double normal_quantile(double p);

// ln C(n, k) via lgamma, valid for large arguments.
double log_binomial(double n, double k);

double log_factorial(double n);

} // namespace mbrlab
