#pragma once

namespace recon::special {

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with nu degrees of freedom.
double student_t_cdf(double t, double nu);

// Two-sided p-value for the Pearson correlation r on n pairs under the
// classical t reference (descriptive only under autocorrelation).
double corr_pvalue(double r, int n);

// Exact two-sided binomial test p-value at success probability 1/2:
// sum of P(X = j) over all j with P(X = j) <= P(X = k).
double binom_test_half(int k, int n);

}  // namespace recon::special
