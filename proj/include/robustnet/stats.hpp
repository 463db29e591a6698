#pragma once

#include <span>

namespace robustnet {

double mean_of(std::span<const double> xs);

// Sample standard deviation (Bessel, n-1). Returns 0 for n < 2.
double sample_std(std::span<const double> xs);

// sample_std / sqrt(n).
double std_error_of(std::span<const double> xs);

// Half-width of a normal-approximation 95% confidence interval.
double ci95_halfwidth(std::span<const double> xs);

// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

struct PairedTTest {
  double t_statistic;
  double p_one_sided;  // P(mean(a - b) <= observed | no difference); small => a > b
};

// One-sided paired test of mean(a) > mean(b). a and b must have equal size >= 2.
PairedTTest paired_one_sided_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace robustnet
