#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "robustnet/stats.hpp"

using namespace robustnet;
using doctest::Approx;

TEST_SUITE("stats") {

TEST_CASE("mean, sample std and standard error on a hand-checked sample") {
  std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean_of(xs) == Approx(2.5));
  // var = ((1.5)^2 + (0.5)^2 + (0.5)^2 + (1.5)^2) / 3 = 5/3
  CHECK(sample_std(xs) == Approx(std::sqrt(5.0 / 3.0)));
  CHECK(std_error_of(xs) == Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(ci95_halfwidth(xs) == Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("degenerate samples") {
  std::vector<double> one{7.0};
  CHECK(mean_of(one) == 7.0);
  CHECK(sample_std(one) == 0.0);
  std::vector<double> same{3.0, 3.0, 3.0};
  CHECK(sample_std(same) == 0.0);
  std::vector<double> empty;
  CHECK_THROWS_AS(mean_of(empty), std::invalid_argument);
  CHECK_THROWS_AS(std_error_of(empty), std::invalid_argument);
}

TEST_CASE("regularized incomplete beta matches closed forms") {
  // I_x(1, 1) = x
  CHECK(regularized_incomplete_beta(1, 1, 0.3) == Approx(0.3).epsilon(1e-10));
  // I_x(1, b) = 1 - (1-x)^b
  CHECK(regularized_incomplete_beta(1, 4, 0.2) ==
        Approx(1.0 - std::pow(0.8, 4)).epsilon(1e-10));
  // I_x(2, 2) = 3x^2 - 2x^3
  CHECK(regularized_incomplete_beta(2, 2, 0.3) ==
        Approx(3 * 0.3 * 0.3 - 2 * 0.3 * 0.3 * 0.3).epsilon(1e-10));
  // Symmetry point
  CHECK(regularized_incomplete_beta(5, 5, 0.5) == Approx(0.5).epsilon(1e-10));
  // Endpoints
  CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
  CHECK_THROWS_AS(regularized_incomplete_beta(0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, 1.5), std::invalid_argument);
}

TEST_CASE("student t cdf matches independent references") {
  CHECK(student_t_cdf(0.0, 5) == Approx(0.5).epsilon(1e-12));
  // df=1 is the Cauchy distribution: cdf(t) = 1/2 + atan(t)/pi; cdf(1) = 3/4.
  CHECK(student_t_cdf(1.0, 1) == Approx(0.75).epsilon(1e-9));
  // df=2 closed form: 1/2 + t / (2 sqrt(2 + t^2)); cdf(1) = 0.78867513...
  CHECK(student_t_cdf(1.0, 2) == Approx(0.7886751345948129).epsilon(1e-9));
  // Symmetry.
  CHECK(student_t_cdf(-1.3, 7) == Approx(1.0 - student_t_cdf(1.3, 7)).epsilon(1e-12));
  // Large df approaches the normal distribution.
  CHECK(student_t_cdf(1.96, 1e6) == Approx(0.975).epsilon(1e-3));
  CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("paired one-sided t test against a numerically integrated oracle") {
  // diffs {2,1,3,2}: mean 2, sd sqrt(2/3), t = 4.898979, df 3.
  std::vector<double> a{5, 4, 7, 6}, b{3, 3, 4, 4};
  PairedTTest r = paired_one_sided_ttest(a, b);
  CHECK(r.t_statistic == Approx(4.898979485566356).epsilon(1e-9));
  // Upper-tail p from Simpson integration of the t density (frozen).
  CHECK(r.p_one_sided == Approx(0.00813830159188204).epsilon(1e-6));
}

TEST_CASE("paired t test degenerate and symmetric cases") {
  std::vector<double> a{2, 2, 2}, b{1, 1, 1};
  PairedTTest win = paired_one_sided_ttest(a, b);
  CHECK(win.p_one_sided == 0.0);  // zero spread, positive mean difference
  PairedTTest lose = paired_one_sided_ttest(b, a);
  CHECK(lose.p_one_sided == 1.0);
  std::vector<double> c{1, 2, 3, 4}, d{2, 1, 4, 3};  // diffs sum to zero
  PairedTTest even = paired_one_sided_ttest(c, d);
  CHECK(even.p_one_sided == Approx(0.5).epsilon(1e-9));
  std::vector<double> short_a{1}, short_b{0};
  CHECK_THROWS_AS(paired_one_sided_ttest(short_a, short_b), std::invalid_argument);
  CHECK_THROWS_AS(paired_one_sided_ttest(a, c), std::invalid_argument);
}

}  // TEST_SUITE
