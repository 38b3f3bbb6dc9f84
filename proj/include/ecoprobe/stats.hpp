#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

namespace ecoprobe::stats {

enum class Method { exact, normal_approx, t };

std::string_view to_string(Method m);

struct TestResult {
  double statistic{0.0};
  double p_two_sided{1.0};  // (0, 1]
  std::size_t n_effective{0};
  Method method{Method::exact};
  std::optional<std::pair<double, double>> ci95;  // t-test only
  std::optional<double> estimate;                 // t-test: mean of post - pre
  std::optional<double> df;                       // t-test only
};

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
double student_t_cdf(double t, double df);
// Two-sided tail P(|T| >= |t|), computed without cancellation.
double student_t_two_sided(double t, double df);
// Inverse CDF for p in (0, 1).
double student_t_quantile(double p, double df);

// Upper tail P(W+ >= w) of the signed-rank statistic for n untied ranks 1..n, and
// the lower tail P(W+ <= w). Counts come from the subset-sum distribution of 1..n.
double signed_rank_upper_tail(std::size_t n, double w);
double signed_rank_lower_tail(std::size_t n, double w);

enum class WilcoxonMethod { automatic, exact, normal };

inline constexpr std::size_t kWilcoxonExactMaxN = 20;

// Paired signed-rank test on d = x - y. Zero differences are dropped, ties get mid-ranks,
// the statistic is the positive-rank sum. `automatic` is exact for n_effective <= 20
// without ties, otherwise a tie- and continuity-corrected normal approximation.
// Throws Error(invalid_input) for unequal lengths, empty input, or all-zero differences.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                WilcoxonMethod method = WilcoxonMethod::automatic);

// Paired t-test on d = post - pre with a 95% confidence interval for mean(d).
// Throws Error(invalid_input) for n < 2, unequal lengths, or zero variance.
TestResult paired_t_test(std::span<const double> pre, std::span<const double> post);

}  // namespace ecoprobe::stats
