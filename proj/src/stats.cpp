#include "ecoprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "ecoprobe/error.hpp"

namespace ecoprobe::stats {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10'000;

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
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
  fail(ErrorCode::internal, "incomplete beta: continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers can pass an accurate complement.
double incomplete_beta_xy(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

void check_df(double df) {
  if (!std::isfinite(df) || df <= 0.0) invalid(fmt::format("degrees of freedom must be positive, got {}", df));
}

struct RankedDiffs {
  std::vector<double> diffs;  // nonzero, input order
  std::vector<double> ranks;  // mid-ranks of |diffs|
  std::vector<std::size_t> tie_sizes;
  bool has_ties{false};
};

RankedDiffs rank_differences(std::span<const double> x, std::span<const double> y) {
  RankedDiffs r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (!std::isfinite(d)) invalid("wilcoxon: non-finite observation");
    if (d != 0.0) r.diffs.push_back(d);
  }
  const std::size_t n = r.diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(r.diffs[a]) < std::fabs(r.diffs[b]);
  });
  r.ranks.assign(n, 0.0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(r.diffs[order[j + 1]]) == std::fabs(r.diffs[order[i]])) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = mid;
    const std::size_t size = j - i + 1;
    if (size > 1) {
      r.has_ties = true;
      r.tie_sizes.push_back(size);
    }
    i = j + 1;
  }
  return r;
}

// Number of subsets of {1..n} for each possible rank sum, normalized by 2^n.
std::vector<double> signed_rank_pmf(std::size_t n) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<double> counts(max_sum + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    reach += k;
    for (std::size_t s = reach; s >= k; --s) {
      counts[s] += counts[s - k];
      if (s == k) break;
    }
  }
  const double total = std::ldexp(1.0, static_cast<int>(n));
  for (auto& c : counts) c /= total;
  return counts;
}

// Reported p-values live in (0, 1]; tails below the smallest normal double are clamped.
double clamp_p(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::normal_approx: return "normal_approx";
    case Method::t: return "t";
  }
  return "exact";
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) invalid("incomplete beta: shape parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) invalid("incomplete beta: x must be in [0, 1]");
  return incomplete_beta_xy(a, b, x, 1.0 - x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_two_sided(double t, double df) {
  check_df(df);
  if (std::isnan(t)) invalid("student t: NaN statistic");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta_xy(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  check_df(df);
  if (!(p > 0.0 && p < 1.0)) invalid("student t quantile: p must be in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);
  // Upper tail target, bisected on the accurate tail function.
  const double tail = 2.0 * (1.0 - p);
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_two_sided(hi, df) > tail) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorCode::internal, "student t quantile: bracket overflow");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_two_sided(mid, df) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double signed_rank_upper_tail(std::size_t n, double w) {
  const auto pmf = signed_rank_pmf(n);
  double p = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    if (static_cast<double>(s) >= w) p += pmf[s];
  }
  return std::min(1.0, p);
}

double signed_rank_lower_tail(std::size_t n, double w) {
  const auto pmf = signed_rank_pmf(n);
  double p = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    if (static_cast<double>(s) <= w) p += pmf[s];
  }
  return std::min(1.0, p);
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                WilcoxonMethod method) {
  if (x.size() != y.size()) invalid("wilcoxon: samples must have equal length");
  if (x.empty()) invalid("wilcoxon: empty sample");

  const auto ranked = rank_differences(x, y);
  const std::size_t n = ranked.diffs.size();
  if (n == 0) invalid("degenerate sample: all differences are zero");

  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked.diffs[i] > 0.0) w_plus += ranked.ranks[i];
  }

  TestResult r;
  r.statistic = w_plus;
  r.n_effective = n;

  bool use_exact = false;
  switch (method) {
    case WilcoxonMethod::automatic: use_exact = n <= kWilcoxonExactMaxN && !ranked.has_ties; break;
    case WilcoxonMethod::exact:
      if (ranked.has_ties) invalid("wilcoxon: exact distribution requires untied differences");
      use_exact = true;
      break;
    case WilcoxonMethod::normal: use_exact = false; break;
  }

  if (use_exact) {
    const double lower = signed_rank_lower_tail(n, w_plus);
    const double upper = signed_rank_upper_tail(n, w_plus);
    r.method = Method::exact;
    r.p_two_sided = clamp_p(2.0 * std::min(lower, upper));
    return r;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  for (auto t : ranked.tie_sizes) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  const double dev = w_plus - mean;
  const double corrected = std::fabs(dev) <= 0.5 ? 0.0 : std::fabs(dev) - 0.5;
  const double z = var > 0.0 ? corrected / std::sqrt(var) : 0.0;
  r.method = Method::normal_approx;
  r.p_two_sided = clamp_p(2.0 * normal_cdf(-z));
  return r;
}

TestResult paired_t_test(std::span<const double> pre, std::span<const double> post) {
  if (pre.size() != post.size()) invalid("t-test: samples must have equal length");
  const std::size_t n = pre.size();
  if (n < 2) invalid("t-test: need at least two pairs");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = post[i] - pre[i];
    if (!std::isfinite(d[i])) invalid("t-test: non-finite observation");
  }
  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / nn;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (nn - 1.0));
  // Relative threshold: differences that agree to rounding error count as constant.
  const double scale = std::max(1.0, std::fabs(mean));
  if (!(sd > 1e-14 * scale)) invalid("zero variance: all paired differences are equal");

  const double se = sd / std::sqrt(nn);
  const double df = nn - 1.0;
  const double t = mean / se;
  const double crit = student_t_quantile(0.975, df);

  TestResult r;
  r.statistic = t;
  r.p_two_sided = clamp_p(student_t_two_sided(t, df));
  r.n_effective = n;
  r.method = Method::t;
  r.ci95 = std::pair{mean - crit * se, mean + crit * se};
  r.estimate = mean;
  r.df = df;
  return r;
}

}  // namespace ecoprobe::stats
