#include "greenbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "greenbench/rng.hpp"

namespace greenbench::stats {

namespace {

// Continued fraction for I_x(a, b), evaluated by the modified Lentz method.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
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
  throw StatsError("incomplete beta continued fraction did not converge");
}

void require_finite(std::span<const double> xs) {
  for (const double x : xs) {
    if (!std::isfinite(x)) throw StatsError("non-finite value in delta series");
  }
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw StatsError("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0 || std::isnan(x)) throw StatsError("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw StatsError("degrees of freedom must be positive");
  if (std::isnan(t)) throw StatsError("t statistic is NaN");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(x, 0.5 * df, 0.5);
  return t >= 0.0 ? tail : 1.0 - tail;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw StatsError("mean of an empty series");
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  // Rounding can push the quotient an ulp past the extremes.
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return std::clamp(m, *lo, *hi);
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw StatsError("median of an empty series");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw StatsError("sample standard deviation needs n >= 2");
  const double m = mean(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

TTestResult paired_t(std::span<const double> deltas) {
  if (deltas.size() < 2) throw StatsError("paired t-test needs at least 2 paired differences");
  require_finite(deltas);
  TTestResult r;
  r.n = deltas.size();
  r.df = r.n - 1;
  r.mean = mean(deltas);
  r.sd = sample_sd(deltas);
  if (r.sd == 0.0) {
    if (r.mean == 0.0) {
      r.t = 0.0;
      r.p_two_sided = 1.0;
    } else {
      r.degenerate = true;
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean);
      r.p_two_sided = 0.0;
    }
    return r;
  }
  r.t = r.mean / (r.sd / std::sqrt(static_cast<double>(r.n)));
  const double df = static_cast<double>(r.df);
  // Two-sided p directly as I_x(df/2, 1/2) keeps precision for large |t|.
  r.p_two_sided = std::min(1.0, incomplete_beta(df / (df + r.t * r.t), 0.5 * df, 0.5));
  return r;
}

const char* to_string(Statistic s) { return s == Statistic::mean ? "mean" : "median"; }

std::size_t nearest_rank_index(double q, std::size_t b) {
  if (b == 0) throw StatsError("nearest rank of an empty vector");
  const double rank = std::ceil(q * static_cast<double>(b));
  if (rank <= 1.0) return 0;
  return std::min(b - 1, static_cast<std::size_t>(rank) - 1);
}

BootstrapCI bootstrap_ci(std::span<const double> deltas, Statistic statistic, std::size_t b, double level,
                         std::uint64_t seed) {
  if (deltas.size() < 2) throw StatsError("bootstrap needs at least 2 paired differences");
  if (b < 100) throw StatsError("bootstrap needs at least 100 resamples");
  if (!(level > 0.0 && level < 1.0)) throw StatsError("confidence level must be in (0, 1)");
  require_finite(deltas);

  const std::size_t n = deltas.size();
  Pcg32 rng(seed);
  std::vector<double> stats(b);
  std::vector<double> resample(n);
  for (std::size_t r = 0; r < b; ++r) {
    for (std::size_t i = 0; i < n; ++i) resample[i] = deltas[rng.bounded(static_cast<std::uint32_t>(n))];
    stats[r] = statistic == Statistic::mean ? mean(resample) : median(resample);
  }
  std::sort(stats.begin(), stats.end());

  BootstrapCI ci;
  ci.statistic = statistic;
  ci.level = level;
  ci.b = b;
  ci.seed = seed;
  const double tail = (1.0 - level) / 2.0;
  ci.low = stats[nearest_rank_index(tail, b)];
  ci.high = stats[nearest_rank_index(1.0 - tail, b)];
  return ci;
}

double binomial_half_cdf(std::size_t k, std::size_t n) {
  if (k >= n) return 1.0;
  if (n <= 62) {
    std::uint64_t coef = 1;  // C(n, 0)
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      sum += coef;
      coef = coef * (n - i) / (i + 1);
    }
    return std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
  }
  double sum = 0.0;
  const double log_half_n = static_cast<double>(n) * std::log(0.5);
  for (std::size_t i = 0; i <= k; ++i) {
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    sum += std::exp(log_c + log_half_n);
  }
  return std::min(1.0, sum);
}

SignTestResult sign_test(std::span<const double> deltas) {
  if (deltas.empty()) throw StatsError("sign test needs at least one paired difference");
  require_finite(deltas);
  SignTestResult r;
  for (const double d : deltas) {
    if (d > 0.0) ++r.positives;
    if (d != 0.0) ++r.n_nonzero;
  }
  if (r.n_nonzero == 0) {
    r.degenerate = true;
    r.p_two_sided = 1.0;
    return r;
  }
  const double lower = binomial_half_cdf(r.positives, r.n_nonzero);
  // P(X >= k) = P(X <= n - k) by symmetry of Binomial(n, 1/2).
  const double upper = binomial_half_cdf(r.n_nonzero - r.positives, r.n_nonzero);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(lower, upper));
  return r;
}

}  // namespace greenbench::stats
