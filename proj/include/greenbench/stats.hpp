// Small-sample inference over paired differences.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace greenbench::stats {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double x, double a, double b);

/// P(T > t) for Student's t with `df` degrees of freedom.
double student_t_sf(double t, double df);

struct TTestResult {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
  double t = 0.0;
  std::size_t df = 0;
  double p_two_sided = 1.0;
  /// Zero spread with non-zero mean: t is infinite and p is reported as 0.
  bool degenerate = false;
};

TTestResult paired_t(std::span<const double> deltas);

enum class Statistic { mean, median };

const char* to_string(Statistic s);

struct BootstrapCI {
  Statistic statistic = Statistic::mean;
  double level = 0.95;
  std::size_t b = 20000;
  double low = 0.0;
  double high = 0.0;
  std::uint64_t seed = 42;
};

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
double sample_sd(std::span<const double> xs);

/// Index of the nearest-rank quantile q in a sorted vector of length b:
/// ceil(q * b) - 1, clamped to [0, b - 1].
std::size_t nearest_rank_index(double q, std::size_t b);

/// Percentile bootstrap. Resample r draws n indices with Pcg32(seed).bounded(n)
/// from one sequential stream; the interval bounds are the nearest-rank
/// order statistics at (1 - level)/2 and 1 - (1 - level)/2.
BootstrapCI bootstrap_ci(std::span<const double> deltas, Statistic statistic, std::size_t b = 20000,
                         double level = 0.95, std::uint64_t seed = 42);

struct SignTestResult {
  std::size_t positives = 0;
  std::size_t n_nonzero = 0;
  double p_two_sided = 1.0;
  /// Every delta was zero; p is 1 by convention.
  bool degenerate = false;
};

/// Exact two-sided sign test; zero deltas are excluded.
SignTestResult sign_test(std::span<const double> deltas);

/// P(X <= k) for X ~ Binomial(n, 1/2), summed exactly in integers.
double binomial_half_cdf(std::size_t k, std::size_t n);

}  // namespace greenbench::stats
