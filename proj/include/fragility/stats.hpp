#pragma once

#include <cmath>
#include <span>
#include <vector>

// Scalar statistical helpers shared across the library. The stable log-CDF
// is the workhorse: every likelihood and Fisher-information evaluation goes
// through it, and it must not underflow near degenerate parameters.

namespace fragility {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274;

// Standard normal pdf.
inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

inline double log_norm_pdf(double x) {
  return -0.5 * x * x - kLogSqrt2Pi;
}

// Standard normal cdf via erfc; accurate in the lower tail down to the
// erfc underflow limit (x ~ -37.5).
inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

// log Phi(x), stable over the whole clamped range |x| <= 38.
// Upper tail: log1p of the complementary mass. Lower tail below the erfc
// underflow limit: asymptotic expansion of Mills' ratio.
inline double log_norm_cdf(double x) {
  if (x > 5.0) {
    return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  }
  if (x > -37.0) {
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  const double x2 = x * x;
  return -0.5 * x2 - kLogSqrt2Pi - std::log(-x) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

// phi(x) / Phi(x), computed in log space so the ratio survives deep tails.
inline double inverse_mills(double x) {
  return std::exp(log_norm_pdf(x) - log_norm_cdf(x));
}

// log(sum exp(v_i)) over a span; -inf input entries are permitted.
double log_sum_exp(std::span<const double> values);

// Hazen-convention empirical quantile of a sorted vector.
// position = p*n + 0.5 with linear interpolation, clamped to [1, n].
double quantile_sorted(std::span<const double> sorted, double p);

// Convenience: sorts a copy.
double quantile(std::vector<double> values, double p);

}  // namespace fragility
