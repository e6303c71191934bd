#include "fragility/stats.hpp"

#include <algorithm>
#include <limits>

namespace fragility {

double log_sum_exp(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  double h = p * n + 0.5;
  h = std::clamp(h, 1.0, n);
  const auto lo = static_cast<std::size_t>(std::floor(h)) - 1;
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - std::floor(h);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

}  // namespace fragility
