#include "fragility/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fragility/stats.hpp"

namespace fragility {

KmeansResult kmeans_1d(const std::vector<double>& values, int n_clusters) {
  if (values.empty()) throw std::invalid_argument("kmeans: empty input");
  if (n_clusters < 1) throw std::invalid_argument("kmeans: n_clusters >= 1");
  const std::set<double> distinct(values.begin(), values.end());
  if (static_cast<std::size_t>(n_clusters) > distinct.size()) {
    throw std::invalid_argument(
        "kmeans: more clusters than distinct values");
  }

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centroids(n_clusters);
  for (int j = 0; j < n_clusters; ++j) {
    centroids[j] = quantile_sorted(sorted, (j + 0.5) / n_clusters);
  }
  std::sort(centroids.begin(), centroids.end());
  centroids.erase(std::unique(centroids.begin(), centroids.end()),
                  centroids.end());

  KmeansResult res;
  res.assignments.assign(values.size(), 0);
  std::vector<int> prev(values.size(), -1);
  const int max_iter = 1000;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    // nearest centroid; centroids stay sorted so a binary search suffices
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto it = std::lower_bound(centroids.begin(), centroids.end(),
                                       values[i]);
      int j = static_cast<int>(it - centroids.begin());
      if (j == static_cast<int>(centroids.size()) ||
          (j > 0 && values[i] - centroids[j - 1] <= centroids[j] - values[i])) {
        --j;
      }
      res.assignments[i] = j;
    }
    if (res.assignments == prev) break;
    prev = res.assignments;
    std::vector<double> sums(centroids.size(), 0.0);
    std::vector<std::size_t> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sums[res.assignments[i]] += values[i];
      ++counts[res.assignments[i]];
    }
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      if (counts[j] > 0) centroids[j] = sums[j] / counts[j];
    }
    std::sort(centroids.begin(), centroids.end());
  }
  res.centroids = centroids;
  res.cluster_sizes.assign(centroids.size(), 0);
  for (int a : res.assignments) ++res.cluster_sizes[a];
  return res;
}

McCurve mc_fragility(const Dataset& data, int n_clusters) {
  if (data.empty()) throw std::invalid_argument("mc_fragility: empty dataset");
  if (n_clusters < 2) throw std::invalid_argument("mc_fragility: n >= 2");
  std::vector<double> ims;
  ims.reserve(data.size());
  for (const auto& o : data.observations) ims.push_back(o.im);
  KmeansResult km = kmeans_1d(ims, n_clusters);

  std::vector<std::size_t> fails(km.centroids.size(), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.observations[i].failed) ++fails[km.assignments[i]];
  }

  McCurve curve;
  for (std::size_t j = 0; j < km.centroids.size(); ++j) {
    if (km.cluster_sizes[j] == 0) {
      ++curve.merged_clusters;  // folded into the neighbor that owns its span
      continue;
    }
    const double n = static_cast<double>(km.cluster_sizes[j]);
    const double p = static_cast<double>(fails[j]) / n;
    curve.centroids.push_back(km.centroids[j]);
    curve.cluster_sizes.push_back(km.cluster_sizes[j]);
    curve.failure_rates.push_back(p);
    curve.ci_half_widths.push_back(1.96 * std::sqrt(p * (1.0 - p) / n));
  }
  return curve;
}

}  // namespace fragility
