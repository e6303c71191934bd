#pragma once

#include <vector>

#include "fragility/probit_model.hpp"

namespace fragility {

struct KmeansResult {
  std::vector<double> centroids;        // strictly increasing
  std::vector<int> assignments;         // cluster index per input value
  std::vector<std::size_t> cluster_sizes;
  int iterations = 0;
};

// Nonparametric Monte-Carlo reference curve: per-cluster empirical failure
// rates at the K-means centroids of the IM, with Gaussian-approximation 95%
// half-widths.
struct McCurve {
  std::vector<double> centroids;
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> failure_rates;
  std::vector<double> ci_half_widths;
  int merged_clusters = 0;  // empty clusters folded into a neighbor
};

// Lloyd iterations in 1-D with deterministic quantile initialization
// (centroid j starts at the (j - 1/2)/n quantile). Converges when the
// assignment stops changing.
KmeansResult kmeans_1d(const std::vector<double>& values, int n_clusters);

McCurve mc_fragility(const Dataset& data, int n_clusters);

}  // namespace fragility
