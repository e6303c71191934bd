#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fragility/mcmc.hpp"
#include "fragility/mle.hpp"
#include "fragility/priors.hpp"
#include "fragility/probit_model.hpp"
#include "fragility/quadrature.hpp"

namespace fragility {

// Curve-comparison metrics: squared-L2 distances over [0, a_max] by
// composite Simpson on the regular p-subdivision.
struct MetricConfig {
  double a_max = 12.0;
  int subdivisions = 200;      // p, even
  double credibility = 0.95;   // 1 - r
  FragilityParams reference_curve{1.0, 1.0};  // full-data MLE
};

// A family of fragility curves sampled on the metric grid, row per curve.
using CurveEnsemble = std::vector<std::vector<double>>;

CurveEnsemble sample_curves(const std::vector<FragilityParams>& thetas,
                            const std::vector<double>& a_grid);

// Mean over the ensemble of || curve - reference ||_{L2}^2.
double quadratic_error(const CurveEnsemble& curves, const MetricConfig& cfg);
double quadratic_error(const std::vector<FragilityParams>& thetas,
                       const MetricConfig& cfg);

// || q_{1-r/2} - q_{r/2} ||_{L2}^2 of the pointwise empirical quantiles.
double credibility_width(const CurveEnsemble& curves, const MetricConfig& cfg);
double credibility_width(const std::vector<FragilityParams>& thetas,
                         const MetricConfig& cfg);

enum class Method { jeffreys, sk, bootstrap };

std::string method_name(Method m);

struct ReplicationOptions {
  PriorSpec jeffreys_prior;
  PriorSpec sk_prior;
  McmcConfig mcmc;        // n_samples is overridden by the study's L
  MleConfig mle;
  int threads = 1;
};

struct ReplicationRow {
  std::size_t k = 0;
  Method method = Method::jeffreys;
  std::string metric;  // "quadratic_error" | "credibility_width"
  double mean = 0.0;
  double lo = 0.0;     // empirical 2.5% over draws
  double hi = 0.0;     // empirical 97.5% over draws
  std::size_t n_excluded = 0;
};

struct ReplicationSummary {
  std::vector<ReplicationRow> rows;

  const ReplicationRow& find(std::size_t k, Method m,
                             const std::string& metric) const;
};

// For each k and method: m subsample draws without replacement from the
// full dataset, a per-draw fit (MCMC chain of L retained samples, or L
// bootstrap replicates), and both metrics; reports the mean and empirical
// 2.5/97.5 percentiles across draws. Failed draws are excluded and counted.
ReplicationSummary replication_study(const Dataset& full_data,
                                     const std::vector<std::size_t>& k_values,
                                     std::size_t m, int L,
                                     const std::vector<Method>& methods,
                                     const MetricConfig& cfg,
                                     const ReplicationOptions& options,
                                     std::uint64_t seed);

}  // namespace fragility
