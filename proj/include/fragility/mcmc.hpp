#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "fragility/probit_model.hpp"

namespace fragility {

// Adaptive Metropolis-Hastings configuration (Haario-style covariance
// adaptation). Sampling runs in u = (log alpha, log beta) with the Jacobian
// folded into the target, so chain samples always sit in Theta.
struct McmcConfig {
  int n_samples = 5000;        // retained draws
  int burn_in = 5000;          // discarded initial draws
  int adaptation_start = 500;  // iteration at which adaptation kicks in
  double proposal_scale = 2.38 * 2.38 / 2.0;  // s_d with d = 2
  double covariance_epsilon = 1e-6;
  double initial_step = 0.1;   // isotropic u-proposal std before adaptation
  std::uint64_t rng_seed = 0;
};

struct Chain {
  std::vector<FragilityParams> samples;  // post burn-in
  std::vector<double> log_target;        // target trace, same indexing
  double acceptance_rate = 0.0;          // over the post-burn-in phase
};

// Pointwise quantile band of the fragility-curve family over a chain.
struct CurveBand {
  std::vector<double> a_grid;
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
};

using LogTargetFn = std::function<double(const FragilityParams&)>;

// Random-walk M-H on u with Gaussian proposals; after adaptation_start the
// proposal covariance is s_d * (empirical u-covariance) + s_d * eps * I.
// Deterministic given cfg.rng_seed. Throws if the initial target is not
// finite or if the chain never accepts.
Chain run_adaptive_mh(const LogTargetFn& log_target,
                      const FragilityParams& init, const McmcConfig& cfg);

// Pointwise empirical r/2 and 1 - r/2 quantiles (Hazen convention) of the
// member curves, plus the median curve.
CurveBand band_from_chain(const std::vector<FragilityParams>& samples,
                          const std::vector<double>& a_grid, double r);

// Regular a-grid 0 = A_0 < ... < A_n = a_max (n subdivisions, n+1 nodes).
std::vector<double> regular_im_grid(double a_max, int n);

// P_f(a; theta) extended by its limit 0 at a = 0, for curve grids that
// include the origin.
double curve_value(const FragilityParams& theta, double a);

}  // namespace fragility
