#include "fragility/mcmc.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fragility/rng.hpp"
#include "fragility/stats.hpp"

namespace fragility {

namespace {

// Running mean / covariance of the u-history, updated per iteration.
struct RunningMoments {
  long n = 0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();

  void add(const Eigen::Vector2d& u) {
    ++n;
    const Eigen::Vector2d d = u - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (u - mean).transpose();
  }

  Eigen::Matrix2d covariance() const {
    if (n < 2) return Eigen::Matrix2d::Zero();
    return m2 / static_cast<double>(n - 1);
  }
};

}  // namespace

Chain run_adaptive_mh(const LogTargetFn& log_target,
                      const FragilityParams& init, const McmcConfig& cfg) {
  if (cfg.n_samples < 1 || cfg.burn_in < 0 || !(cfg.covariance_epsilon > 0.0)) {
    throw std::invalid_argument("invalid MCMC config");
  }
  if (!init.valid()) throw std::invalid_argument("invalid MCMC init");

  // Target in u-coordinates: log pi(theta(u)) + log alpha + log beta.
  // Proposals whose exp-mapping under/overflows out of (0, inf) lie outside
  // the representable domain and are rejected.
  auto u_target = [&](const Eigen::Vector2d& u) {
    const FragilityParams theta{std::exp(u[0]), std::exp(u[1])};
    if (!theta.valid() || !std::isfinite(theta.alpha) ||
        !std::isfinite(theta.beta)) {
      return -std::numeric_limits<double>::infinity();
    }
    const double t = log_target(theta);
    return t + u[0] + u[1];
  };

  Eigen::Vector2d u(std::log(init.alpha), std::log(init.beta));
  double lt = u_target(u);
  if (!std::isfinite(lt)) {
    throw std::invalid_argument("MCMC init has non-finite target value");
  }

  RngStream rng(cfg.rng_seed);
  RunningMoments moments;
  moments.add(u);

  const int total = cfg.burn_in + cfg.n_samples;
  Chain chain;
  chain.samples.reserve(cfg.n_samples);
  chain.log_target.reserve(cfg.n_samples);

  Eigen::Matrix2d chol = Eigen::Matrix2d::Identity() * cfg.initial_step;
  long accepted_retained = 0;

  for (int it = 0; it < total; ++it) {
    if (it >= cfg.adaptation_start) {
      Eigen::Matrix2d prop =
          cfg.proposal_scale * moments.covariance() +
          cfg.proposal_scale * cfg.covariance_epsilon *
              Eigen::Matrix2d::Identity();
      Eigen::LLT<Eigen::Matrix2d> llt(prop);
      if (llt.info() == Eigen::Success) chol = llt.matrixL();
    }
    const Eigen::Vector2d step(rng.normal(), rng.normal());
    const Eigen::Vector2d proposal = u + chol * step;
    const double lt_prop = u_target(proposal);
    bool accept = false;
    if (std::isfinite(lt_prop)) {
      const double log_ratio = lt_prop - lt;
      accept = log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio;
    }
    if (accept) {
      u = proposal;
      lt = lt_prop;
    }
    moments.add(u);
    if (it >= cfg.burn_in) {
      if (accept) ++accepted_retained;
      chain.samples.push_back({std::exp(u[0]), std::exp(u[1])});
      chain.log_target.push_back(lt);
    }
  }
  chain.acceptance_rate =
      static_cast<double>(accepted_retained) / cfg.n_samples;
  if (chain.acceptance_rate == 0.0 && cfg.n_samples > 100) {
    throw std::runtime_error("MCMC chain rejected every proposal");
  }
  return chain;
}

std::vector<double> regular_im_grid(double a_max, int n) {
  if (!(a_max > 0.0) || n < 1) {
    throw std::invalid_argument("invalid IM grid");
  }
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = a_max * i / n;
  return grid;
}

double curve_value(const FragilityParams& theta, double a) {
  return a > 0.0 ? fragility_probability(theta, a) : 0.0;
}

CurveBand band_from_chain(const std::vector<FragilityParams>& samples,
                          const std::vector<double>& a_grid, double r) {
  if (samples.empty()) throw std::invalid_argument("band: empty chain");
  if (!(r > 0.0) || r > 1.0) {
    throw std::invalid_argument("band: credibility r must lie in (0,1]");
  }
  CurveBand band;
  band.a_grid = a_grid;
  band.lower.resize(a_grid.size());
  band.median.resize(a_grid.size());
  band.upper.resize(a_grid.size());
  std::vector<double> values(samples.size());
  for (std::size_t ia = 0; ia < a_grid.size(); ++ia) {
    for (std::size_t is = 0; is < samples.size(); ++is) {
      values[is] = curve_value(samples[is], a_grid[ia]);
    }
    std::sort(values.begin(), values.end());
    band.lower[ia] = quantile_sorted(values, r / 2.0);
    band.median[ia] = quantile_sorted(values, 0.5);
    band.upper[ia] = quantile_sorted(values, 1.0 - r / 2.0);
  }
  return band;
}

}  // namespace fragility
