#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "fragility/jeffreys.hpp"
#include "fragility/probit_model.hpp"

namespace fragility {

// Prior selection for the posterior assembly. The SK prior is the
// normal-on-log-alpha times 1/beta comparison prior; untruncated it yields
// an improper posterior, so MCMC use requires beta_truncation.
struct PriorSpec {
  enum class Kind { jeffreys, sk, custom };

  Kind kind = Kind::jeffreys;
  std::shared_ptr<const PriorGrid> grid;       // jeffreys
  double sk_mu = 0.0;                          // sk
  double sk_sigma = 1.0;                       // sk, > 0
  std::function<double(const FragilityParams&)> custom_log_prior;
  std::optional<double> beta_truncation;

  static PriorSpec jeffreys_prior(std::shared_ptr<const PriorGrid> grid);
  static PriorSpec sk_prior(double mu, double sigma,
                            std::optional<double> beta_max);
  static PriorSpec flat_prior();
};

// Unnormalized log prior density; -inf beyond the beta truncation.
double log_prior(const PriorSpec& spec, const FragilityParams& theta);

// log likelihood + log prior (unnormalized log posterior, Bayes' rule).
double log_posterior_unnorm(const PriorSpec& spec, const Dataset& data,
                            const FragilityParams& theta);

}  // namespace fragility
