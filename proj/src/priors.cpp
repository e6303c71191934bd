#include "fragility/priors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fragility {

PriorSpec PriorSpec::jeffreys_prior(std::shared_ptr<const PriorGrid> grid) {
  if (!grid) throw std::invalid_argument("jeffreys prior needs a grid");
  PriorSpec s;
  s.kind = Kind::jeffreys;
  s.grid = std::move(grid);
  return s;
}

PriorSpec PriorSpec::sk_prior(double mu, double sigma,
                              std::optional<double> beta_max) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sk prior needs sigma > 0");
  if (beta_max && !(*beta_max > 0.0)) {
    throw std::invalid_argument("beta truncation must be > 0");
  }
  PriorSpec s;
  s.kind = Kind::sk;
  s.sk_mu = mu;
  s.sk_sigma = sigma;
  s.beta_truncation = beta_max;
  return s;
}

PriorSpec PriorSpec::flat_prior() {
  PriorSpec s;
  s.kind = Kind::custom;
  s.custom_log_prior = [](const FragilityParams&) { return 0.0; };
  return s;
}

double log_prior(const PriorSpec& spec, const FragilityParams& theta) {
  if (!theta.valid()) {
    throw std::invalid_argument("log_prior: invalid theta");
  }
  if (spec.beta_truncation && theta.beta > *spec.beta_truncation) {
    return -std::numeric_limits<double>::infinity();
  }
  switch (spec.kind) {
    case PriorSpec::Kind::jeffreys:
      if (!spec.grid) throw std::invalid_argument("jeffreys prior without grid");
      return interp_log_prior(*spec.grid, theta);
    case PriorSpec::Kind::sk: {
      const double d = std::log(theta.alpha) - spec.sk_mu;
      return -std::log(theta.alpha) - std::log(theta.beta) -
             d * d / (2.0 * spec.sk_sigma * spec.sk_sigma);
    }
    case PriorSpec::Kind::custom:
      if (!spec.custom_log_prior) {
        throw std::invalid_argument("custom prior without callable");
      }
      return spec.custom_log_prior(theta);
  }
  throw std::logic_error("unreachable");
}

double log_posterior_unnorm(const PriorSpec& spec, const Dataset& data,
                            const FragilityParams& theta) {
  if (data.empty()) {
    throw std::invalid_argument("log_posterior_unnorm: empty dataset");
  }
  const double lp = log_prior(spec, theta);
  if (lp == -std::numeric_limits<double>::infinity()) return lp;
  return log_likelihood(theta, data) + lp;
}

}  // namespace fragility
