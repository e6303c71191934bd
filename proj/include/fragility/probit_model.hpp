#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

namespace fragility {

// Model parameters of the log-normal (probit) fragility curve:
// alpha = median capacity [m/s^2], beta = log-standard deviation.
struct FragilityParams {
  double alpha = 1.0;
  double beta = 1.0;

  bool valid() const { return alpha > 0.0 && beta > 0.0; }
};

struct Observation {
  double im = 0.0;  // > 0
  bool failed = false;
};

struct Dataset {
  std::vector<Observation> observations;

  std::size_t size() const { return observations.size(); }
  bool empty() const { return observations.empty(); }
  std::size_t n_failures() const;
};

struct SeparationReport {
  bool separated = false;
  std::optional<std::pair<double, double>> separating_interval;
  // True when some alpha zeroes the misclassification vector N, i.e. the
  // data are separated or contain a single outcome class.
  bool n_vector_zero = false;
};

// gamma = log(a/alpha)/beta, clamped to +-38 before tail-stable evaluation.
double standardized_log_im(const FragilityParams& theta, double a);

// P_f(a) = Phi(log(a/alpha)/beta); rejects a <= 0.
double fragility_probability(const FragilityParams& theta, double a);

// Stable log of the Bernoulli factor for one observation.
double log_likelihood(const FragilityParams& theta, const Observation& obs);

// Sum of per-observation log Bernoulli terms.
double log_likelihood(const FragilityParams& theta, const Dataset& data);

// First-order partial derivatives (d/dalpha, d/dbeta) of the observation
// log-density.
Eigen::Vector2d score(const FragilityParams& theta, const Observation& obs);

// Analytic second-order derivatives, symmetric by construction.
Eigen::Matrix2d hessian_loglik(const FragilityParams& theta,
                               const Observation& obs);

// Detects perfect separation: an open alpha-interval U on which
// z_i = 1 <=> a_i > alpha for every i. Tied IMs with conflicting labels do
// not separate; single-class datasets report separated = false but
// n_vector_zero = true.
SeparationReport separation_check(const Dataset& data);

}  // namespace fragility
