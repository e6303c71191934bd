#include "fragility/probit_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fragility/stats.hpp"

namespace fragility {

namespace {
constexpr double kGammaClamp = 38.0;

void require_valid(const FragilityParams& theta) {
  if (!theta.valid()) {
    throw std::invalid_argument("fragility params must satisfy alpha, beta > 0");
  }
}
}  // namespace

std::size_t Dataset::n_failures() const {
  std::size_t n = 0;
  for (const auto& o : observations) n += o.failed ? 1 : 0;
  return n;
}

double standardized_log_im(const FragilityParams& theta, double a) {
  require_valid(theta);
  if (!(a > 0.0)) {
    throw std::invalid_argument("IM value must be > 0");
  }
  const double g = (std::log(a) - std::log(theta.alpha)) / theta.beta;
  return std::clamp(g, -kGammaClamp, kGammaClamp);
}

double fragility_probability(const FragilityParams& theta, double a) {
  return norm_cdf(standardized_log_im(theta, a));
}

double log_likelihood(const FragilityParams& theta, const Observation& obs) {
  const double g = standardized_log_im(theta, obs.im);
  return obs.failed ? log_norm_cdf(g) : log_norm_cdf(-g);
}

double log_likelihood(const FragilityParams& theta, const Dataset& data) {
  double ll = 0.0;
  for (const auto& obs : data.observations) {
    ll += log_likelihood(theta, obs);
  }
  return ll;
}

Eigen::Vector2d score(const FragilityParams& theta, const Observation& obs) {
  const double g = standardized_log_im(theta, obs.im);
  // phi(g)/Phi(g) or phi(g)/Phi(-g) depending on the outcome.
  const double ratio = obs.failed ? inverse_mills(g) : inverse_mills(-g);
  const double sgn = obs.failed ? -1.0 : 1.0;
  Eigen::Vector2d s;
  s[0] = sgn * ratio / (theta.alpha * theta.beta);
  s[1] = sgn * ratio * g / theta.beta;
  return s;
}

Eigen::Matrix2d hessian_loglik(const FragilityParams& theta,
                               const Observation& obs) {
  const double a = theta.alpha;
  const double b = theta.beta;
  const double g = standardized_log_im(theta, obs.im);
  const double la = g * b;  // log(a_i/alpha), clamped consistently with g
  const Eigen::Vector2d s = score(theta, obs);

  // Curvature factor: z * [Phi''Phi - Phi'^2]/Phi^2
  //                 - (1-z) * [Phi''(1-Phi) + Phi'^2]/(1-Phi)^2,
  // with Phi''(g) = -g phi(g), written with inverse-Mills ratios.
  double c;
  if (obs.failed) {
    const double t = inverse_mills(g);
    c = -g * t - t * t;
  } else {
    const double t = inverse_mills(-g);
    c = -(-g * t + t * t);
  }

  Eigen::Matrix2d h;
  h(0, 0) = -s[0] / a + c / (a * a * b * b);
  h(0, 1) = -s[0] / b + c * la / (a * b * b * b);
  h(1, 0) = h(0, 1);
  h(1, 1) = -2.0 * s[1] / b + c * la * la / (b * b * b * b);
  return h;
}

SeparationReport separation_check(const Dataset& data) {
  if (data.empty()) {
    throw std::invalid_argument("separation_check: empty dataset");
  }
  SeparationReport report;

  const std::size_t n_fail = data.n_failures();
  if (n_fail == 0 || n_fail == data.size()) {
    report.n_vector_zero = true;  // alpha beyond the data range zeroes N
    return report;
  }

  // Largest survival IM vs smallest failure IM: a separating open interval
  // exists iff every survival lies strictly below every failure.
  double max_survival = 0.0;
  double min_failure = std::numeric_limits<double>::infinity();
  for (const auto& obs : data.observations) {
    if (obs.failed) {
      min_failure = std::min(min_failure, obs.im);
    } else {
      max_survival = std::max(max_survival, obs.im);
    }
  }
  if (max_survival < min_failure) {
    report.separated = true;
    report.n_vector_zero = true;
    report.separating_interval = {max_survival, min_failure};
  }
  return report;
}

}  // namespace fragility
