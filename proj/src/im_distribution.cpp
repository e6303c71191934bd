#include "fragility/im_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fragility/stats.hpp"

namespace fragility {

void validate_sample(const IMSample& sample) {
  if (sample.values.size() == 0) {
    throw std::invalid_argument("IM sample is empty");
  }
  for (Eigen::Index i = 0; i < sample.values.size(); ++i) {
    if (!(sample.values[i] > 0.0) || !std::isfinite(sample.values[i])) {
      throw std::invalid_argument("IM sample contains a non-positive value");
    }
  }
}

double LogNormalIM::pdf(double a) const {
  if (a <= 0.0) return 0.0;
  const double u = (std::log(a) - mu) / sigma;
  return std::exp(-0.5 * u * u) / (a * sigma * kSqrt2Pi);
}

double LogNormalIM::median() const { return std::exp(mu); }

IMDensity fit_kde(const IMSample& sample, std::optional<double> bandwidth) {
  validate_sample(sample);
  IMDensity d;
  d.centers = sample.values;
  d.truncated = true;
  if (bandwidth) {
    if (*bandwidth <= 0.0) throw std::invalid_argument("bandwidth must be > 0");
    d.bandwidth = *bandwidth;
    return d;
  }
  const auto n = static_cast<double>(sample.values.size());
  const double mean = sample.values.mean();
  double sd = 0.0;
  if (n > 1) {
    sd = std::sqrt((sample.values.array() - mean).square().sum() / (n - 1.0));
  }
  std::vector<double> sorted(sample.values.data(),
                             sample.values.data() + sample.values.size());
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::abs(mean) > 0 ? 0.01 * std::abs(mean) : 1.0;
  d.bandwidth = 0.9 * spread * std::pow(n, -0.2);
  return d;
}

double density(const IMDensity& d, double a) {
  if (d.centers.size() == 0 || !(d.bandwidth > 0.0)) {
    throw std::invalid_argument("IMDensity is not initialized");
  }
  if (d.truncated && a < 0.0) return 0.0;
  const double h = d.bandwidth;
  double sum = 0.0;
  double mass = 0.0;  // kernel mass above zero, for renormalization
  for (Eigen::Index i = 0; i < d.centers.size(); ++i) {
    const double u = (a - d.centers[i]) / h;
    if (std::abs(u) < 38.0) sum += norm_pdf(u);
    if (d.truncated) mass += norm_cdf(d.centers[i] / h);
  }
  const auto n = static_cast<double>(d.centers.size());
  if (d.truncated) {
    return mass > 0.0 ? sum / (h * mass) : 0.0;
  }
  return sum / (h * n);
}

LogNormalIM fit_lognormal(const IMSample& sample) {
  validate_sample(sample);
  if (sample.values.size() < 2) {
    throw std::invalid_argument("fit_lognormal needs at least 2 values");
  }
  const Eigen::ArrayXd logs = sample.values.array().log();
  const auto n = static_cast<double>(logs.size());
  const double mu = logs.mean();
  const double var = (logs - mu).square().sum() / (n - 1.0);
  if (!(var > 0.0)) {
    throw std::invalid_argument("fit_lognormal: all values identical");
  }
  return LogNormalIM{mu, std::sqrt(var)};
}

ImPdf im_pdf(const IMDensity& d) {
  auto shared = std::make_shared<IMDensity>(d);
  // Narrowest feature in log-IM: a kernel of width h sitting at the lower
  // quartile of the centers.
  std::vector<double> sorted(d.centers.data(), d.centers.data() + d.centers.size());
  std::sort(sorted.begin(), sorted.end());
  const double a_lo = std::max(quantile_sorted(sorted, 0.25), 1e-12);
  const double scale = std::max(1e-3, d.bandwidth / a_lo);
  return ImPdf{[shared](double a) { return density(*shared, a); }, scale};
}

ImPdf im_pdf(const LogNormalIM& ln) {
  return ImPdf{[ln](double a) { return ln.pdf(a); }, ln.sigma};
}

}  // namespace fragility
