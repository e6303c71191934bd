#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

namespace fragility {

// Intensity-measure sample: strictly positive scalars (PGA, m/s^2).
struct IMSample {
  Eigen::VectorXd values;
};

// Validates positivity / non-emptiness; throws std::invalid_argument.
void validate_sample(const IMSample& sample);

// Gaussian kernel density estimate of p(a) on the raw IM scale. When
// `truncated` is set (the fit path), mass leaking below a = 0 is cut off and
// the density renormalized at evaluation time so it integrates to one over
// (0, inf). Hand-built instances default to the plain mixture on the whole
// real line.
struct IMDensity {
  Eigen::VectorXd centers;
  double bandwidth = 0.0;
  bool truncated = false;
};

// Log-normal fit of the IM distribution: mean / std of log-IM.
struct LogNormalIM {
  double mu = 0.0;
  double sigma = 1.0;

  double pdf(double a) const;
  double median() const;
};

// Kernel centers = sample values, Silverman bandwidth
// h = 0.9 * min(std, IQR/1.34) * n^(-1/5) on the raw scale, overridable.
IMDensity fit_kde(const IMSample& sample,
                  std::optional<double> bandwidth = std::nullopt);

// Mean of Gaussian kernel evaluations at a (renormalized when truncated).
double density(const IMDensity& d, double a);

// mu = mean(log a_i), sigma = std(log a_i) with the n-1 denominator.
// Rejects samples of size < 2 or with zero log-dispersion.
LogNormalIM fit_lognormal(const IMSample& sample);

// Uniform view of an IM density for the Fisher-information quadrature:
// a pdf callable plus the log-scale width used to pick quadrature steps.
struct ImPdf {
  std::function<double(double)> pdf;
  double log_scale = 1.0;  // characteristic width of the density in log-IM
};

ImPdf im_pdf(const IMDensity& d);
ImPdf im_pdf(const LogNormalIM& ln);

}  // namespace fragility
