#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fragility/im_distribution.hpp"
#include "fragility/probit_model.hpp"
#include "fragility/quadrature.hpp"

namespace fragility {

// Symmetric 2x2 Fisher information matrix of the single-observation model.
struct FisherMatrix {
  double i_aa = 0.0;
  double i_ab = 0.0;
  double i_bb = 0.0;

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << i_aa, i_ab, i_ab, i_bb;
    return m;
  }
};

// The six IM-axis integrals A_kj: integrand log^k(a/alpha) *
// phi(gamma)^2 / Phi(+-gamma) * p(a), j = 1 dividing by Phi(gamma) and
// j = 2 by Phi(-gamma).
struct AIntegrals {
  double a01 = 0.0, a02 = 0.0;
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;
};

// Log-magnitude / sign representation of the three summed integrals
// A_k = A_k1 + A_k2; keeps the determinant computable where the raw values
// underflow (far tails of theta).
struct LogAIntegrals {
  double log_a0 = 0.0;               // A_0 > 0
  double log_abs_a1 = 0.0;
  double sign_a1 = 0.0;
  double log_a2 = 0.0;               // A_2 > 0
};

AIntegrals a_integrals(const FragilityParams& theta, const ImPdf& p,
                       const QuadratureSpec& quad);

LogAIntegrals a_integrals_log(const FragilityParams& theta, const ImPdf& p,
                              const QuadratureSpec& quad);

// I = [[(A01+A02)/(alpha^2 beta^2), (A11+A12)/(alpha beta^3)],
//      [symm.,                      (A21+A22)/beta^4]]
FisherMatrix fisher_information(const FragilityParams& theta, const ImPdf& p,
                                const QuadratureSpec& quad);

// 0.5 * log |det I(theta)|, computed in log space. Throws on a determinant
// below the -1e-12 noise tolerance.
double log_jeffreys_unnormalized(const FragilityParams& theta, const ImPdf& p,
                                 const QuadratureSpec& quad);

// Closed-form asymptotic constants under a log-normal IM.
struct AsymptoticConstants {
  double mu = 0.0;
  double sigma = 1.0;

  // E' = 2 sigma / pi (beta -> inf prefactor of E'/(alpha beta^3)).
  double e_prime() const;
  // G''(beta) = sigma / (sqrt(2 pi) (sigma^2 + beta^2)^2), the alpha-tail
  // prefactor of G'' |log alpha| exp(-(log alpha - mu)^2 / (2 beta^2 +
  // 2 sigma^2)) / alpha.
  double g_doubleprime(double beta) const;
};

enum class AsymptoticRegime { beta_inf, alpha_tail };

// Closed-form tail value of J(theta) in the requested regime.
double asymptotic_jeffreys(const FragilityParams& theta,
                           const AsymptoticConstants& c,
                           AsymptoticRegime regime);

// Precomputed log-Jeffreys values on a geometric (alpha, beta) mesh with
// bilinear interpolation in (log alpha, log beta) and matched asymptotic
// tail laws outside the hull.
struct PriorGrid {
  std::vector<double> alpha_knots;  // strictly increasing, > 0
  std::vector<double> beta_knots;   // strictly increasing, > 0
  Eigen::MatrixXd log_values;       // alpha_knots.size() x beta_knots.size()
  LogNormalIM im_lognormal;         // drives the alpha-tail rule
};

struct GridSpec {
  double alpha_min = 1e-5;
  double alpha_max = 10.0;
  double beta_min = 1e-3;
  double beta_max = 2.0;
  int n_alpha = 500;
  int n_beta = 500;
};

PriorGrid build_prior_grid(const ImPdf& p, const LogNormalIM& im_fit,
                           const GridSpec& spec, const QuadratureSpec& quad,
                           int threads = 1);

// Total on Theta: bilinear inside the hull, 1/beta below the beta range,
// 1/(alpha beta^3) above it, and the log-normal-like alpha law beyond the
// alpha range, all matched at the hull boundary.
double interp_log_prior(const PriorGrid& grid, const FragilityParams& theta);

// Self-describing text cache, deterministic byte-for-byte (17 significant
// digits).
void save_prior_grid(const PriorGrid& grid, const std::string& path);
PriorGrid load_prior_grid(const std::string& path);

}  // namespace fragility
