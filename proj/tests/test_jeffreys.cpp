#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "fragility/im_distribution.hpp"
#include "fragility/jeffreys.hpp"
#include "fragility/probit_model.hpp"
#include "fragility/rng.hpp"
#include "fragility/stats.hpp"

using namespace fragility;

namespace {

const LogNormalIM kIm{std::log(1.1), 0.6};

ImPdf lognormal_pdf() { return im_pdf(kIm); }

QuadratureSpec adaptive() { return QuadratureSpec::adaptive(); }

// Monte-Carlo entrywise mean and SE of f over n draws.
struct McMoments {
  Eigen::Matrix2d mean = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d se = Eigen::Matrix2d::Zero();
};

McMoments mc_outer_product(const FragilityParams& theta, int n,
                           std::uint64_t seed, int obs_per_draw) {
  RngStream rng(seed);
  Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d sum_sq = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (int r = 0; r < obs_per_draw; ++r) {
      const double a = rng.lognormal(kIm.mu, kIm.sigma);
      const bool z = rng.bernoulli(fragility_probability(theta, a));
      s += score(theta, Observation{a, z});
    }
    const Eigen::Matrix2d outer = s * s.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
  }
  McMoments m;
  m.mean = sum / n;
  const Eigen::Matrix2d var =
      (sum_sq / n - m.mean.cwiseProduct(m.mean)) * (n / (n - 1.0));
  m.se = (var.cwiseMax(0.0) / static_cast<double>(n)).cwiseSqrt();
  return m;
}

}  // namespace

TEST_CASE("A0 integral matches the Monte-Carlo oracle within 3 SE") {
  const FragilityParams theta{1.1, 0.6};
  const AIntegrals a = a_integrals(theta, lognormal_pdf(), adaptive());
  const double a0 = a.a01 + a.a02;

  // MC estimate of E_a[phi(gamma)^2 / (Phi(gamma)(1 - Phi(gamma)))].
  const int n = 1000000;
  RngStream rng(2024);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double im = rng.lognormal(kIm.mu, kIm.sigma);
    const double g = standardized_log_im(theta, im);
    const double v = std::exp(2.0 * log_norm_pdf(g) - log_norm_cdf(g) -
                              log_norm_cdf(-g));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1.0));
  CHECK(std::abs(a0 - mean) < 3.0 * se);
}

TEST_CASE("A1 vanishes for a log-symmetric density centered at alpha") {
  // Log-normal IM is log-symmetric about its median; put alpha there.
  const FragilityParams theta{std::exp(kIm.mu), 0.5};
  const AIntegrals a = a_integrals(theta, lognormal_pdf(), adaptive());
  CHECK(std::abs(a.a11 + a.a12) < 1e-6 * (a.a01 + a.a02));
}

TEST_CASE("Fisher matrix is symmetric with det >= -1e-12") {
  const FisherMatrix f =
      fisher_information({1.4, 0.5}, lognormal_pdf(), adaptive());
  const Eigen::Matrix2d m = f.matrix();
  CHECK(m(0, 1) == m(1, 0));
  CHECK(m.determinant() >= -1e-12);
}

TEST_CASE("Fisher matrix equals E[score score^T] within 3 MC SE") {
  const FragilityParams theta{1.5, 0.45};
  const FisherMatrix f = fisher_information(theta, lognormal_pdf(), adaptive());
  const McMoments mc = mc_outer_product(theta, 1000000, 8675309, 1);
  const Eigen::Matrix2d quad = f.matrix();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(quad(r, c) - mc.mean(r, c)) < 3.0 * mc.se(r, c));
    }
  }
}

TEST_CASE("two-observation Fisher matrix is 2x the single-observation one") {
  const FragilityParams theta{1.2, 0.7};
  const FisherMatrix f = fisher_information(theta, lognormal_pdf(), adaptive());
  // MC assembly from pairs of i.i.d. observations (cross terms vanish).
  const McMoments mc = mc_outer_product(theta, 500000, 424242, 2);
  const Eigen::Matrix2d twice = 2.0 * f.matrix();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(twice(r, c) - mc.mean(r, c)) < 3.0 * mc.se(r, c));
    }
  }
}

TEST_CASE("Jeffreys reparametrization identities at 20 random points") {
  RngStream rng(5);
  const ImPdf p = lognormal_pdf();
  for (int i = 0; i < 20; ++i) {
    const FragilityParams theta{rng.uniform(0.5, 3.0), rng.uniform(0.2, 1.5)};
    const double a = theta.alpha, b = theta.beta;
    const AIntegrals ai = a_integrals(theta, p, adaptive());
    const double a0 = ai.a01 + ai.a02;
    const double a1 = ai.a11 + ai.a12;
    const double a2 = ai.a21 + ai.a22;

    const FisherMatrix f = fisher_information(theta, p, adaptive());
    const double sqrt_det_theta = std::sqrt(f.matrix().determinant());

    // phi = (log alpha, beta): score w.r.t. log alpha picks up a factor
    // alpha, so I_phi = [[A0/b^2, A1/b^3], [., A2/b^4]].
    Eigen::Matrix2d i_phi;
    i_phi << a0 / (b * b), a1 / (b * b * b), a1 / (b * b * b),
        a2 / (b * b * b * b);
    CHECK(std::sqrt(i_phi.determinant()) ==
          doctest::Approx(a * sqrt_det_theta).epsilon(1e-6));

    // u = (log alpha, log beta): both scores scale, det picks up (a b)^2.
    Eigen::Matrix2d i_u;
    i_u << a0 / (b * b), a1 / (b * b), a1 / (b * b), a2 / (b * b);
    CHECK(std::sqrt(i_u.determinant()) ==
          doctest::Approx(a * b * sqrt_det_theta).epsilon(1e-5));

    // Log-space version of the phi identity.
    const double lj = log_jeffreys_unnormalized(theta, p, adaptive());
    CHECK(0.5 * std::log(i_phi.determinant()) ==
          doctest::Approx(lj + std::log(a)).epsilon(1e-6));
  }
}

TEST_CASE("large-beta law: alpha beta^3 J / E' near 1 at beta = 50") {
  const AsymptoticConstants c{kIm.mu, kIm.sigma};
  for (double alpha : {1.1, 3.0}) {
    const FragilityParams theta{alpha, 50.0};
    const double j =
        std::exp(log_jeffreys_unnormalized(theta, lognormal_pdf(), adaptive()));
    const double ratio = alpha * std::pow(50.0, 3) * j / c.e_prime();
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
  }
}

TEST_CASE("small-beta rate: beta * J stable within 2% from 1e-3 to 5e-4") {
  const ImPdf p = lognormal_pdf();
  for (double alpha : {1.1, 3.0}) {
    const double v1 =
        1e-3 * std::exp(log_jeffreys_unnormalized({alpha, 1e-3}, p, adaptive()));
    const double v2 =
        5e-4 * std::exp(log_jeffreys_unnormalized({alpha, 5e-4}, p, adaptive()));
    CHECK(std::abs(v1 / v2 - 1.0) < 0.02);
  }
}

TEST_CASE("prior grid: finite knots, exact knot values, refinement consistency") {
  const ImPdf p = lognormal_pdf();
  GridSpec spec;
  spec.alpha_min = 0.5;
  spec.alpha_max = 5.0;
  spec.beta_min = 0.1;
  spec.beta_max = 1.0;
  spec.n_alpha = spec.n_beta = 10;
  const PriorGrid coarse = build_prior_grid(p, kIm, spec, adaptive());

  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      CHECK(std::isfinite(coarse.log_values(i, j)));
    }
  }

  // Knot value equals direct evaluation.
  const FragilityParams knot{coarse.alpha_knots[3], coarse.beta_knots[7]};
  CHECK(coarse.log_values(3, 7) ==
        doctest::Approx(log_jeffreys_unnormalized(knot, p, adaptive()))
            .epsilon(1e-12));
  // And interpolation at a knot is exact.
  CHECK(interp_log_prior(coarse, knot) ==
        doctest::Approx(coarse.log_values(3, 7)).epsilon(1e-12));

  // A refined grid agrees with coarse interpolation within 5% in log value.
  GridSpec fine_spec = spec;
  fine_spec.n_alpha = fine_spec.n_beta = 20;
  const PriorGrid fine = build_prior_grid(p, kIm, fine_spec, adaptive());
  for (int i = 1; i < 19; ++i) {
    for (int j = 1; j < 19; ++j) {
      const FragilityParams t{fine.alpha_knots[i], fine.beta_knots[j]};
      const double exact = fine.log_values(i, j);
      const double approx = interp_log_prior(coarse, t);
      CHECK(std::abs(approx - exact) < 0.05 * std::max(std::abs(exact), 1.0));
    }
  }
}

TEST_CASE("prior grid tails: matched beta laws and midpoint bilinearity") {
  const ImPdf p = lognormal_pdf();
  GridSpec spec;
  spec.alpha_min = 0.5;
  spec.alpha_max = 5.0;
  spec.beta_min = 0.1;
  spec.beta_max = 1.0;
  spec.n_alpha = spec.n_beta = 10;
  const PriorGrid grid = build_prior_grid(p, kIm, spec, adaptive());

  const double alpha = grid.alpha_knots[4];
  // Above the beta hull: beta^-3 law, so doubling beta costs 3 log 2.
  const double at_hull = interp_log_prior(grid, {alpha, spec.beta_max});
  CHECK(interp_log_prior(grid, {alpha, 2.0 * spec.beta_max}) ==
        doctest::Approx(at_hull - 3.0 * std::log(2.0)).epsilon(1e-9));
  // Below the beta hull: 1/beta law, halving beta gains log 2.
  const double at_floor = interp_log_prior(grid, {alpha, spec.beta_min});
  CHECK(interp_log_prior(grid, {alpha, 0.5 * spec.beta_min}) ==
        doctest::Approx(at_floor + std::log(2.0)).epsilon(1e-9));

  // Geometric midpoint of four adjacent knots: bilinear average in log.
  const double am = std::sqrt(grid.alpha_knots[2] * grid.alpha_knots[3]);
  const double bm = std::sqrt(grid.beta_knots[5] * grid.beta_knots[6]);
  const double avg = 0.25 * (grid.log_values(2, 5) + grid.log_values(3, 5) +
                             grid.log_values(2, 6) + grid.log_values(3, 6));
  CHECK(interp_log_prior(grid, {am, bm}) == doctest::Approx(avg).epsilon(1e-9));

  // The alpha-tail extension is continuous at the hull boundary.
  const double edge = interp_log_prior(grid, {spec.alpha_max, 0.5});
  CHECK(interp_log_prior(grid, {spec.alpha_max * (1.0 + 1e-12), 0.5}) ==
        doctest::Approx(edge).epsilon(1e-9));
}

TEST_CASE("Fisher matrix positive semidefinite at every grid knot") {
  const ImPdf p = lognormal_pdf();
  GridSpec spec;
  spec.alpha_min = 0.5;
  spec.alpha_max = 5.0;
  spec.beta_min = 0.1;
  spec.beta_max = 1.0;
  spec.n_alpha = spec.n_beta = 10;
  const PriorGrid grid = build_prior_grid(p, kIm, spec, adaptive());
  for (double a : grid.alpha_knots) {
    for (double b : grid.beta_knots) {
      const Eigen::Matrix2d m = fisher_information({a, b}, p, adaptive()).matrix();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      CHECK(lo >= -1e-10 * std::max(1.0, std::abs(hi)));
    }
  }
}

TEST_CASE("log J decreases monotonically in beta past the mode at alpha = e^mu") {
  const ImPdf p = lognormal_pdf();
  const double alpha = std::exp(kIm.mu);
  std::vector<double> values;
  for (double b = 1.0; b <= 50.0; b *= 1.5) {
    const double v = log_jeffreys_unnormalized({alpha, b}, p, adaptive());
    CHECK(std::isfinite(v));
    values.push_back(v);
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    CHECK(values[i] < values[i - 1]);
  }
}

TEST_CASE("asymptotic constants: closed forms") {
  const AsymptoticConstants half_pi{0.0, M_PI / 2.0};
  CHECK(half_pi.e_prime() == doctest::Approx(1.0).epsilon(1e-15));

  const double sigma = 0.6;
  const AsymptoticConstants c{0.0, sigma};
  // At beta = sigma the prefactor reduces to 1 / (4 sqrt(2 pi) sigma^3).
  CHECK(c.g_doubleprime(sigma) ==
        doctest::Approx(1.0 / (4.0 * kSqrt2Pi * sigma * sigma * sigma))
            .epsilon(1e-14));
  CHECK(c.g_doubleprime(0.3) > 0.0);
}

TEST_CASE("beta_inf asymptote matches quadrature at alpha = e^mu, beta = 100") {
  const AsymptoticConstants c{kIm.mu, kIm.sigma};
  const FragilityParams theta{std::exp(kIm.mu), 100.0};
  const double j =
      std::exp(log_jeffreys_unnormalized(theta, lognormal_pdf(), adaptive()));
  const double ratio = j / asymptotic_jeffreys(theta, c, AsymptoticRegime::beta_inf);
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.05);
}

TEST_CASE("Lemma bounds on Phi(gamma)(1 - Phi(gamma)) hold at 1e4 points") {
  RngStream rng(31);
  for (int i = 0; i < 10000; ++i) {
    const double g = rng.uniform(-8.0, 8.0);
    const double product = norm_cdf(g) * norm_cdf(-g);
    // Upper bound on the reciprocal.
    CHECK(1.0 / product <= 4.0 * std::exp(2.0 * g * g / M_PI));
    // Komatsu-type lower bound: Phi(g) >= 1/2 for g >= 0 combined with
    // 1 - Phi(g) >= 2 phi(g)/(g + sqrt(g^2+4)) gives constant 1/sqrt(2 pi).
    const double lower = std::exp(-0.5 * g * g) /
                         (kSqrt2Pi * (std::abs(g) + std::sqrt(g * g + 4.0)));
    CHECK(product >= lower);
  }
}
