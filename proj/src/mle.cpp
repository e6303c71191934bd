#include "fragility/mle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fragility/mcmc.hpp"
#include "fragility/parallel.hpp"
#include "fragility/rng.hpp"
#include "fragility/stats.hpp"

namespace fragility {

namespace {

using Point = std::array<double, 2>;  // (log alpha, log beta)

// Minimal 2-D Nelder-Mead on the negative log-likelihood.
struct SimplexResult {
  Point x;
  double f = 0.0;
  bool converged = false;
};

template <typename F>
SimplexResult nelder_mead(F&& objective, const Point& start, double tol,
                          int max_iter) {
  constexpr double kInitStep = 0.25;
  std::array<Point, 3> xs;
  std::array<double, 3> fs;
  xs[0] = start;
  xs[1] = {start[0] + kInitStep, start[1]};
  xs[2] = {start[0], start[1] + kInitStep};
  for (int i = 0; i < 3; ++i) fs[i] = objective(xs[i]);

  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::array<Point, 3> x2{xs[idx[0]], xs[idx[1]], xs[idx[2]]};
    std::array<double, 3> f2{fs[idx[0]], fs[idx[1]], fs[idx[2]]};
    xs = x2;
    fs = f2;
  };

  SimplexResult res;
  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::abs(fs[2] - fs[0]) < tol) {
      res.converged = true;
      break;
    }
    const Point centroid{(xs[0][0] + xs[1][0]) / 2.0,
                         (xs[0][1] + xs[1][1]) / 2.0};
    auto affine = [&](double t) {
      return Point{centroid[0] + t * (xs[2][0] - centroid[0]),
                   centroid[1] + t * (xs[2][1] - centroid[1])};
    };
    const Point xr = affine(-1.0);
    const double fr = objective(xr);
    if (fr < fs[0]) {
      const Point xe = affine(-2.0);
      const double fe = objective(xe);
      if (fe < fr) {
        xs[2] = xe;
        fs[2] = fe;
      } else {
        xs[2] = xr;
        fs[2] = fr;
      }
    } else if (fr < fs[1]) {
      xs[2] = xr;
      fs[2] = fr;
    } else {
      const Point xc = affine(fr < fs[2] ? -0.5 : 0.5);
      const double fc = objective(xc);
      if (fc < std::min(fr, fs[2])) {
        xs[2] = xc;
        fs[2] = fc;
      } else {
        // shrink toward the best vertex
        for (int i = 1; i < 3; ++i) {
          xs[i] = {xs[0][0] + 0.5 * (xs[i][0] - xs[0][0]),
                   xs[0][1] + 0.5 * (xs[i][1] - xs[0][1])};
          fs[i] = objective(xs[i]);
        }
      }
    }
  }
  order();
  res.x = xs[0];
  res.f = fs[0];
  return res;
}

double median_im(const Dataset& data) {
  std::vector<double> ims;
  ims.reserve(data.size());
  for (const auto& o : data.observations) ims.push_back(o.im);
  std::sort(ims.begin(), ims.end());
  return quantile_sorted(ims, 0.5);
}

}  // namespace

MleResult fit_mle(const Dataset& data, const MleConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("fit_mle: empty dataset");
  MleResult result;

  const std::size_t n_fail = data.n_failures();
  if (n_fail == 0 || n_fail == data.size()) {
    result.degenerate = true;
    result.degeneracy_kind = DegeneracyKind::one_class;
    result.log_lik_at_opt = 0.0;  // likelihood supremum 1 at the boundary
    return result;
  }
  const SeparationReport sep = separation_check(data);
  if (sep.separated) {
    result.degenerate = true;
    result.degeneracy_kind = DegeneracyKind::separated;
    const auto [lo, hi] = *sep.separating_interval;
    result.theta_hat = FragilityParams{std::sqrt(lo * hi), 0.0};
    result.log_lik_at_opt = 0.0;  // supremum as beta -> 0 on the interval
    return result;
  }

  auto objective = [&](const Point& u) {
    const FragilityParams theta{std::exp(u[0]), std::exp(u[1])};
    return -log_likelihood(theta, data);
  };

  const Point base{std::log(median_im(data)), std::log(0.5)};
  RngStream rng(cfg.rng_seed);
  SimplexResult best;
  best.f = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (int s = 0; s < cfg.n_starts; ++s) {
    Point start = base;
    if (s > 0) {
      start[0] += cfg.start_jitter * rng.normal();
      start[1] += cfg.start_jitter * rng.normal();
    }
    const SimplexResult r =
        nelder_mead(objective, start, cfg.tolerance, cfg.max_iterations);
    any_converged = any_converged || r.converged;
    if (r.f < best.f) best = r;
  }
  if (!any_converged) {
    throw std::runtime_error("fit_mle: optimizer failed to converge");
  }
  FragilityParams theta{std::exp(best.x[0]), std::exp(best.x[1])};
  theta.beta = std::max(theta.beta, cfg.beta_floor);
  result.theta_hat = theta;
  result.log_lik_at_opt = -best.f;
  return result;
}

std::vector<MleResult> bootstrap_mle(const Dataset& data, int n_replicates,
                                     std::uint64_t rng_seed,
                                     const MleConfig& cfg, int threads) {
  if (n_replicates < 1) throw std::invalid_argument("bootstrap: L >= 1");
  if (data.empty()) throw std::invalid_argument("bootstrap: empty dataset");
  std::vector<MleResult> results(n_replicates);
  const std::size_t k = data.size();
  parallel_for(static_cast<std::size_t>(n_replicates), threads,
               [&](std::size_t rep) {
                 RngStream rng(rng_seed, rep);
                 Dataset resample;
                 resample.observations.reserve(k);
                 for (std::size_t i = 0; i < k; ++i) {
                   resample.observations.push_back(
                       data.observations[rng.uniform_index(k)]);
                 }
                 MleConfig rep_cfg = cfg;
                 rep_cfg.rng_seed = mix_seed(rng_seed, 0x6f0f0000u + rep);
                 results[rep] = fit_mle(resample, rep_cfg);
               });
  return results;
}

std::optional<double> replicate_curve_value(const MleResult& result, double a) {
  if (!result.theta_hat) return std::nullopt;
  const FragilityParams& t = *result.theta_hat;
  if (result.degenerate || !(t.beta > 0.0)) {
    return a > t.alpha ? 1.0 : 0.0;
  }
  return curve_value(t, a);
}

}  // namespace fragility
