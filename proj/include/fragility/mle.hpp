#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fragility/probit_model.hpp"

namespace fragility {

enum class DegeneracyKind { none, separated, one_class };

struct MleResult {
  std::optional<FragilityParams> theta_hat;
  bool degenerate = false;
  DegeneracyKind degeneracy_kind = DegeneracyKind::none;
  double log_lik_at_opt = 0.0;
};

struct MleConfig {
  int n_starts = 5;            // jittered multi-starts in log-space
  double start_jitter = 0.5;   // log-space jitter std
  double tolerance = 1e-8;     // simplex spread tolerance on the objective
  int max_iterations = 2000;   // per start
  double beta_floor = 1e-4;    // below this the fit counts as degenerate
  std::uint64_t rng_seed = 12345;
};

// Maximizes the log-likelihood over (log alpha, log beta) by Nelder-Mead
// with multi-start. Perfectly separated data report degenerate fits with
// alpha at the geometric midpoint of the separating interval and beta = 0;
// single-class data report degenerate fits with no theta.
MleResult fit_mle(const Dataset& data, const MleConfig& cfg = {});

// L bootstrap resamples (size k, with replacement) each fitted by fit_mle.
// Degenerate results are retained, not discarded.
std::vector<MleResult> bootstrap_mle(const Dataset& data, int n_replicates,
                                     std::uint64_t rng_seed,
                                     const MleConfig& cfg = {},
                                     int threads = 1);

// Curve value of one replicate for confidence bands: non-degenerate fits use
// their log-normal curve, degenerate fits with an alpha estimate use the step
// curve 1{a > alpha}. Returns nullopt for fits carrying no theta at all.
std::optional<double> replicate_curve_value(const MleResult& result, double a);

}  // namespace fragility
