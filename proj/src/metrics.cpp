#include "fragility/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragility/parallel.hpp"
#include "fragility/rng.hpp"
#include "fragility/stats.hpp"

namespace fragility {

namespace {

std::vector<double> metric_grid(const MetricConfig& cfg) {
  if (cfg.subdivisions < 2 || cfg.subdivisions % 2 != 0) {
    throw std::invalid_argument("metric subdivisions must be even >= 2");
  }
  if (!(cfg.credibility > 0.0) || !(cfg.credibility < 1.0)) {
    throw std::invalid_argument("credibility must lie in (0,1)");
  }
  return regular_im_grid(cfg.a_max, cfg.subdivisions);
}

}  // namespace

CurveEnsemble sample_curves(const std::vector<FragilityParams>& thetas,
                            const std::vector<double>& a_grid) {
  CurveEnsemble curves(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    curves[i].resize(a_grid.size());
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
      curves[i][j] = curve_value(thetas[i], a_grid[j]);
    }
  }
  return curves;
}

double quadratic_error(const CurveEnsemble& curves, const MetricConfig& cfg) {
  if (curves.empty()) throw std::invalid_argument("quadratic_error: no curves");
  const auto grid = metric_grid(cfg);
  const double step = cfg.a_max / cfg.subdivisions;
  std::vector<double> ref(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    ref[j] = curve_value(cfg.reference_curve, grid[j]);
  }
  std::vector<double> sq(grid.size());
  double total = 0.0;
  for (const auto& curve : curves) {
    if (curve.size() != grid.size()) {
      throw std::invalid_argument("curve sampled on a different grid");
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double d = curve[j] - ref[j];
      sq[j] = d * d;
    }
    total += simpson(sq, step);
  }
  return total / static_cast<double>(curves.size());
}

double quadratic_error(const std::vector<FragilityParams>& thetas,
                       const MetricConfig& cfg) {
  return quadratic_error(sample_curves(thetas, metric_grid(cfg)), cfg);
}

double credibility_width(const CurveEnsemble& curves, const MetricConfig& cfg) {
  if (curves.size() < 2) {
    throw std::invalid_argument("credibility_width: need >= 2 curves");
  }
  const auto grid = metric_grid(cfg);
  const double step = cfg.a_max / cfg.subdivisions;
  const double r = 1.0 - cfg.credibility;
  std::vector<double> column(curves.size());
  std::vector<double> sq(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (curves[i].size() != grid.size()) {
        throw std::invalid_argument("curve sampled on a different grid");
      }
      column[i] = curves[i][j];
    }
    std::sort(column.begin(), column.end());
    const double gap = quantile_sorted(column, 1.0 - r / 2.0) -
                       quantile_sorted(column, r / 2.0);
    sq[j] = gap * gap;
  }
  return simpson(sq, step);
}

double credibility_width(const std::vector<FragilityParams>& thetas,
                         const MetricConfig& cfg) {
  return credibility_width(sample_curves(thetas, metric_grid(cfg)), cfg);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::jeffreys: return "jeffreys";
    case Method::sk: return "sk";
    case Method::bootstrap: return "bootstrap";
  }
  throw std::logic_error("unreachable");
}

const ReplicationRow& ReplicationSummary::find(std::size_t k, Method m,
                                               const std::string& metric) const {
  for (const auto& row : rows) {
    if (row.k == k && row.method == m && row.metric == metric) return row;
  }
  throw std::out_of_range("no such replication row");
}

namespace {

struct DrawOutcome {
  bool ok = false;
  double quad_error = 0.0;
  double cred_width = 0.0;
};

Dataset subsample_without_replacement(const Dataset& full, std::size_t k,
                                      RngStream& rng) {
  std::vector<std::size_t> idx(full.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  Dataset out;
  out.observations.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.observations.push_back(full.observations[idx[i]]);
  }
  return out;
}

DrawOutcome run_draw(const Dataset& draw, Method method, int L,
                     const MetricConfig& cfg, const ReplicationOptions& opt,
                     const std::vector<double>& grid, std::uint64_t draw_seed) {
  DrawOutcome out;
  try {
    CurveEnsemble curves;
    if (method == Method::bootstrap) {
      MleConfig mle_cfg = opt.mle;
      mle_cfg.rng_seed = mix_seed(draw_seed, 1);
      const auto fits = bootstrap_mle(draw, L, mix_seed(draw_seed, 2), mle_cfg);
      for (const auto& fit : fits) {
        std::vector<double> curve(grid.size());
        bool has_curve = true;
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const auto v = replicate_curve_value(fit, grid[j]);
          if (!v) {
            has_curve = false;
            break;
          }
          curve[j] = *v;
        }
        if (has_curve) curves.push_back(std::move(curve));
      }
      if (curves.size() < 2) return out;
    } else {
      const PriorSpec& prior =
          method == Method::jeffreys ? opt.jeffreys_prior : opt.sk_prior;
      FragilityParams init;
      MleConfig mle_cfg = opt.mle;
      mle_cfg.rng_seed = mix_seed(draw_seed, 3);
      const MleResult mle = fit_mle(draw, mle_cfg);
      if (!mle.degenerate && mle.theta_hat) {
        init = *mle.theta_hat;
      } else {
        std::vector<double> ims;
        for (const auto& o : draw.observations) ims.push_back(o.im);
        init = FragilityParams{quantile(std::move(ims), 0.5), 0.5};
      }
      McmcConfig mcmc_cfg = opt.mcmc;
      mcmc_cfg.n_samples = L;
      mcmc_cfg.rng_seed = mix_seed(draw_seed, 4);
      auto target = [&](const FragilityParams& theta) {
        return log_posterior_unnorm(prior, draw, theta);
      };
      const Chain chain = run_adaptive_mh(target, init, mcmc_cfg);
      curves = sample_curves(chain.samples, grid);
    }
    out.quad_error = quadratic_error(curves, cfg);
    out.cred_width = credibility_width(curves, cfg);
    out.ok = true;
  } catch (const std::exception&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

ReplicationSummary replication_study(const Dataset& full_data,
                                     const std::vector<std::size_t>& k_values,
                                     std::size_t m, int L,
                                     const std::vector<Method>& methods,
                                     const MetricConfig& cfg,
                                     const ReplicationOptions& options,
                                     std::uint64_t seed) {
  if (m < 1 || L < 1) throw std::invalid_argument("replication: m, L >= 1");
  for (std::size_t k : k_values) {
    if (k > full_data.size()) {
      throw std::invalid_argument("replication: k exceeds dataset size");
    }
  }
  const auto grid = metric_grid(cfg);

  struct Task {
    std::size_t k;
    Method method;
    std::size_t draw;
  };
  std::vector<Task> tasks;
  for (std::size_t k : k_values) {
    for (Method method : methods) {
      for (std::size_t d = 0; d < m; ++d) tasks.push_back({k, method, d});
    }
  }
  std::vector<DrawOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    // One subsample per (k, draw), shared across methods so the comparison
    // sees identical data.
    RngStream draw_rng(seed, mix_seed(task.k, task.draw));
    const Dataset draw = subsample_without_replacement(full_data, task.k, draw_rng);
    const std::uint64_t draw_seed =
        mix_seed(seed, mix_seed(task.k * 1000003 + task.draw,
                                static_cast<std::uint64_t>(task.method)));
    outcomes[t] = run_draw(draw, task.method, L, cfg, options, grid, draw_seed);
  });

  ReplicationSummary summary;
  std::size_t t0 = 0;
  for (std::size_t k : k_values) {
    for (Method method : methods) {
      std::vector<double> quad, cred;
      std::size_t excluded = 0;
      for (std::size_t d = 0; d < m; ++d) {
        const DrawOutcome& o = outcomes[t0 + d];
        if (o.ok) {
          quad.push_back(o.quad_error);
          cred.push_back(o.cred_width);
        } else {
          ++excluded;
        }
      }
      t0 += m;
      auto emit = [&](const std::string& name, std::vector<double> vals) {
        ReplicationRow row;
        row.k = k;
        row.method = method;
        row.metric = name;
        row.n_excluded = excluded;
        if (!vals.empty()) {
          double s = 0.0;
          for (double v : vals) s += v;
          row.mean = s / static_cast<double>(vals.size());
          std::sort(vals.begin(), vals.end());
          row.lo = quantile_sorted(vals, 0.025);
          row.hi = quantile_sorted(vals, 0.975);
        }
        summary.rows.push_back(std::move(row));
      };
      emit("quadratic_error", quad);
      emit("credibility_width", cred);
    }
  }
  return summary;
}

}  // namespace fragility
