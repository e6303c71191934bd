// fragility: batch CLI for log-normal fragility-curve estimation.
//
// Subcommands: prior-grid, fit, mle, reference, metrics, simulate,
// replicate, asymptotics-check. Every run is deterministic under --seed,
// writes its fully-resolved configuration beside its outputs, and leaves an
// ERROR marker file if it fails partway.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fragility/csv.hpp"
#include "fragility/im_distribution.hpp"
#include "fragility/jeffreys.hpp"
#include "fragility/mcmc.hpp"
#include "fragility/metrics.hpp"
#include "fragility/mle.hpp"
#include "fragility/priors.hpp"
#include "fragility/probit_model.hpp"
#include "fragility/quadrature.hpp"
#include "fragility/reference.hpp"
#include "fragility/rng.hpp"
#include "fragility/synthdata.hpp"

namespace fs = std::filesystem;
using namespace fragility;

namespace {

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool out_is_dir) {
  sub->add_option("--seed", c.seed, "Master RNG seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out,
                  out_is_dir ? "Output directory" : "Output file")
      ->required();
  sub->add_option("--config", c.config,
                  "Flat key=value config file; command-line flags win");
}

// Flat key=value config support. The file is expanded into flags before
// parsing; a key contributes only when its flag is absent from the command
// line, so explicit flags always win.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ": expected key=value, got: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw std::runtime_error(path + ": empty key in line: " + line);
    }
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) {
      present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    }
    if (!present) args.push_back(flag + "=" + value);
  }
  return args;
}

// The resolved configuration is written next to the outputs so any run can
// be reproduced from its artifacts alone.
void write_resolved_config(const CLI::App* sub, const fs::path& path) {
  std::ofstream out(path);
  out << "# resolved configuration: " << sub->get_name() << '\n'
      << sub->config_to_str(true, false);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path error_marker(const Common& c, bool out_is_dir) {
  return out_is_dir ? fs::path(c.out) / "ERROR" : fs::path(c.out + ".ERROR");
}

int run_guarded(const Common& c, bool out_is_dir,
                const std::function<void()>& body) {
  try {
    if (out_is_dir) fs::create_directories(c.out);
    std::error_code ec;
    fs::remove(error_marker(c, out_is_dir), ec);
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::ofstream marker(error_marker(c, out_is_dir));
    marker << e.what() << '\n';
    return 1;
  }
}

QuadratureSpec make_quad(const std::string& mode) {
  if (mode == "adaptive") return QuadratureSpec::adaptive();
  if (mode == "fixed") return QuadratureSpec{};
  throw std::invalid_argument("quadrature mode must be fixed|adaptive");
}

std::vector<double> log_ims(const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& o : data.observations) out.push_back(std::log(o.im));
  return out;
}

IMSample ims_of(const Dataset& data) {
  IMSample s;
  s.values.resize(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    s.values[static_cast<Eigen::Index>(i)] = data.observations[i].im;
  }
  return s;
}

// SK hyperparameters default to the log-IM sample moments when not given.
void resolve_sk(const Dataset& data, double& mu, double& sigma) {
  if (std::isnan(mu) || std::isnan(sigma)) {
    const LogNormalIM fit = fit_lognormal(ims_of(data));
    if (std::isnan(mu)) mu = fit.mu;
    if (std::isnan(sigma)) sigma = fit.sigma;
  }
}

// beta_max semantics: NaN = prior-kind default (2.0 for SK, none otherwise),
// 0 = explicitly untruncated, > 0 = truncate there.
PriorSpec make_prior(const std::string& kind, const std::string& grid_path,
                     const Dataset& data, double sk_mu, double sk_sigma,
                     double beta_max, bool warn_improper) {
  std::optional<double> trunc;
  if (std::isnan(beta_max)) {
    if (kind == "sk") trunc = 2.0;
  } else if (beta_max > 0.0) {
    trunc = beta_max;
  }
  if (kind == "jeffreys") {
    if (grid_path.empty()) {
      throw std::invalid_argument("jeffreys prior requires --grid");
    }
    auto grid = std::make_shared<PriorGrid>(load_prior_grid(grid_path));
    auto spec = PriorSpec::jeffreys_prior(std::move(grid));
    spec.beta_truncation = trunc;
    return spec;
  }
  if (kind == "sk") {
    resolve_sk(data, sk_mu, sk_sigma);
    if (!trunc && warn_improper) {
      std::cout << "warning: SK prior without beta truncation yields an "
                   "improper posterior; samples are not meaningful\n";
    }
    return PriorSpec::sk_prior(sk_mu, sk_sigma, trunc);
  }
  if (kind == "flat") {
    auto spec = PriorSpec::flat_prior();
    spec.beta_truncation = trunc;
    return spec;
  }
  throw std::invalid_argument("prior must be jeffreys|sk|flat");
}

FragilityParams mcmc_init(const Dataset& data, std::uint64_t seed) {
  MleConfig cfg;
  cfg.rng_seed = mix_seed(seed, 0x1917);
  const MleResult mle = fit_mle(data, cfg);
  if (!mle.degenerate && mle.theta_hat) return *mle.theta_hat;
  std::vector<double> ims;
  for (const auto& o : data.observations) ims.push_back(o.im);
  return FragilityParams{quantile(std::move(ims), 0.5), 0.5};
}

// Reads theta rows from a chain or bootstrap CSV (both start alpha,beta).
// Rows without a usable curve (beta <= 0) are skipped and counted.
std::vector<FragilityParams> read_theta_csv(const std::string& path,
                                            std::size_t& skipped) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  bool header_seen = false;
  std::vector<FragilityParams> thetas;
  skipped = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("alpha,beta", 0) != 0) {
        throw std::runtime_error(path + ": expected alpha,beta,... header");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw std::runtime_error(path + ": malformed row: " + line);
    }
    const FragilityParams theta{std::stod(a), std::stod(b)};
    if (theta.valid()) {
      thetas.push_back(theta);
    } else {
      ++skipped;
    }
  }
  if (!header_seen) throw std::runtime_error(path + ": no header");
  return thetas;
}

// ---------------------------------------------------------------------------

struct PriorGridArgs {
  Common common;
  std::string im_csv;
  GridSpec grid;
  double bandwidth = 0.0;  // 0 = Silverman default
  std::string quad_mode = "adaptive";
};

int cmd_prior_grid(const CLI::App* sub, const PriorGridArgs& a) {
  return run_guarded(a.common, false, [&] {
    const IMSample sample = read_im_csv(a.im_csv);
    std::optional<double> bw;
    if (a.bandwidth > 0.0) bw = a.bandwidth;
    const IMDensity kde = fit_kde(sample, bw);
    const LogNormalIM ln = fit_lognormal(sample);
    const PriorGrid grid = build_prior_grid(
        im_pdf(kde), ln, a.grid, make_quad(a.quad_mode), a.common.threads);
    save_prior_grid(grid, a.common.out);
    write_resolved_config(sub, a.common.out + ".config");
    std::cout << "wrote " << a.common.out << " (" << a.grid.n_alpha << " x "
              << a.grid.n_beta << " knots)\n";
  });
}

struct FitArgs {
  Common common;
  std::string data_csv;
  std::string prior = "jeffreys";
  std::string grid_path;
  double sk_mu = std::nan("");
  double sk_sigma = std::nan("");
  double beta_max = std::nan("");  // NaN = kind default, 0 = untruncated
  int samples = 5000;
  int burn_in = 5000;
  int adapt_start = 500;
  double initial_step = 0.1;
  double a_max = 12.0;
  int subdivisions = 200;
  double credibility = 0.95;
};

int cmd_fit(const CLI::App* sub, const FitArgs& a) {
  return run_guarded(a.common, true, [&] {
    const Dataset data = read_dataset_csv(a.data_csv);
    const PriorSpec prior = make_prior(a.prior, a.grid_path, data, a.sk_mu,
                                       a.sk_sigma, a.beta_max, true);
    const FragilityParams init = mcmc_init(data, a.common.seed);

    McmcConfig cfg;
    cfg.n_samples = a.samples;
    cfg.burn_in = a.burn_in;
    cfg.adaptation_start = a.adapt_start;
    cfg.initial_step = a.initial_step;
    cfg.rng_seed = mix_seed(a.common.seed, 0xfeed);
    const Chain chain = run_adaptive_mh(
        [&](const FragilityParams& theta) {
          return log_posterior_unnorm(prior, data, theta);
        },
        init, cfg);

    const fs::path dir(a.common.out);
    write_chain_csv(chain, (dir / "chain.csv").string());
    const auto grid = regular_im_grid(a.a_max, a.subdivisions);
    const CurveBand band =
        band_from_chain(chain.samples, grid, 1.0 - a.credibility);
    write_band_csv(band, (dir / "band.csv").string());

    double ma = 0.0, mb = 0.0;
    for (const auto& s : chain.samples) {
      ma += s.alpha;
      mb += s.beta;
    }
    ma /= static_cast<double>(chain.samples.size());
    mb /= static_cast<double>(chain.samples.size());
    std::ofstream diag(dir / "diagnostics.txt");
    diag << "n_samples = " << chain.samples.size() << '\n'
         << "acceptance_rate = " << format_double(chain.acceptance_rate) << '\n'
         << "init_alpha = " << format_double(init.alpha) << '\n'
         << "init_beta = " << format_double(init.beta) << '\n'
         << "posterior_mean_alpha = " << format_double(ma) << '\n'
         << "posterior_mean_beta = " << format_double(mb) << '\n';
    if (!diag) throw std::runtime_error("cannot write diagnostics.txt");
    write_resolved_config(sub, dir / "resolved_config.txt");
    std::cout << "posterior mean (alpha, beta) = (" << format_double(ma)
              << ", " << format_double(mb) << "), acceptance "
              << format_double(chain.acceptance_rate) << '\n';
  });
}

struct MleArgs {
  Common common;
  std::string data_csv;
  int bootstrap = 0;
};

int cmd_mle(const CLI::App* sub, const MleArgs& a) {
  return run_guarded(a.common, true, [&] {
    const Dataset data = read_dataset_csv(a.data_csv);
    MleConfig cfg;
    cfg.rng_seed = mix_seed(a.common.seed, 0x31e);
    const MleResult fit = fit_mle(data, cfg);
    const fs::path dir(a.common.out);
    std::ofstream out(dir / "mle.txt");
    if (fit.theta_hat) {
      out << "alpha = " << format_double(fit.theta_hat->alpha) << '\n'
          << "beta = " << format_double(fit.theta_hat->beta) << '\n';
    }
    out << "degenerate = " << (fit.degenerate ? 1 : 0) << '\n'
        << "log_lik = " << format_double(fit.log_lik_at_opt) << '\n';
    if (a.bootstrap > 0) {
      const auto fits = bootstrap_mle(data, a.bootstrap,
                                      mix_seed(a.common.seed, 0xb00),
                                      cfg, a.common.threads);
      write_bootstrap_csv(fits, (dir / "bootstrap.csv").string());
      std::size_t degen = 0;
      for (const auto& f : fits) degen += f.degenerate ? 1 : 0;
      out << "bootstrap_replicates = " << fits.size() << '\n'
          << "bootstrap_degenerate_fraction = "
          << format_double(static_cast<double>(degen) /
                           static_cast<double>(fits.size()))
          << '\n';
    }
    if (!out) throw std::runtime_error("cannot write mle.txt");
    write_resolved_config(sub, dir / "resolved_config.txt");
    if (fit.theta_hat) {
      std::cout << "MLE (alpha, beta) = ("
                << format_double(fit.theta_hat->alpha) << ", "
                << format_double(fit.theta_hat->beta) << ")"
                << (fit.degenerate ? " [degenerate]" : "") << '\n';
    } else {
      std::cout << "MLE degenerate: single-outcome data, no estimate\n";
    }
  });
}

struct ReferenceArgs {
  Common common;
  std::string data_csv;
  int clusters = 30;
};

int cmd_reference(const CLI::App* sub, const ReferenceArgs& a) {
  return run_guarded(a.common, true, [&] {
    const Dataset data = read_dataset_csv(a.data_csv);
    const McCurve curve = mc_fragility(data, a.clusters);
    const fs::path dir(a.common.out);
    write_mc_curve_csv(curve, (dir / "mc_curve.csv").string());
    write_resolved_config(sub, dir / "resolved_config.txt");
    std::cout << "wrote " << curve.centroids.size() << " clusters ("
              << curve.merged_clusters << " merged)\n";
  });
}

struct MetricsArgs {
  Common common;
  std::string chain_csv;
  double ref_alpha = 0.0;
  double ref_beta = 0.0;
  double a_max = 12.0;
  int subdivisions = 200;
  double credibility = 0.95;
};

int cmd_metrics(const CLI::App* sub, const MetricsArgs& a) {
  return run_guarded(a.common, true, [&] {
    std::size_t skipped = 0;
    const auto thetas = read_theta_csv(a.chain_csv, skipped);
    MetricConfig cfg;
    cfg.a_max = a.a_max;
    cfg.subdivisions = a.subdivisions;
    cfg.credibility = a.credibility;
    cfg.reference_curve = FragilityParams{a.ref_alpha, a.ref_beta};
    if (!cfg.reference_curve.valid()) {
      throw std::invalid_argument("--ref-alpha/--ref-beta must be positive");
    }
    const double quad = quadratic_error(thetas, cfg);
    const double cred = credibility_width(thetas, cfg);
    const fs::path dir(a.common.out);
    std::ofstream out(dir / "metrics.txt");
    out << "quadratic_error = " << format_double(quad) << '\n'
        << "credibility_width = " << format_double(cred) << '\n'
        << "n_curves = " << thetas.size() << '\n'
        << "n_skipped_degenerate = " << skipped << '\n';
    if (!out) throw std::runtime_error("cannot write metrics.txt");
    write_resolved_config(sub, dir / "resolved_config.txt");
    std::cout << "quadratic_error = " << format_double(quad)
              << ", credibility_width = " << format_double(cred) << '\n';
  });
}

struct SimulateArgs {
  Common common;
  std::size_t n = 1000;
  double alpha = 3.0;
  double beta = 0.4;
  double im_mu = 0.09531017980432486;  // log-median PGA 1.1 m/s^2
  double im_sigma = 0.6;
  std::string im_csv;  // optional: resample these IMs instead
};

int cmd_simulate(const CLI::App* sub, const SimulateArgs& a) {
  return run_guarded(a.common, true, [&] {
    GeneratorSpec spec;
    spec.theta_true = FragilityParams{a.alpha, a.beta};
    spec.n = a.n;
    spec.seed = a.common.seed;
    if (!a.im_csv.empty()) {
      spec.im_model = read_im_csv(a.im_csv);
    } else {
      spec.im_model = LogNormalIM{a.im_mu, a.im_sigma};
    }
    const Dataset data = generate(spec);
    const fs::path dir(a.common.out);
    write_dataset_csv(data, (dir / "data.csv").string(),
                      {"synthetic data, seed " + std::to_string(a.common.seed),
                       "theta_true = (" + format_double(a.alpha) + ", " +
                           format_double(a.beta) + ")"});
    write_resolved_config(sub, dir / "resolved_config.txt");
    std::cout << "wrote " << data.size() << " observations ("
              << data.n_failures() << " failures)\n";
  });
}

struct ReplicateArgs {
  Common common;
  std::string data_csv;
  std::vector<std::size_t> k_values{20, 50};
  std::size_t m = 50;
  int L = 2000;
  std::vector<std::string> methods{"jeffreys", "sk", "bootstrap"};
  std::string grid_path;
  double sk_mu = std::nan("");
  double sk_sigma = std::nan("");
  double beta_max = std::nan("");  // NaN = kind default, 0 = untruncated
  double ref_alpha = 0.0;  // 0 = full-data MLE
  double ref_beta = 0.0;
  double a_max = 12.0;
  int subdivisions = 200;
  double credibility = 0.95;
};

int cmd_replicate(const CLI::App* sub, const ReplicateArgs& a) {
  return run_guarded(a.common, true, [&] {
    const Dataset data = read_dataset_csv(a.data_csv);

    std::vector<Method> methods;
    for (const auto& m : a.methods) {
      if (m == "jeffreys") methods.push_back(Method::jeffreys);
      else if (m == "sk") methods.push_back(Method::sk);
      else if (m == "bootstrap") methods.push_back(Method::bootstrap);
      else throw std::invalid_argument("unknown method " + m);
    }

    ReplicationOptions opt;
    opt.threads = a.common.threads;
    bool needs_jeffreys = false, needs_sk = false;
    for (Method m : methods) {
      needs_jeffreys |= m == Method::jeffreys;
      needs_sk |= m == Method::sk;
    }
    if (needs_jeffreys) {
      opt.jeffreys_prior = make_prior("jeffreys", a.grid_path, data,
                                      a.sk_mu, a.sk_sigma, a.beta_max, false);
    }
    if (needs_sk) {
      opt.sk_prior = make_prior("sk", "", data, a.sk_mu, a.sk_sigma,
                                a.beta_max, true);
    }

    MetricConfig cfg;
    cfg.a_max = a.a_max;
    cfg.subdivisions = a.subdivisions;
    cfg.credibility = a.credibility;
    if (a.ref_alpha > 0.0 && a.ref_beta > 0.0) {
      cfg.reference_curve = FragilityParams{a.ref_alpha, a.ref_beta};
    } else {
      MleConfig mle_cfg;
      mle_cfg.rng_seed = mix_seed(a.common.seed, 0x5ef);
      const MleResult ref = fit_mle(data, mle_cfg);
      if (ref.degenerate || !ref.theta_hat) {
        throw std::runtime_error(
            "full-data MLE is degenerate; pass --ref-alpha/--ref-beta");
      }
      cfg.reference_curve = *ref.theta_hat;
    }

    const ReplicationSummary summary =
        replication_study(data, a.k_values, a.m, a.L, methods, cfg, opt,
                          a.common.seed);
    const fs::path dir(a.common.out);
    write_replication_csv(summary, (dir / "replication.csv").string());
    write_resolved_config(sub, dir / "resolved_config.txt");
    for (const auto& row : summary.rows) {
      std::cout << "k=" << row.k << ' ' << method_name(row.method) << ' '
                << row.metric << " mean=" << format_double(row.mean)
                << " excluded=" << row.n_excluded << '\n';
    }
  });
}

struct AsympArgs {
  Common common;  // out optional here
  double im_mu = 0.09531017980432486;
  double im_sigma = 0.6;
  std::string grid_path;
};

int cmd_asymptotics(const CLI::App* sub, const AsympArgs& a) {
  try {
    const LogNormalIM ln{a.im_mu, a.im_sigma};
    const AsymptoticConstants consts{ln.mu, ln.sigma};
    std::optional<PriorGrid> grid;
    if (!a.grid_path.empty()) grid = load_prior_grid(a.grid_path);
    const QuadratureSpec quad = QuadratureSpec::adaptive();
    const ImPdf pdf = im_pdf(ln);
    auto log_j = [&](const FragilityParams& theta) {
      return grid ? interp_log_prior(*grid, theta)
                  : log_jeffreys_unnormalized(theta, pdf, quad);
    };

    std::ostringstream os;
    os << "# e_prime = " << format_double(consts.e_prime()) << '\n';

    os << "# large-beta law: ratio = J * alpha * beta^3 / e_prime -> 1\n"
       << "alpha beta ratio\n";
    for (double alpha : {1.1, 3.0}) {
      for (double beta : {50.0, 100.0}) {
        const FragilityParams theta{alpha, beta};
        const double ratio =
            std::exp(log_j(theta)) / asymptotic_jeffreys(theta, consts,
                                                         AsymptoticRegime::beta_inf);
        os << format_double(alpha) << ' ' << format_double(beta) << ' '
           << format_double(ratio) << '\n';
      }
    }

    os << "# small-beta law: beta * J approaches a constant in alpha\n"
       << "alpha beta beta_times_J rel_change\n";
    for (double alpha : {1.1, 3.0}) {
      double prev = 0.0;
      for (double beta : {1e-3, 5e-4}) {
        const double v = beta * std::exp(log_j(FragilityParams{alpha, beta}));
        const double rel = prev > 0.0 ? std::abs(v - prev) / prev : 0.0;
        os << format_double(alpha) << ' ' << format_double(beta) << ' '
           << format_double(v) << ' ' << format_double(rel) << '\n';
        prev = v;
      }
    }

    os << "# alpha-tail law: ratio = J / closed-form tail -> 1\n"
       << "log_alpha beta ratio\n";
    for (double sgn : {-1.0, 1.0}) {
      const double la = ln.mu + sgn * 8.0;
      for (double beta : {0.3, 0.5}) {
        const FragilityParams theta{std::exp(la), beta};
        const double ratio =
            std::exp(log_j(theta)) /
            asymptotic_jeffreys(theta, consts, AsymptoticRegime::alpha_tail);
        os << format_double(la) << ' ' << format_double(beta) << ' '
           << format_double(ratio) << '\n';
      }
    }

    std::cout << os.str();
    if (!a.common.out.empty()) {
      std::ofstream out(a.common.out);
      out << os.str();
      if (!out) throw std::runtime_error("cannot write " + a.common.out);
      write_resolved_config(sub, a.common.out + ".config");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!a.common.out.empty()) {
      std::ofstream marker(a.common.out + ".ERROR");
      marker << e.what() << '\n';
    }
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-normal fragility-curve estimation toolkit"};
  app.require_subcommand(1);

  PriorGridArgs pg;
  auto* sub_pg = app.add_subcommand(
      "prior-grid", "Precompute the Jeffreys prior on a parameter mesh");
  add_common(sub_pg, pg.common, false);
  sub_pg->add_option("--im", pg.im_csv, "IM sample CSV (header `im`)")
      ->required();
  sub_pg->add_option("--alpha-min", pg.grid.alpha_min)->capture_default_str();
  sub_pg->add_option("--alpha-max", pg.grid.alpha_max)->capture_default_str();
  sub_pg->add_option("--beta-min", pg.grid.beta_min)->capture_default_str();
  sub_pg->add_option("--beta-max", pg.grid.beta_max)->capture_default_str();
  sub_pg->add_option("--n-alpha", pg.grid.n_alpha)->capture_default_str();
  sub_pg->add_option("--n-beta", pg.grid.n_beta)->capture_default_str();
  sub_pg->add_option("--bandwidth", pg.bandwidth,
                     "KDE bandwidth override (0 = Silverman rule)")
      ->capture_default_str();
  sub_pg->add_option("--quadrature", pg.quad_mode, "fixed|adaptive")
      ->capture_default_str();

  FitArgs fit;
  auto* sub_fit = app.add_subcommand(
      "fit", "Sample the posterior fragility curve by adaptive MCMC");
  add_common(sub_fit, fit.common, true);
  sub_fit->add_option("--data", fit.data_csv,
                      "Dataset CSV (header `im,failure`)")->required();
  sub_fit->add_option("--prior", fit.prior, "jeffreys|sk|flat")
      ->capture_default_str();
  sub_fit->add_option("--grid", fit.grid_path, "Jeffreys prior grid cache");
  sub_fit->add_option("--sk-mu", fit.sk_mu,
                      "SK prior mean of log alpha (default: log-IM mean)");
  sub_fit->add_option("--sk-sigma", fit.sk_sigma,
                      "SK prior std of log alpha (default: log-IM std)");
  sub_fit->add_option("--beta-max", fit.beta_max,
                      "Beta truncation (0 disables)")->capture_default_str();
  sub_fit->add_option("--samples", fit.samples)->capture_default_str();
  sub_fit->add_option("--burn-in", fit.burn_in)->capture_default_str();
  sub_fit->add_option("--adapt-start", fit.adapt_start)->capture_default_str();
  sub_fit->add_option("--initial-step", fit.initial_step)
      ->capture_default_str();
  sub_fit->add_option("--a-max", fit.a_max)->capture_default_str();
  sub_fit->add_option("--subdivisions", fit.subdivisions)
      ->capture_default_str();
  sub_fit->add_option("--credibility", fit.credibility)->capture_default_str();

  MleArgs mle;
  auto* sub_mle = app.add_subcommand(
      "mle", "Maximum-likelihood fit with optional bootstrap ensemble");
  add_common(sub_mle, mle.common, true);
  sub_mle->add_option("--data", mle.data_csv)->required();
  sub_mle->add_option("--bootstrap", mle.bootstrap,
                      "Bootstrap replicate count (0 = none)")
      ->capture_default_str();

  ReferenceArgs ref;
  auto* sub_ref = app.add_subcommand(
      "reference", "Nonparametric Monte-Carlo reference curve");
  add_common(sub_ref, ref.common, true);
  sub_ref->add_option("--data", ref.data_csv)->required();
  sub_ref->add_option("--clusters", ref.clusters)->capture_default_str();

  MetricsArgs met;
  auto* sub_met = app.add_subcommand(
      "metrics", "Curve-comparison metrics for a sampled ensemble");
  add_common(sub_met, met.common, true);
  sub_met->add_option("--chain", met.chain_csv,
                      "Chain or bootstrap CSV (alpha,beta,...)")->required();
  sub_met->add_option("--ref-alpha", met.ref_alpha)->required();
  sub_met->add_option("--ref-beta", met.ref_beta)->required();
  sub_met->add_option("--a-max", met.a_max)->capture_default_str();
  sub_met->add_option("--subdivisions", met.subdivisions)
      ->capture_default_str();
  sub_met->add_option("--credibility", met.credibility)->capture_default_str();

  SimulateArgs sim;
  auto* sub_sim = app.add_subcommand(
      "simulate", "Generate synthetic failure data from a known curve");
  add_common(sub_sim, sim.common, true);
  sub_sim->add_option("--n", sim.n)->capture_default_str();
  sub_sim->add_option("--alpha", sim.alpha)->capture_default_str();
  sub_sim->add_option("--beta", sim.beta)->capture_default_str();
  sub_sim->add_option("--im-mu", sim.im_mu)->capture_default_str();
  sub_sim->add_option("--im-sigma", sim.im_sigma)->capture_default_str();
  sub_sim->add_option("--im", sim.im_csv,
                      "IM sample CSV to resample instead of the log-normal");

  ReplicateArgs rep;
  auto* sub_rep = app.add_subcommand(
      "replicate", "Subsample replication study comparing the methods");
  add_common(sub_rep, rep.common, true);
  sub_rep->add_option("--data", rep.data_csv)->required();
  sub_rep->add_option("--k", rep.k_values, "Subsample sizes")
      ->delimiter(',')
      ->capture_default_str();
  sub_rep->add_option("--m", rep.m, "Draws per (k, method)")
      ->capture_default_str();
  sub_rep->add_option("-L,--replicates", rep.L,
                      "Retained MCMC samples / bootstrap replicates")
      ->capture_default_str();
  sub_rep->add_option("--methods", rep.methods, "jeffreys,sk,bootstrap")
      ->delimiter(',')
      ->capture_default_str();
  sub_rep->add_option("--grid", rep.grid_path, "Jeffreys prior grid cache");
  sub_rep->add_option("--sk-mu", rep.sk_mu);
  sub_rep->add_option("--sk-sigma", rep.sk_sigma);
  sub_rep->add_option("--beta-max", rep.beta_max)->capture_default_str();
  sub_rep->add_option("--ref-alpha", rep.ref_alpha,
                      "Reference curve alpha (0 = full-data MLE)")
      ->capture_default_str();
  sub_rep->add_option("--ref-beta", rep.ref_beta)->capture_default_str();
  sub_rep->add_option("--a-max", rep.a_max)->capture_default_str();
  sub_rep->add_option("--subdivisions", rep.subdivisions)
      ->capture_default_str();
  sub_rep->add_option("--credibility", rep.credibility)->capture_default_str();

  AsympArgs asym;
  auto* sub_asym = app.add_subcommand(
      "asymptotics-check", "Tail-law ratio tables for the Jeffreys prior");
  sub_asym->add_option("--seed", asym.common.seed)->capture_default_str();
  sub_asym->add_option("--threads", asym.common.threads)
      ->capture_default_str();
  sub_asym->add_option("--out", asym.common.out, "Optional output file");
  sub_asym->add_option("--config", asym.common.config,
                       "Flat key=value config file; command-line flags win");
  sub_asym->add_option("--im-mu", asym.im_mu)->capture_default_str();
  sub_asym->add_option("--im-sigma", asym.im_sigma)->capture_default_str();
  sub_asym->add_option("--grid", asym.grid_path,
                       "Evaluate the cached grid instead of direct quadrature");

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (sub_pg->parsed()) return cmd_prior_grid(sub_pg, pg);
  if (sub_fit->parsed()) return cmd_fit(sub_fit, fit);
  if (sub_mle->parsed()) return cmd_mle(sub_mle, mle);
  if (sub_ref->parsed()) return cmd_reference(sub_ref, ref);
  if (sub_met->parsed()) return cmd_metrics(sub_met, met);
  if (sub_sim->parsed()) return cmd_simulate(sub_sim, sim);
  if (sub_rep->parsed()) return cmd_replicate(sub_rep, rep);
  if (sub_asym->parsed()) return cmd_asymptotics(sub_asym, asym);
  return 1;
}
