#include "fragility/jeffreys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fragility/parallel.hpp"
#include "fragility/stats.hpp"

namespace fragility {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator.
struct LogAccumulator {
  double max_log = kNegInf;
  double scaled_sum = 0.0;

  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term > max_log) {
      scaled_sum = scaled_sum * std::exp(max_log - log_term) + 1.0;
      max_log = log_term;
    } else {
      scaled_sum += std::exp(log_term - max_log);
    }
  }

  double log_total() const {
    if (scaled_sum <= 0.0) return kNegInf;
    return max_log + std::log(scaled_sum);
  }
};

// Signed accumulators for the six A_kj integrals; k = 1 integrands change
// sign at a = alpha.
struct IntegralAccumulators {
  LogAccumulator pos[3][2];
  LogAccumulator neg[3][2];

  void add(int k, int j, double sign, double log_mag) {
    if (sign >= 0.0) {
      pos[k][j].add(log_mag);
    } else {
      neg[k][j].add(log_mag);
    }
  }
};

struct NodePlan {
  std::vector<double> im;       // a values
  std::vector<double> log_jac;  // log of (quadrature weight * da/dnode)
};

NodePlan make_plan(const FragilityParams& theta, const ImPdf& p,
                   const QuadratureSpec& quad) {
  NodePlan plan;
  if (quad.mode == QuadratureSpec::Mode::fixed) {
    int n = quad.subdivisions + 1;
    if (quad.subdivisions < 2 || quad.subdivisions % 2 != 0) {
      throw std::invalid_argument("quadrature subdivisions must be even >= 2");
    }
    const double step = quad.a_max / quad.subdivisions;
    const auto w = simpson_weights(static_cast<std::size_t>(n), step);
    plan.im.resize(n);
    plan.log_jac.resize(n);
    for (int i = 0; i < n; ++i) {
      plan.im[i] = i * step;
      plan.log_jac[i] = std::log(w[i]);
    }
    return plan;
  }

  // Adaptive: regular gamma grid; the Gaussian factor kills the integrand
  // beyond |gamma| = gamma_span for any density, and the step resolves the
  // density's log-scale features even when beta is large.
  const double span = quad.gamma_span;
  double step = std::min(quad.gamma_step, p.log_scale / (8.0 * theta.beta));
  auto n = static_cast<std::size_t>(std::ceil(2.0 * span / step)) + 1;
  n = std::min(n, static_cast<std::size_t>(quad.max_nodes));
  if (n % 2 == 0) ++n;
  if (n < 3) n = 3;
  step = 2.0 * span / static_cast<double>(n - 1);
  const auto w = simpson_weights(n, step);
  plan.im.resize(n);
  plan.log_jac.resize(n);
  const double log_ab = std::log(theta.alpha * theta.beta);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = -span + static_cast<double>(i) * step;
    plan.im[i] = theta.alpha * std::exp(theta.beta * g);
    // da = alpha beta e^{beta gamma} dgamma
    plan.log_jac[i] = std::log(w[i]) + log_ab + theta.beta * g;
  }
  return plan;
}

IntegralAccumulators accumulate(const FragilityParams& theta, const ImPdf& p,
                                const QuadratureSpec& quad) {
  if (!theta.valid()) {
    throw std::invalid_argument("a_integrals: invalid theta");
  }
  const NodePlan plan = make_plan(theta, p, quad);
  IntegralAccumulators acc;
  const double log_alpha = std::log(theta.alpha);
  for (std::size_t i = 0; i < plan.im.size(); ++i) {
    const double a = plan.im[i];
    if (!(a > 0.0)) continue;  // the a = 0 endpoint contributes zero
    const double pa = p.pdf(a);
    if (!(pa > 0.0)) {
      if (std::isnan(pa)) {
        throw std::runtime_error("a_integrals: density NaN at a = " +
                                 std::to_string(a));
      }
      continue;
    }
    const double la = std::log(a) - log_alpha;
    const double g = std::clamp(la / theta.beta, -46.0, 46.0);
    const double log_phi2 = 2.0 * log_norm_pdf(g);
    const double log_pa = std::log(pa);
    const double base1 = log_phi2 - log_norm_cdf(g) + log_pa + plan.log_jac[i];
    const double base2 = log_phi2 - log_norm_cdf(-g) + log_pa + plan.log_jac[i];
    if (std::isnan(base1) || std::isnan(base2)) {
      throw std::runtime_error("a_integrals: NaN integrand at a = " +
                               std::to_string(a));
    }
    const double log_abs_la =
        la == 0.0 ? kNegInf : std::log(std::abs(la));
    const double sign_la = la >= 0.0 ? 1.0 : -1.0;
    for (int k = 0; k < 3; ++k) {
      // k = 0 must not touch log_abs_la: 0 * (-inf) is NaN at a = alpha.
      const double lk = k == 0 ? 0.0 : static_cast<double>(k) * log_abs_la;
      const double sk = (k == 1) ? sign_la : 1.0;
      acc.add(k, 0, sk, base1 + lk);
      acc.add(k, 1, sk, base2 + lk);
    }
  }
  return acc;
}

double signed_exp(const LogAccumulator& pos, const LogAccumulator& neg) {
  const double lp = pos.log_total();
  const double ln = neg.log_total();
  double v = 0.0;
  if (lp != kNegInf) v += std::exp(lp);
  if (ln != kNegInf) v -= std::exp(ln);
  return v;
}

// log|x_pos - x_neg| and sign from log magnitudes.
std::pair<double, double> signed_log_diff(double lp, double ln) {
  if (ln == kNegInf) return {lp, 1.0};
  if (lp == kNegInf) return {ln, -1.0};
  if (lp >= ln) return {lp + std::log1p(-std::exp(ln - lp)), 1.0};
  return {ln + std::log1p(-std::exp(lp - ln)), -1.0};
}

}  // namespace

AIntegrals a_integrals(const FragilityParams& theta, const ImPdf& p,
                       const QuadratureSpec& quad) {
  const IntegralAccumulators acc = accumulate(theta, p, quad);
  AIntegrals out;
  out.a01 = signed_exp(acc.pos[0][0], acc.neg[0][0]);
  out.a02 = signed_exp(acc.pos[0][1], acc.neg[0][1]);
  out.a11 = signed_exp(acc.pos[1][0], acc.neg[1][0]);
  out.a12 = signed_exp(acc.pos[1][1], acc.neg[1][1]);
  out.a21 = signed_exp(acc.pos[2][0], acc.neg[2][0]);
  out.a22 = signed_exp(acc.pos[2][1], acc.neg[2][1]);
  return out;
}

LogAIntegrals a_integrals_log(const FragilityParams& theta, const ImPdf& p,
                              const QuadratureSpec& quad) {
  const IntegralAccumulators acc = accumulate(theta, p, quad);
  LogAIntegrals out;
  auto combine_pos = [](const IntegralAccumulators& a, int k) {
    const double t[2] = {a.pos[k][0].log_total(), a.pos[k][1].log_total()};
    return log_sum_exp(t);
  };
  out.log_a0 = combine_pos(acc, 0);
  out.log_a2 = combine_pos(acc, 2);
  const double lp = log_sum_exp(std::array{acc.pos[1][0].log_total(),
                                           acc.pos[1][1].log_total()});
  const double ln = log_sum_exp(std::array{acc.neg[1][0].log_total(),
                                           acc.neg[1][1].log_total()});
  auto [mag, sign] = signed_log_diff(lp, ln);
  out.log_abs_a1 = mag;
  out.sign_a1 = sign;
  return out;
}

FisherMatrix fisher_information(const FragilityParams& theta, const ImPdf& p,
                                const QuadratureSpec& quad) {
  const AIntegrals a = a_integrals(theta, p, quad);
  const double al = theta.alpha;
  const double b = theta.beta;
  FisherMatrix f;
  f.i_aa = (a.a01 + a.a02) / (al * al * b * b);
  f.i_ab = (a.a11 + a.a12) / (al * b * b * b);
  f.i_bb = (a.a21 + a.a22) / (b * b * b * b);
  return f;
}

double log_jeffreys_unnormalized(const FragilityParams& theta, const ImPdf& p,
                                 const QuadratureSpec& quad) {
  const LogAIntegrals la = a_integrals_log(theta, p, quad);
  if (la.log_a0 == kNegInf || la.log_a2 == kNegInf) {
    throw std::runtime_error("log_jeffreys: integrals underflowed to zero");
  }
  const double log_scale =
      2.0 * std::log(theta.alpha) + 6.0 * std::log(theta.beta);
  // det = (A0 A2 - A1^2) / (alpha^2 beta^6); Cauchy-Schwarz keeps the
  // bracket nonnegative up to quadrature noise.
  const double ratio = 2.0 * la.log_abs_a1 - la.log_a0 - la.log_a2;
  if (ratio >= 0.0) {
    const double det =
        std::exp(la.log_a0 + la.log_a2 - log_scale) * (1.0 - std::exp(ratio));
    if (det < -1e-12) {
      throw std::runtime_error("log_jeffreys: negative Fisher determinant");
    }
    return kNegInf;
  }
  const double log_det =
      la.log_a0 + la.log_a2 + std::log1p(-std::exp(ratio)) - log_scale;
  return 0.5 * log_det;
}

double AsymptoticConstants::e_prime() const { return 2.0 * sigma / M_PI; }

double AsymptoticConstants::g_doubleprime(double beta) const {
  // Laplace expansion of the A_k around the density's log-scale peak: the
  // Mills-ratio corrections cancel in the determinant, leaving
  // sqrt(A0 A2 - A1^2) ~ sigma |u0| tau, which makes the constant
  // beta-independent apart from the variance sum v = sigma^2 + beta^2.
  const double v = sigma * sigma + beta * beta;
  return sigma / (std::sqrt(2.0 * M_PI) * v * v);
}

double asymptotic_jeffreys(const FragilityParams& theta,
                           const AsymptoticConstants& c,
                           AsymptoticRegime regime) {
  if (!theta.valid()) {
    throw std::invalid_argument("asymptotic_jeffreys: invalid theta");
  }
  switch (regime) {
    case AsymptoticRegime::beta_inf:
      return c.e_prime() / (theta.alpha * std::pow(theta.beta, 3));
    case AsymptoticRegime::alpha_tail: {
      const double la = std::log(theta.alpha);
      const double denom = 2.0 * theta.beta * theta.beta + 2.0 * c.sigma * c.sigma;
      return c.g_doubleprime(theta.beta) * std::abs(la) / theta.alpha *
             std::exp(-(la - c.mu) * (la - c.mu) / denom);
    }
  }
  throw std::logic_error("unreachable");
}

PriorGrid build_prior_grid(const ImPdf& p, const LogNormalIM& im_fit,
                           const GridSpec& spec, const QuadratureSpec& quad,
                           int threads) {
  if (!(spec.alpha_min > 0.0) || !(spec.beta_min > 0.0) ||
      spec.alpha_max <= spec.alpha_min || spec.beta_max <= spec.beta_min ||
      spec.n_alpha < 2 || spec.n_beta < 2) {
    throw std::invalid_argument("build_prior_grid: invalid grid spec");
  }
  PriorGrid grid;
  grid.im_lognormal = im_fit;
  grid.alpha_knots.resize(spec.n_alpha);
  grid.beta_knots.resize(spec.n_beta);
  const double la0 = std::log(spec.alpha_min);
  const double la1 = std::log(spec.alpha_max);
  const double lb0 = std::log(spec.beta_min);
  const double lb1 = std::log(spec.beta_max);
  for (int i = 0; i < spec.n_alpha; ++i) {
    grid.alpha_knots[i] =
        std::exp(la0 + (la1 - la0) * i / double(spec.n_alpha - 1));
  }
  for (int j = 0; j < spec.n_beta; ++j) {
    grid.beta_knots[j] =
        std::exp(lb0 + (lb1 - lb0) * j / double(spec.n_beta - 1));
  }
  grid.log_values.resize(spec.n_alpha, spec.n_beta);
  const std::size_t n_knots =
      static_cast<std::size_t>(spec.n_alpha) * spec.n_beta;
  std::vector<std::string> failures(n_knots);
  parallel_for(n_knots, threads, [&](std::size_t t) {
    const int i = static_cast<int>(t) / spec.n_beta;
    const int j = static_cast<int>(t) % spec.n_beta;
    const FragilityParams theta{grid.alpha_knots[i], grid.beta_knots[j]};
    double v = 0.0;
    try {
      v = log_jeffreys_unnormalized(theta, p, quad);
      if (!std::isfinite(v)) {
        failures[t] = "prior grid knot not finite at alpha = " +
                      std::to_string(theta.alpha) + ", beta = " +
                      std::to_string(theta.beta);
      }
    } catch (const std::exception& e) {
      failures[t] = "prior grid knot failed at alpha = " +
                    std::to_string(theta.alpha) + ", beta = " +
                    std::to_string(theta.beta) + ": " + e.what();
    }
    grid.log_values(i, j) = v;
  });
  for (const auto& msg : failures) {
    if (!msg.empty()) throw std::runtime_error(msg);
  }
  return grid;
}

namespace {

// Index of the knot interval containing x (log coordinates), clamped.
std::size_t bracket(const std::vector<double>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  if (it == knots.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(i, knots.size() - 2);
}

// Shape of the Prop-B.4 alpha law in log-prior terms.
double alpha_tail_shape(double log_alpha, double beta, const LogNormalIM& im) {
  const double d = log_alpha - im.mu;
  return std::log(std::max(std::abs(log_alpha), 1e-12)) - log_alpha -
         d * d / (2.0 * beta * beta + 2.0 * im.sigma * im.sigma);
}

}  // namespace

double interp_log_prior(const PriorGrid& grid, const FragilityParams& theta) {
  if (!theta.valid()) {
    throw std::invalid_argument("interp_log_prior: invalid theta");
  }
  const double x = std::log(theta.alpha);
  const double y = std::log(theta.beta);
  const double x0 = std::log(grid.alpha_knots.front());
  const double x1 = std::log(grid.alpha_knots.back());
  const double y0 = std::log(grid.beta_knots.front());
  const double y1 = std::log(grid.beta_knots.back());
  const double xc = std::clamp(x, x0, x1);
  const double yc = std::clamp(y, y0, y1);

  const std::size_t i = bracket(grid.alpha_knots, std::exp(xc));
  const std::size_t j = bracket(grid.beta_knots, std::exp(yc));
  const double xi = std::log(grid.alpha_knots[i]);
  const double xi1 = std::log(grid.alpha_knots[i + 1]);
  const double yj = std::log(grid.beta_knots[j]);
  const double yj1 = std::log(grid.beta_knots[j + 1]);
  const double tx = (xc - xi) / (xi1 - xi);
  const double ty = (yc - yj) / (yj1 - yj);
  double v = (1 - tx) * (1 - ty) * grid.log_values(i, j) +
             tx * (1 - ty) * grid.log_values(i + 1, j) +
             (1 - tx) * ty * grid.log_values(i, j + 1) +
             tx * ty * grid.log_values(i + 1, j + 1);

  // Alpha tail (Prop B.4 law), matched at the hull boundary.
  if (x != xc) {
    const double beta_c = std::exp(yc);
    v += alpha_tail_shape(x, beta_c, grid.im_lognormal) -
         alpha_tail_shape(xc, beta_c, grid.im_lognormal);
  }
  // Beta tails: 1/beta divergence below (Prop B.2), beta^-3 decay above
  // (Prop B.3).
  if (y < y0) {
    v += y0 - y;
  } else if (y > y1) {
    v -= 3.0 * (y - y1);
  }
  return v;
}

void save_prior_grid(const PriorGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  out << "alpha_knots:";
  for (double v : grid.alpha_knots) {
    out << ' ';
    put(v);
  }
  out << '\n' << "beta_knots:";
  for (double v : grid.beta_knots) {
    out << ' ';
    put(v);
  }
  out << '\n' << "im_mu: ";
  put(grid.im_lognormal.mu);
  out << '\n' << "im_sigma: ";
  put(grid.im_lognormal.sigma);
  out << '\n';
  for (Eigen::Index i = 0; i < grid.log_values.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.log_values.cols(); ++j) {
      if (j) out << ' ';
      put(grid.log_values(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

PriorGrid load_prior_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PriorGrid grid;
  std::string line, tag;
  auto read_vec = [&](const std::string& expect, std::vector<double>& dst) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated grid file");
    std::istringstream ss(line);
    ss >> tag;
    if (tag != expect) throw std::runtime_error("bad grid header: " + tag);
    double v;
    while (ss >> v) dst.push_back(v);
  };
  read_vec("alpha_knots:", grid.alpha_knots);
  read_vec("beta_knots:", grid.beta_knots);
  std::vector<double> scalar;
  read_vec("im_mu:", scalar);
  grid.im_lognormal.mu = scalar.at(0);
  scalar.clear();
  read_vec("im_sigma:", scalar);
  grid.im_lognormal.sigma = scalar.at(0);
  const auto na = grid.alpha_knots.size();
  const auto nb = grid.beta_knots.size();
  if (na < 2 || nb < 2) throw std::runtime_error("grid file too small");
  grid.log_values.resize(static_cast<Eigen::Index>(na),
                         static_cast<Eigen::Index>(nb));
  for (std::size_t i = 0; i < na; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated grid file");
    std::istringstream ss(line);
    for (std::size_t j = 0; j < nb; ++j) {
      if (!(ss >> grid.log_values(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(j)))) {
        throw std::runtime_error("truncated grid row");
      }
    }
  }
  return grid;
}

}  // namespace fragility
