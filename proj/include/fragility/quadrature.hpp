#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fragility {

// Composite Simpson rule over values sampled on a regular grid with the
// given step. Requires an odd node count (even number of intervals).
double simpson(std::span<const double> values, double step);

// Simpson weights for n nodes (n odd), scaled by step/3.
std::vector<double> simpson_weights(std::size_t n, double step);

// Quadrature plan for the Fisher-information integrals over the IM axis.
//
// `fixed` integrates on the regular grid 0 = A_0 < ... < A_p = a_max, the
// subdivision the metrics also use. `adaptive` substitutes gamma =
// log(a/alpha)/beta and integrates on a regular gamma grid: the integrand's
// Gaussian factor confines it to |gamma| <= gamma_span regardless of the IM
// density, and the node step is shrunk so the density's own log-scale
// features stay resolved at large beta. The adaptive plan is what makes
// beta ~ 1e-3 and far-tail alpha evaluations feasible; the fixed plan cannot
// resolve them at any sane node count.
struct QuadratureSpec {
  enum class Mode { fixed, adaptive };

  Mode mode = Mode::fixed;
  double a_max = 12.0;      // fixed mode upper limit [m/s^2]
  int subdivisions = 200;   // fixed mode: p (node count p+1)
  double gamma_span = 45.0; // adaptive mode half-window
  double gamma_step = 0.05; // adaptive mode base step
  int max_nodes = 2000001;  // adaptive mode safety cap

  static QuadratureSpec adaptive() {
    QuadratureSpec q;
    q.mode = Mode::adaptive;
    return q;
  }
};

}  // namespace fragility
