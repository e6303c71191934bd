#include "fragility/quadrature.hpp"

namespace fragility {

std::vector<double> simpson_weights(std::size_t n, double step) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  }
  std::vector<double> w(n, 0.0);
  const double c = step / 3.0;
  w.front() = c;
  w.back() = c;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    w[i] = (i % 2 == 1) ? 4.0 * c : 2.0 * c;
  }
  return w;
}

double simpson(std::span<const double> values, double step) {
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  }
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (i % 2 == 1) {
      odd += values[i];
    } else {
      even += values[i];
    }
  }
  return step / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

}  // namespace fragility
