#include "fragility/synthdata.hpp"

#include <stdexcept>

#include "fragility/rng.hpp"

namespace fragility {

Dataset generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n >= 1");
  if (!spec.theta_true.valid()) {
    throw std::invalid_argument("generate: invalid theta_true");
  }
  RngStream rng(spec.seed);
  Dataset data;
  data.observations.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double a;
    if (const auto* ln = std::get_if<LogNormalIM>(&spec.im_model)) {
      a = rng.lognormal(ln->mu, ln->sigma);
    } else {
      const auto& sample = std::get<IMSample>(spec.im_model);
      validate_sample(sample);
      a = sample.values[static_cast<Eigen::Index>(
          rng.uniform_index(static_cast<std::uint64_t>(sample.values.size())))];
    }
    const bool z = rng.bernoulli(fragility_probability(spec.theta_true, a));
    data.observations.push_back({a, z});
  }
  return data;
}

Dataset make_separated(std::size_t k, std::pair<double, double> gap) {
  if (k < 2) throw std::invalid_argument("make_separated: k >= 2");
  if (!(gap.first > 0.0) || !(gap.second > gap.first)) {
    throw std::invalid_argument("make_separated: need 0 < low < high");
  }
  const std::size_t n_survive = k / 2;
  const std::size_t n_fail = k - n_survive;
  Dataset data;
  data.observations.reserve(k);
  for (std::size_t i = 0; i < n_survive; ++i) {
    const double a = gap.first * static_cast<double>(i + 1) /
                     static_cast<double>(n_survive);
    data.observations.push_back({a, false});
  }
  const double width = gap.second - gap.first;
  for (std::size_t i = 0; i < n_fail; ++i) {
    data.observations.push_back({gap.second + width * static_cast<double>(i), true});
  }
  return data;
}

}  // namespace fragility
