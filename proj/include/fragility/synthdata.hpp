#pragma once

#include <cstdint>
#include <variant>

#include "fragility/im_distribution.hpp"
#include "fragility/probit_model.hpp"

namespace fragility {

// Synthetic-data generator: IM draws from a log-normal model or by
// resampling an observed IM sample, with Bernoulli failure labels from a
// known true fragility curve.
struct GeneratorSpec {
  std::variant<LogNormalIM, IMSample> im_model = LogNormalIM{0.09531017980432486, 0.6};
  FragilityParams theta_true{3.0, 0.4};
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

Dataset generate(const GeneratorSpec& spec);

// Perfectly separated dataset on demand: k/2 survivals below the gap,
// the remaining failures above it, IMs evenly spread.
Dataset make_separated(std::size_t k, std::pair<double, double> gap);

}  // namespace fragility
