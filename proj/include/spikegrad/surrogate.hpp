// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Fast-sigmoid surrogate for the spike non-linearity. The forward pass keeps
// the hard threshold; backward passes replace dS/dU, whose true value is 0
// almost everywhere, with the derivative of s(x) = x / (1 + steepness*|x|)
// evaluated at the membrane's distance from threshold.

#pragma once

#include "spikegrad/common.hpp"
#include "spikegrad/neuron.hpp"

#include <cmath>

namespace spikegrad {

template <typename Scalar>
struct SurrogateConfig {
  Scalar steepness = Scalar(100);

  void validate() const {
    if (!(steepness > Scalar(0)))
      throw std::domain_error("SurrogateConfig: steepness must be positive");
  }
};

/// s(x) = x / (1 + steepness*|x|). Used as the spike output in the
/// surrogate-relaxed forward mode (gradient checking).
template <typename Scalar>
Scalar fast_sigmoid(Scalar x, Scalar steepness) {
  return x / (Scalar(1) + steepness * std::abs(x));
}

/// ds/dx = 1 / (1 + steepness*|x|)^2 at x = u - theta.
template <typename Scalar>
Scalar surrogate_derivative(Scalar u, const SurrogateConfig<Scalar>& cfg,
                            Scalar theta = Scalar(kThreshold)) {
  const Scalar denom = Scalar(1) + cfg.steepness * std::abs(u - theta);
  return Scalar(1) / (denom * denom);
}

}  // namespace spikegrad
