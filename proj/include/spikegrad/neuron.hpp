// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Discrete-time state updates for the three spiking neuron models.
//
// One generic update rule covers all three kinds; they differ only in which
// decay values are admissible:
//   IF        alpha = 0, beta = 1
//   LIF       alpha = 0, beta in (0,1)
//   CUBA-LIF  alpha in (0,1), beta in (0,1)
//
// Per step, with all right-hand sides reading the previous step's state:
//   I[t] = alpha.*I[t-1] + W*ff[t] + V*rec[t-1]
//   U[t] = (beta.*U[t-1] + I[t]) .* (1 - S[t-1])
//   S[t] = heaviside(U[t] - theta)
// The multiplicative (1 - S[t-1]) factor is the reset: a neuron that spiked
// at t-1 has its membrane zeroed at t (U_rest = 0).

#pragma once

#include "spikegrad/common.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

namespace spikegrad {

enum class NeuronModelKind { IF, LIF, CubaLif };

inline const char* neuron_kind_name(NeuronModelKind kind) {
  switch (kind) {
    case NeuronModelKind::IF:
      return "if";
    case NeuronModelKind::LIF:
      return "lif";
    case NeuronModelKind::CubaLif:
      return "cuba-lif";
  }
  return "?";
}

inline NeuronModelKind parse_neuron_kind(const std::string& name) {
  if (name == "if") return NeuronModelKind::IF;
  if (name == "lif") return NeuronModelKind::LIF;
  if (name == "cuba-lif" || name == "cuba_lif" || name == "cuba")
    return NeuronModelKind::CubaLif;
  throw ConfigError("unknown neuron model kind: '" + name +
                    "' (expected if | lif | cuba-lif)");
}

/// Firing threshold; the whole engine uses theta = 1.
inline constexpr double kThreshold = 1.0;

/// Per-step decay factor exp(-dt/tau). tau = 0 means an infinite leak
/// (factor 0), tau = infinity means no leak (factor 1).
template <typename Scalar = double>
Scalar decay_from_tau(Scalar tau_ms, Scalar dt_ms) {
  if (!(dt_ms > Scalar(0))) throw std::domain_error("decay_from_tau: dt_ms must be positive");
  if (std::isnan(tau_ms) || tau_ms < Scalar(0))
    throw std::domain_error("decay_from_tau: tau_ms must be non-negative");
  if (tau_ms == Scalar(0)) return Scalar(0);
  if (std::isinf(tau_ms)) return Scalar(1);
  return std::exp(-dt_ms / tau_ms);
}

/// Per-neuron decay vectors. alpha_i = exp(-dt/tau_syn_i) in [0,1),
/// beta_i = exp(-dt/tau_mem_i) in (0,1].
template <typename Scalar>
struct DecayParams {
  VectorX<Scalar> alpha;
  VectorX<Scalar> beta;
  Scalar dt_ms = Scalar(14);

  Index size() const { return alpha.size(); }

  /// Broadcasts one (tau_syn, tau_mem) pair over n neurons.
  static DecayParams homogeneous(Index n, Scalar tau_syn_ms, Scalar tau_mem_ms,
                                 Scalar dt_ms) {
    DecayParams d;
    d.dt_ms = dt_ms;
    d.alpha = VectorX<Scalar>::Constant(n, decay_from_tau(tau_syn_ms, dt_ms));
    d.beta = VectorX<Scalar>::Constant(n, decay_from_tau(tau_mem_ms, dt_ms));
    d.validate();
    return d;
  }

  void validate() const {
    if (alpha.size() != beta.size())
      throw std::invalid_argument("DecayParams: alpha/beta size mismatch");
    for (Index i = 0; i < alpha.size(); ++i) {
      if (!(alpha[i] >= Scalar(0)) || !(alpha[i] < Scalar(1)))
        throw std::domain_error("DecayParams: alpha must lie in [0,1)");
      if (!(beta[i] > Scalar(0)) || !(beta[i] <= Scalar(1)))
        throw std::domain_error("DecayParams: beta must lie in (0,1]");
    }
  }
};

/// Layer state after one step: synaptic current I, membrane potential U and
/// the spikes S emitted at that step. S doubles as next step's reset mask and
/// recurrent input. In relaxed (surrogate) mode S holds real values.
template <typename Scalar>
struct LayerState {
  VectorX<Scalar> current;
  VectorX<Scalar> membrane;
  VectorX<Scalar> spikes;

  static LayerState zeros(Index n) {
    return {VectorX<Scalar>::Zero(n), VectorX<Scalar>::Zero(n),
            VectorX<Scalar>::Zero(n)};
  }

  Index size() const { return membrane.size(); }
};

namespace detail {

template <typename Scalar>
void check_step_dimensions(const LayerState<Scalar>& state,
                           const VectorX<Scalar>& ff_spikes,
                           const VectorX<Scalar>* rec_spikes,
                           const MatrixX<Scalar>& feedforward,
                           const MatrixX<Scalar>* recurrent,
                           const DecayParams<Scalar>& decay) {
  const Index n = state.size();
  if (state.current.size() != n || state.spikes.size() != n)
    throw std::invalid_argument("step_layer: inconsistent state vectors");
  if (decay.size() != n)
    throw std::invalid_argument("step_layer: decay size does not match layer");
  if (feedforward.rows() != n || feedforward.cols() != ff_spikes.size())
    throw std::invalid_argument("step_layer: feedforward weight shape mismatch");
  if ((rec_spikes == nullptr) != (recurrent == nullptr))
    throw std::invalid_argument(
        "step_layer: recurrent weights and spikes must both be present or absent");
  if (recurrent != nullptr) {
    if (recurrent->rows() != n || recurrent->cols() != n)
      throw std::invalid_argument("step_layer: recurrent weight shape mismatch");
    if (rec_spikes->size() != n)
      throw std::invalid_argument("step_layer: recurrent spike size mismatch");
  }
}

}  // namespace detail

/// Advances one layer by one step. `ff_spikes` are the upstream layer's
/// spikes feeding this step, `rec_spikes` this layer's own previous spikes
/// (present iff `recurrent` is). The returned state's `spikes` are the
/// output spikes of the step.
///
/// `kind` does not alter the arithmetic (the decay vectors already encode
/// the model); all three kinds share this one code path so the CUBA-LIF ->
/// LIF -> IF reductions hold bit-exactly.
template <typename Scalar>
LayerState<Scalar> step_layer(NeuronModelKind /*kind*/,
                              const LayerState<Scalar>& state,
                              const VectorX<Scalar>& ff_spikes,
                              std::type_identity_t<const VectorX<Scalar>*> rec_spikes,
                              const MatrixX<Scalar>& feedforward,
                              std::type_identity_t<const MatrixX<Scalar>*> recurrent,
                              const DecayParams<Scalar>& decay,
                              std::type_identity_t<Scalar> theta = Scalar(kThreshold)) {
  detail::check_step_dimensions(state, ff_spikes, rec_spikes, feedforward,
                                recurrent, decay);
  LayerState<Scalar> next;
  next.current = decay.alpha.cwiseProduct(state.current);
  next.current.noalias() += feedforward * ff_spikes;
  if (recurrent != nullptr) next.current.noalias() += (*recurrent) * (*rec_spikes);
  next.membrane = (decay.beta.cwiseProduct(state.membrane) + next.current)
                      .cwiseProduct((Scalar(1) - state.spikes.array()).matrix());
  next.spikes = (next.membrane.array() >= theta).template cast<Scalar>();
  return next;
}

/// Full (I, U, S) trajectory of one neuron driven by one input channel.
template <typename Scalar>
struct NeuronTrace {
  VectorX<Scalar> current;
  VectorX<Scalar> membrane;
  VectorX<Scalar> spikes;
};

/// Simulates a single neuron for `input_spikes.size()` steps; element t of
/// `input_spikes` drives step t through the scalar weight.
template <typename Scalar>
NeuronTrace<Scalar> trace_single_neuron(NeuronModelKind kind,
                                        const VectorX<Scalar>& input_spikes,
                                        std::type_identity_t<Scalar> weight,
                                        std::type_identity_t<Scalar> alpha,
                                        std::type_identity_t<Scalar> beta,
                                        std::type_identity_t<Scalar> theta =
                                            Scalar(kThreshold)) {
  const Index steps = input_spikes.size();
  NeuronTrace<Scalar> trace;
  trace.current.resize(steps);
  trace.membrane.resize(steps);
  trace.spikes.resize(steps);

  DecayParams<Scalar> decay;
  decay.alpha = VectorX<Scalar>::Constant(1, alpha);
  decay.beta = VectorX<Scalar>::Constant(1, beta);
  decay.validate();
  MatrixX<Scalar> w(1, 1);
  w(0, 0) = weight;

  LayerState<Scalar> state = LayerState<Scalar>::zeros(1);
  VectorX<Scalar> ff(1);
  for (Index t = 0; t < steps; ++t) {
    ff[0] = input_spikes[t];
    state = step_layer(kind, state, ff, nullptr, w, nullptr, decay, theta);
    trace.current[t] = state.current[0];
    trace.membrane[t] = state.membrane[0];
    trace.spikes[t] = state.spikes[0];
  }
  return trace;
}

}  // namespace spikegrad
