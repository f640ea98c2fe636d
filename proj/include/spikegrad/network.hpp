// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Three-layer network: input -> hidden (optionally recurrent) -> non-spiking
// readout, unrolled over the raster's time steps.
//
// Step t of the unrolled pass:
//   hidden:  ff = raster row t, rec = hidden spikes from t-1
//   readout: ff = hidden spikes just computed at t; the readout runs the same
//            current/membrane update but never spikes and never resets.
// Predictions take, per readout neuron, the maximum membrane potential over
// all steps, then the argmax neuron.

#pragma once

#include "spikegrad/common.hpp"
#include "spikegrad/events.hpp"
#include "spikegrad/neuron.hpp"
#include "spikegrad/surrogate.hpp"

#include <cstdint>
#include <utility>

namespace spikegrad {

struct Topology {
  Index inputs = 0;
  Index hidden = 0;
  Index outputs = 0;
  bool recurrent = false;
  NeuronModelKind kind = NeuronModelKind::LIF;

  void validate() const {
    if (inputs < 1 || hidden < 1 || outputs < 1)
      throw ConfigError("Topology: layer sizes must be positive");
  }
};

/// W1 (hidden x inputs), V (hidden x hidden, present iff recurrent) and
/// W2 (outputs x hidden).
template <typename Scalar>
struct WeightSet {
  MatrixX<Scalar> input_hidden;
  MatrixX<Scalar> recurrent;  // 0x0 when absent
  MatrixX<Scalar> hidden_readout;

  bool has_recurrent() const { return recurrent.size() > 0; }

  void check_shapes(const Topology& topo) const {
    if (input_hidden.rows() != topo.hidden || input_hidden.cols() != topo.inputs ||
        hidden_readout.rows() != topo.outputs || hidden_readout.cols() != topo.hidden)
      throw std::invalid_argument("WeightSet: shapes do not match topology");
    if (topo.recurrent !=
        (recurrent.rows() == topo.hidden && recurrent.cols() == topo.hidden &&
         has_recurrent()))
      throw std::invalid_argument("WeightSet: recurrent matrix presence mismatch");
  }
};

namespace detail {

template <typename Scalar>
MatrixX<Scalar> gaussian_matrix(Index rows, Index cols, Scalar stddev,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MatrixX<Scalar> m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = stddev * static_cast<Scalar>(gaussian(rng));
  return m;
}

}  // namespace detail

/// I.i.d. Gaussian entries, mean 0, stddev 1/sqrt(fan_in). Each matrix draws
/// from its own sub-seed, so FSNN and RSNN initialized from the same seed
/// share W1 and W2.
template <typename Scalar = double>
WeightSet<Scalar> init_weights(const Topology& topo, std::uint64_t seed) {
  topo.validate();
  using std::sqrt;
  WeightSet<Scalar> w;
  w.input_hidden = detail::gaussian_matrix<Scalar>(
      topo.hidden, topo.inputs, Scalar(1) / sqrt(Scalar(topo.inputs)),
      derive_seed(seed, 0));
  if (topo.recurrent) {
    w.recurrent = detail::gaussian_matrix<Scalar>(
        topo.hidden, topo.hidden, Scalar(1) / sqrt(Scalar(topo.hidden)),
        derive_seed(seed, 1));
  }
  w.hidden_readout = detail::gaussian_matrix<Scalar>(
      topo.outputs, topo.hidden, Scalar(1) / sqrt(Scalar(topo.hidden)),
      derive_seed(seed, 2));
  return w;
}

/// Neuron kind plus per-neuron decays for both layers. The readout reuses the
/// hidden layer's kind and decay values (broadcast to its own width) with
/// threshold and reset disabled.
template <typename Scalar>
struct NetworkModel {
  NeuronModelKind kind = NeuronModelKind::LIF;
  Scalar theta = Scalar(kThreshold);
  DecayParams<Scalar> hidden;
  DecayParams<Scalar> readout;

  static NetworkModel from_time_constants(const Topology& topo, Scalar tau_syn_ms,
                                          Scalar tau_mem_ms, Scalar dt_ms) {
    NetworkModel m;
    m.kind = topo.kind;
    switch (topo.kind) {
      case NeuronModelKind::IF:
        tau_syn_ms = Scalar(0);
        tau_mem_ms = std::numeric_limits<Scalar>::infinity();
        break;
      case NeuronModelKind::LIF:
        if (tau_syn_ms != Scalar(0))
          throw ConfigError("LIF has a fixed infinite synaptic leak (tau_syn = 0)");
        break;
      case NeuronModelKind::CubaLif:
        if (!(tau_syn_ms > Scalar(0)) || std::isinf(tau_syn_ms))
          throw ConfigError("CUBA-LIF needs finite positive tau_syn");
        break;
    }
    if (topo.kind != NeuronModelKind::IF &&
        (!(tau_mem_ms > Scalar(0))))
      throw ConfigError("tau_mem must be positive");
    m.hidden = DecayParams<Scalar>::homogeneous(topo.hidden, tau_syn_ms, tau_mem_ms, dt_ms);
    m.readout = DecayParams<Scalar>::homogeneous(topo.outputs, tau_syn_ms, tau_mem_ms, dt_ms);
    return m;
  }
};

struct ForwardOptions {
  bool record_traces = false;  // keep I/U trajectories (needed by BPTT)
  bool relaxed = false;        // replace the hard threshold by the fast sigmoid
  double steepness = 100.0;    // surrogate steepness, used when relaxed
};

/// Everything the loss, metrics and BPTT consume. `hidden_spikes` is binary
/// in spiking mode and real-valued in relaxed mode. Trace matrices are empty
/// unless the forward recorded them.
template <typename Scalar>
struct ForwardRecord {
  MatrixX<Scalar> hidden_spikes;     // T x hidden
  MatrixX<Scalar> readout_membrane;  // T x outputs
  MatrixX<Scalar> hidden_current;    // T x hidden  (traces)
  MatrixX<Scalar> hidden_membrane;   // T x hidden  (traces)
  MatrixX<Scalar> readout_current;   // T x outputs (traces)
  bool relaxed = false;

  Index steps() const { return readout_membrane.rows(); }
  bool has_traces() const { return hidden_membrane.size() > 0; }
  Scalar hidden_spike_count() const { return hidden_spikes.sum(); }
};

template <typename Scalar>
ForwardRecord<Scalar> forward(const SpikeRaster& raster, const WeightSet<Scalar>& weights,
                              const NetworkModel<Scalar>& model,
                              const ForwardOptions& options = {}) {
  const Index steps = raster.steps();
  const Index n_in = raster.channels();
  const Index n_hidden = weights.input_hidden.rows();
  const Index n_out = weights.hidden_readout.rows();
  if (weights.input_hidden.cols() != n_in)
    throw std::invalid_argument("forward: raster channels do not match input width");
  if (weights.hidden_readout.cols() != n_hidden)
    throw std::invalid_argument("forward: readout weight shape mismatch");
  if (weights.has_recurrent() &&
      (weights.recurrent.rows() != n_hidden || weights.recurrent.cols() != n_hidden))
    throw std::invalid_argument("forward: recurrent weight shape mismatch");
  if (model.hidden.size() != n_hidden || model.readout.size() != n_out)
    throw std::invalid_argument("forward: decay sizes do not match layers");

  const MatrixX<Scalar> inputs = raster.bits.cast<Scalar>();
  const Scalar steep = static_cast<Scalar>(options.steepness);

  ForwardRecord<Scalar> record;
  record.relaxed = options.relaxed;
  record.hidden_spikes.resize(steps, n_hidden);
  record.readout_membrane.resize(steps, n_out);
  if (options.record_traces) {
    record.hidden_current.resize(steps, n_hidden);
    record.hidden_membrane.resize(steps, n_hidden);
    record.readout_current.resize(steps, n_out);
  }

  VectorX<Scalar> hid_current = VectorX<Scalar>::Zero(n_hidden);
  VectorX<Scalar> hid_membrane = VectorX<Scalar>::Zero(n_hidden);
  VectorX<Scalar> hid_spikes = VectorX<Scalar>::Zero(n_hidden);
  VectorX<Scalar> out_current = VectorX<Scalar>::Zero(n_out);
  VectorX<Scalar> out_membrane = VectorX<Scalar>::Zero(n_out);
  VectorX<Scalar> reset_mask = VectorX<Scalar>::Ones(n_hidden);  // 1 - Theta(U[t-1]-theta)

  for (Index t = 0; t < steps; ++t) {
    hid_current = model.hidden.alpha.cwiseProduct(hid_current);
    hid_current.noalias() += weights.input_hidden * inputs.row(t).transpose();
    if (weights.has_recurrent()) hid_current.noalias() += weights.recurrent * hid_spikes;
    hid_membrane =
        (model.hidden.beta.cwiseProduct(hid_membrane) + hid_current).cwiseProduct(reset_mask);
    if (options.relaxed) {
      // Downstream signal is the smooth surrogate; the reset stays binary so
      // it is locally constant, matching its detached treatment in backward.
      hid_spikes = (hid_membrane.array() - model.theta)
                       .unaryExpr([steep](Scalar x) { return fast_sigmoid(x, steep); })
                       .matrix();
    } else {
      hid_spikes = (hid_membrane.array() >= model.theta).template cast<Scalar>();
    }
    reset_mask = (hid_membrane.array() < model.theta).template cast<Scalar>();

    out_current = model.readout.alpha.cwiseProduct(out_current);
    out_current.noalias() += weights.hidden_readout * hid_spikes;
    out_membrane = model.readout.beta.cwiseProduct(out_membrane) + out_current;

    record.hidden_spikes.row(t) = hid_spikes.transpose();
    record.readout_membrane.row(t) = out_membrane.transpose();
    if (options.record_traces) {
      record.hidden_current.row(t) = hid_current.transpose();
      record.hidden_membrane.row(t) = hid_membrane.transpose();
      record.readout_current.row(t) = out_current.transpose();
    }
  }
  return record;
}

/// Per-neuron maxima of the readout membrane trace and the step each maximum
/// occurs at (earliest step on ties). Shared by predict and the loss.
template <typename Scalar>
std::pair<VectorX<Scalar>, std::vector<Index>> readout_maxima(
    const ForwardRecord<Scalar>& record) {
  const Index n_out = record.readout_membrane.cols();
  VectorX<Scalar> maxima(n_out);
  std::vector<Index> argmax_t(static_cast<std::size_t>(n_out));
  for (Index i = 0; i < n_out; ++i) {
    Index best = 0;
    for (Index t = 1; t < record.steps(); ++t) {
      if (record.readout_membrane(t, i) > record.readout_membrane(best, i)) best = t;
    }
    maxima[i] = record.readout_membrane(best, i);
    argmax_t[static_cast<std::size_t>(i)] = best;
  }
  return {maxima, argmax_t};
}

/// argmax_i max_t U_i[t], ties broken by the lowest class index.
template <typename Scalar>
int predict(const ForwardRecord<Scalar>& record) {
  const auto [maxima, argmax_t] = readout_maxima(record);
  Index best = 0;
  for (Index i = 1; i < maxima.size(); ++i)
    if (maxima[i] > maxima[best]) best = i;
  return static_cast<int>(best);
}

}  // namespace spikegrad
