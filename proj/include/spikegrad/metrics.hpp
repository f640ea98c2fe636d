// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Accuracy, hidden-layer sparsity, event-driven synaptic-operation cost
// accounting and weight-distribution statistics.
//
// Per spiking neuron and time step, with N inputs of which fraction P carry
// a spike:            IF      LIF     CUBA-LIF
//   multiplications    0       1       2
//   additions          N*P     N*P     N*P + 1
//   comparisons        1       1       1
// The non-spiking readout drops the threshold comparison.

#pragma once

#include "spikegrad/common.hpp"
#include "spikegrad/network.hpp"
#include "spikegrad/neuron.hpp"

#include <cstdint>
#include <vector>

namespace spikegrad {

struct AccuracyReport {
  double accuracy = 0;
  // confusion(i, j): samples of true class i predicted as j; row i sums to
  // the support of class i.
  MatrixX<std::int64_t> confusion;
};

inline AccuracyReport accuracy(const std::vector<int>& predictions,
                               const std::vector<int>& labels, int class_count) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("accuracy: predictions/labels size mismatch");
  AccuracyReport report;
  report.confusion = MatrixX<std::int64_t>::Zero(class_count, class_count);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count || predictions[i] < 0 ||
        predictions[i] >= class_count)
      throw std::invalid_argument("accuracy: class id out of range");
    report.confusion(labels[i], predictions[i]) += 1;
    if (predictions[i] == labels[i]) ++correct;
  }
  report.accuracy =
      labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(labels.size());
  return report;
}

struct SynOpCounts {
  double multiplications = 0;
  double additions = 0;
  double comparisons = 0;

  SynOpCounts& operator+=(const SynOpCounts& o) {
    multiplications += o.multiplications;
    additions += o.additions;
    comparisons += o.comparisons;
    return *this;
  }
  SynOpCounts scaled(double f) const {
    return {multiplications * f, additions * f, comparisons * f};
  }
};

/// Cost of one spiking neuron for one step given input fan-in N and spiking
/// input fraction P.
inline SynOpCounts synops_per_neuron_step(NeuronModelKind kind, double inputs,
                                          double spike_fraction) {
  if (!(spike_fraction >= 0.0) || !(spike_fraction <= 1.0))
    throw std::domain_error("synops: spike fraction must lie in [0,1]");
  if (inputs < 0) throw std::domain_error("synops: negative input count");
  const double arriving = inputs * spike_fraction;
  switch (kind) {
    case NeuronModelKind::IF:
      return {0, arriving, 1};
    case NeuronModelKind::LIF:
      return {1, arriving, 1};
    case NeuronModelKind::CubaLif:
      return {2, arriving + 1, 1};
  }
  return {};
}

struct SynOpReport {
  NeuronModelKind kind = NeuronModelKind::IF;
  double inputs = 0;          // fan-in N
  double spike_fraction = 0;  // P (mean over steps when measured)
  std::int64_t neurons = 0;
  std::int64_t steps = 0;
  SynOpCounts per_neuron_per_step;
  SynOpCounts per_step;  // x neurons
  SynOpCounts total;     // x neurons x steps
};

/// Closed-form projection for one layer.
inline SynOpReport count_synops(NeuronModelKind kind, double inputs,
                                double spike_fraction, std::int64_t neurons,
                                std::int64_t steps) {
  SynOpReport r;
  r.kind = kind;
  r.inputs = inputs;
  r.spike_fraction = spike_fraction;
  r.neurons = neurons;
  r.steps = steps;
  r.per_neuron_per_step = synops_per_neuron_step(kind, inputs, spike_fraction);
  r.per_step = r.per_neuron_per_step.scaled(static_cast<double>(neurons));
  r.total = r.per_step.scaled(static_cast<double>(steps));
  return r;
}

struct NetworkSynOpReport {
  SynOpReport hidden;
  SynOpReport readout;
  SynOpCounts total_per_sample;
};

/// Measured variant: P comes from the per-step spike fractions actually seen
/// in the record (raster rows feeding the hidden layer, previous hidden
/// spikes on the recurrent path, current hidden spikes feeding the readout).
/// The non-spiking readout performs no threshold comparison.
template <typename Scalar>
NetworkSynOpReport count_synops(const ForwardRecord<Scalar>& record,
                                const SpikeRaster& raster, NeuronModelKind kind,
                                bool recurrent) {
  const Index steps = record.steps();
  const Index n_hidden = record.hidden_spikes.cols();
  const Index n_out = record.readout_membrane.cols();
  if (raster.steps() != steps)
    throw std::invalid_argument("count_synops: raster/record step mismatch");

  const double hidden_fan_in =
      static_cast<double>(raster.channels()) + (recurrent ? n_hidden : 0);

  // Arriving spikes per step, counted once per (spike, target neuron).
  double hidden_arrivals = 0;
  double readout_arrivals = 0;
  for (Index t = 0; t < steps; ++t) {
    double in_spikes = 0;
    for (Index c = 0; c < raster.channels(); ++c) in_spikes += raster.bits(t, c);
    if (recurrent && t > 0)
      in_spikes += static_cast<double>(record.hidden_spikes.row(t - 1).sum());
    hidden_arrivals += in_spikes;
    readout_arrivals += static_cast<double>(record.hidden_spikes.row(t).sum());
  }

  // Totals come straight from the arrival counts so they match an
  // event-by-event replay exactly; the P and per-step views are derived.
  auto measured_layer = [steps](NeuronModelKind k, double fan_in, double arrivals,
                                Index neurons, bool spiking) {
    SynOpReport r;
    r.kind = k;
    r.inputs = fan_in;
    r.neurons = neurons;
    r.steps = steps;
    r.spike_fraction =
        fan_in > 0 ? arrivals / (fan_in * static_cast<double>(steps)) : 0.0;
    const double n = static_cast<double>(neurons);
    const double ns = n * static_cast<double>(steps);
    double mults = 0, extra_adds = 0;
    switch (k) {
      case NeuronModelKind::IF:
        break;
      case NeuronModelKind::LIF:
        mults = 1;
        break;
      case NeuronModelKind::CubaLif:
        mults = 2;
        extra_adds = 1;
        break;
    }
    r.total.multiplications = mults * ns;
    r.total.additions = arrivals * n + extra_adds * ns;
    r.total.comparisons = spiking ? ns : 0.0;
    r.per_step = r.total.scaled(1.0 / static_cast<double>(steps));
    r.per_neuron_per_step = r.per_step.scaled(neurons > 0 ? 1.0 / n : 0.0);
    return r;
  };

  NetworkSynOpReport report;
  report.hidden = measured_layer(kind, hidden_fan_in, hidden_arrivals, n_hidden, true);
  report.readout = measured_layer(kind, static_cast<double>(n_hidden),
                                  readout_arrivals, n_out, false);
  report.total_per_sample = report.hidden.total;
  report.total_per_sample += report.readout.total;
  return report;
}

struct SparsityReport {
  std::int64_t total_hidden_spikes = 0;
  std::int64_t sample_count = 0;
  double spikes_per_sample = 0;
  double spikes_per_neuron_per_step = 0;
  // attached when the report belongs to a sweep cell
  double tau_mem_ms = std::numeric_limits<double>::quiet_NaN();
  double tau_syn_ms = std::numeric_limits<double>::quiet_NaN();
};

/// Aggregates hidden spike totals over a split.
inline SparsityReport sparsity_report(const std::vector<std::int64_t>& per_sample_spikes,
                                      Index neurons, Index steps) {
  SparsityReport r;
  r.sample_count = static_cast<std::int64_t>(per_sample_spikes.size());
  for (auto s : per_sample_spikes) r.total_hidden_spikes += s;
  if (r.sample_count > 0) {
    r.spikes_per_sample =
        static_cast<double>(r.total_hidden_spikes) / static_cast<double>(r.sample_count);
    r.spikes_per_neuron_per_step =
        r.spikes_per_sample / (static_cast<double>(neurons) * static_cast<double>(steps));
  }
  return r;
}

/// Percentage change in spiking activity from a feedforward run to its
/// recurrent counterpart: (rsnn - fsnn) / fsnn * 100.
inline double sparsity_delta(const SparsityReport& fsnn, const SparsityReport& rsnn) {
  if (fsnn.total_hidden_spikes == 0)
    throw std::domain_error("sparsity_delta: feedforward baseline has no spikes");
  const double f = static_cast<double>(fsnn.total_hidden_spikes);
  const double r = static_cast<double>(rsnn.total_hidden_spikes);
  return (r - f) / f * 100.0;
}

struct MatrixStats {
  double mean = 0;
  double stddev = 0;  // population
  double bin_width = 0;
  double range_min = 0;
  std::vector<std::int64_t> histogram;  // 64 bins over [min, max]
};

inline constexpr int kHistogramBins = 64;

inline MatrixStats matrix_stats(const MatrixX<double>& m) {
  MatrixStats s;
  const auto n = static_cast<double>(m.size());
  if (m.size() == 0) return s;
  s.mean = m.sum() / n;
  s.stddev = std::sqrt((m.array() - s.mean).square().sum() / n);
  s.range_min = m.minCoeff();
  const double range_max = m.maxCoeff();
  s.bin_width = (range_max - s.range_min) / kHistogramBins;
  s.histogram.assign(kHistogramBins, 0);
  for (Index i = 0; i < m.size(); ++i) {
    int bin = 0;
    if (s.bin_width > 0) {
      bin = static_cast<int>((m(i) - s.range_min) / s.bin_width);
      bin = std::min(bin, kHistogramBins - 1);
    }
    s.histogram[static_cast<std::size_t>(bin)] += 1;
  }
  return s;
}

struct WeightStats {
  MatrixStats input_hidden;
  MatrixStats recurrent;
  MatrixStats hidden_readout;
  bool has_recurrent = false;
};

inline WeightStats weight_stats(const WeightSet<double>& weights) {
  WeightStats s;
  s.input_hidden = matrix_stats(weights.input_hidden);
  s.hidden_readout = matrix_stats(weights.hidden_readout);
  s.has_recurrent = weights.has_recurrent();
  if (s.has_recurrent) s.recurrent = matrix_stats(weights.recurrent);
  return s;
}

}  // namespace spikegrad
