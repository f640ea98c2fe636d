// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. Everything here
// is written as plain per-scalar loops over std::vector so it shares no code
// path with the Eigen-based engine it checks.

#pragma once

#include "spikegrad/events.hpp"
#include "spikegrad/network.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;  // [time][unit]

inline double heaviside_ge(double x) { return x >= 0.0 ? 1.0 : 0.0; }

inline double fast_sigmoid_ref(double x, double steepness) {
  return x / (1.0 + steepness * (x < 0 ? -x : x));
}

// ---------------------------------------------------------------------------
// Single-layer scalar simulation
// ---------------------------------------------------------------------------

struct LayerSim {
  Grid current, membrane, spikes;  // [T][n]
};

/// ff[t][j] drives step t; w[i][j] feedforward, v[i][j] recurrent (empty for
/// none). alpha/beta per neuron.
inline LayerSim scalar_layer_sim(const Grid& ff, const Grid& w, const Grid& v,
                                 const std::vector<double>& alpha,
                                 const std::vector<double>& beta, double theta) {
  const std::size_t steps = ff.size();
  const std::size_t n = w.size();
  LayerSim sim;
  sim.current.assign(steps, std::vector<double>(n, 0.0));
  sim.membrane.assign(steps, std::vector<double>(n, 0.0));
  sim.spikes.assign(steps, std::vector<double>(n, 0.0));

  std::vector<double> I(n, 0.0), U(n, 0.0), S(n, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> I_new(n), U_new(n), S_new(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = alpha[i] * I[i];
      for (std::size_t j = 0; j < ff[t].size(); ++j) acc += w[i][j] * ff[t][j];
      if (!v.empty())
        for (std::size_t j = 0; j < n; ++j) acc += v[i][j] * S[j];
      I_new[i] = acc;
      U_new[i] = (beta[i] * U[i] + I_new[i]) * (1.0 - S[i]);
      S_new[i] = heaviside_ge(U_new[i] - theta);
    }
    I = I_new;
    U = U_new;
    S = S_new;
    sim.current[t] = I;
    sim.membrane[t] = U;
    sim.spikes[t] = S;
  }
  return sim;
}

// ---------------------------------------------------------------------------
// Whole-network scalar simulation (hidden + non-spiking readout)
// ---------------------------------------------------------------------------

struct NetSim {
  Grid hidden_spikes;     // [T][n_hidden]
  Grid readout_membrane;  // [T][n_out]
};

inline NetSim scalar_net_sim(const Grid& inputs, const Grid& w1, const Grid& v,
                             const Grid& w2, const std::vector<double>& alpha1,
                             const std::vector<double>& beta1,
                             const std::vector<double>& alpha2,
                             const std::vector<double>& beta2, double theta,
                             bool relaxed, double steepness) {
  const std::size_t steps = inputs.size();
  const std::size_t nh = w1.size();
  const std::size_t no = w2.size();
  NetSim sim;
  sim.hidden_spikes.assign(steps, std::vector<double>(nh, 0.0));
  sim.readout_membrane.assign(steps, std::vector<double>(no, 0.0));

  std::vector<double> I1(nh, 0.0), U1(nh, 0.0), S1(nh, 0.0);
  std::vector<double> U1_prev(nh, 0.0);
  std::vector<double> I2(no, 0.0), U2(no, 0.0);
  bool first = true;

  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> I1n(nh), U1n(nh), S1n(nh);
    for (std::size_t i = 0; i < nh; ++i) {
      double acc = alpha1[i] * I1[i];
      for (std::size_t j = 0; j < inputs[t].size(); ++j) acc += w1[i][j] * inputs[t][j];
      if (!v.empty())
        for (std::size_t j = 0; j < nh; ++j) acc += v[i][j] * S1[j];
      I1n[i] = acc;
      const double reset = first ? 1.0 : 1.0 - heaviside_ge(U1_prev[i] - theta);
      U1n[i] = (beta1[i] * U1[i] + I1n[i]) * reset;
      S1n[i] = relaxed ? fast_sigmoid_ref(U1n[i] - theta, steepness)
                       : heaviside_ge(U1n[i] - theta);
    }
    U1_prev = U1n;
    I1 = I1n;
    U1 = U1n;
    S1 = S1n;
    first = false;

    for (std::size_t i = 0; i < no; ++i) {
      double acc = alpha2[i] * I2[i];
      for (std::size_t j = 0; j < nh; ++j) acc += w2[i][j] * S1[j];
      I2[i] = acc;
      U2[i] = beta2[i] * U2[i] + I2[i];
    }
    sim.hidden_spikes[t] = S1;
    sim.readout_membrane[t] = U2;
  }
  return sim;
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

inline Grid to_grid(const spikegrad::MatrixX<double>& m) {
  Grid g(static_cast<std::size_t>(m.rows()),
         std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
  return g;
}

inline Grid raster_to_grid(const spikegrad::SpikeRaster& raster) {
  Grid g(static_cast<std::size_t>(raster.steps()),
         std::vector<double>(static_cast<std::size_t>(raster.channels())));
  for (Eigen::Index t = 0; t < raster.steps(); ++t)
    for (Eigen::Index c = 0; c < raster.channels(); ++c)
      g[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)] = raster.bits(t, c);
  return g;
}

inline std::vector<double> to_vec(const spikegrad::VectorX<double>& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// ---------------------------------------------------------------------------
// Event binning
// ---------------------------------------------------------------------------

/// Event-by-event counting at long-double precision; a bin holds the number
/// of events, not a clamped bit.
inline std::vector<std::vector<int>> count_bins(const spikegrad::EventStream& stream,
                                                double dt_ms, std::size_t steps) {
  std::vector<std::vector<int>> counts(
      steps, std::vector<int>(stream.channel_count(), 0));
  for (const auto& e : stream.events()) {
    const long double bin_us = static_cast<long double>(dt_ms) * 1000.0L;
    const auto t = static_cast<long long>(
        std::floor(static_cast<long double>(e.time_us) / bin_us));
    if (t < 0 || static_cast<std::size_t>(t) >= steps) continue;
    counts[static_cast<std::size_t>(t)][e.channel] += 1;
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central difference of `eval` with respect to the coordinate at `coord`.
inline double central_difference(const std::function<double()>& eval, double* coord,
                                 double h) {
  const double orig = *coord;
  *coord = orig + h;
  const double fp = eval();
  *coord = orig - h;
  const double fm = eval();
  *coord = orig;
  return (fp - fm) / (2.0 * h);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Misc recounts
// ---------------------------------------------------------------------------

/// Two-pass mean / population std.
inline void two_pass_stats(const std::vector<double>& xs, double& mean, double& std) {
  mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  std = std::sqrt(acc / static_cast<double>(xs.size()));
}

/// Spike-arrival replay: walks every (step, source) spike and adds one
/// addition per target neuron, then tacks on the per-step constants of the
/// model kind. Comparisons: one per spiking neuron per step.
struct ReplayCounts {
  double multiplications = 0;
  double additions = 0;
  double comparisons = 0;
};

inline ReplayCounts replay_layer_synops(const Grid& arrivals,  // [T][sources], 0/1
                                        std::size_t neurons,
                                        spikegrad::NeuronModelKind kind,
                                        bool spiking_layer) {
  ReplayCounts counts;
  const std::size_t steps = arrivals.size();
  for (std::size_t t = 0; t < steps; ++t) {
    for (double s : arrivals[t]) {
      if (s != 0.0) counts.additions += static_cast<double>(neurons);
    }
  }
  double mults_per = 0, extra_adds_per = 0;
  switch (kind) {
    case spikegrad::NeuronModelKind::IF:
      break;
    case spikegrad::NeuronModelKind::LIF:
      mults_per = 1;
      break;
    case spikegrad::NeuronModelKind::CubaLif:
      mults_per = 2;
      extra_adds_per = 1;
      break;
  }
  counts.multiplications = mults_per * static_cast<double>(neurons * steps);
  counts.additions += extra_adds_per * static_cast<double>(neurons * steps);
  counts.comparisons = spiking_layer ? static_cast<double>(neurons * steps) : 0.0;
  return counts;
}

}  // namespace oracle
