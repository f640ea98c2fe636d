// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/network.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "spikegrad/checkpoint.hpp"
#include "oracle.hpp"

using namespace spikegrad;

namespace {

SpikeRaster random_raster(Index steps, Index channels, unsigned seed,
                          double density = 0.3) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution bit(density);
  SpikeRaster raster;
  raster.dt_ms = 14.0;
  raster.bits.setZero(steps, channels);
  for (Index t = 0; t < steps; ++t)
    for (Index c = 0; c < channels; ++c) raster.bits(t, c) = bit(rng) ? 1 : 0;
  return raster;
}

}  // namespace

TEST_CASE("init_weights is deterministic and shares sub-seeds across topologies") {
  Topology fsnn{.inputs = 12, .hidden = 8, .outputs = 3, .recurrent = false,
                .kind = NeuronModelKind::LIF};
  Topology rsnn = fsnn;
  rsnn.recurrent = true;

  const auto a = init_weights(fsnn, 99);
  const auto b = init_weights(fsnn, 99);
  CHECK(a.input_hidden == b.input_hidden);
  CHECK(a.hidden_readout == b.hidden_readout);
  CHECK_FALSE(a.has_recurrent());

  const auto c = init_weights(rsnn, 99);
  CHECK(c.has_recurrent());
  CHECK(c.input_hidden == a.input_hidden);
  CHECK(c.hidden_readout == a.hidden_readout);

  const auto d = init_weights(fsnn, 100);
  CHECK(d.input_hidden != a.input_hidden);
}

TEST_CASE("init_weights draws at stddev 1/sqrt(fan_in)") {
  Topology topo{.inputs = 700, .hidden = 200, .outputs = 20, .recurrent = false,
                .kind = NeuronModelKind::LIF};
  const auto w = init_weights(topo, 7);
  const double expected = 1.0 / std::sqrt(700.0);
  std::vector<double> entries(w.input_hidden.data(),
                              w.input_hidden.data() + w.input_hidden.size());
  double mean = 0, std = 0;
  oracle::two_pass_stats(entries, mean, std);
  CHECK(std::abs(std - expected) / expected < 0.05);
  CHECK(std::abs(mean) < 0.001);
}

TEST_CASE("forward on an all-zero raster stays silent") {
  Topology topo{.inputs = 6, .hidden = 5, .outputs = 2, .recurrent = true,
                .kind = NeuronModelKind::CubaLif};
  const auto weights = init_weights(topo, 1);
  const auto model = NetworkModel<double>::from_time_constants(topo, 14.0, 140.0, 14.0);
  SpikeRaster raster;
  raster.bits.setZero(10, 6);
  const auto record = forward(raster, weights, model);
  CHECK(record.hidden_spikes.cwiseAbs().maxCoeff() == 0.0);
  CHECK(record.readout_membrane.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a zeroed recurrent matrix reproduces the feedforward network") {
  Topology fsnn{.inputs = 9, .hidden = 7, .outputs = 4, .recurrent = false,
                .kind = NeuronModelKind::LIF};
  Topology rsnn = fsnn;
  rsnn.recurrent = true;

  auto w_r = init_weights(rsnn, 5);
  w_r.recurrent.setZero();
  WeightSet<double> w_f;
  w_f.input_hidden = w_r.input_hidden;
  w_f.hidden_readout = w_r.hidden_readout;

  const auto model = NetworkModel<double>::from_time_constants(fsnn, 0.0, 140.0, 14.0);
  const auto raster = random_raster(15, 9, 2);
  const auto rec_f = forward(raster, w_f, model);
  const auto rec_r = forward(raster, w_r, model);
  CHECK(rec_f.hidden_spikes == rec_r.hidden_spikes);
  CHECK(rec_f.readout_membrane == rec_r.readout_membrane);
}

TEST_CASE("forward matches the scalar-loop reference") {
  Topology topo{.inputs = 10, .hidden = 4, .outputs = 3, .recurrent = true,
                .kind = NeuronModelKind::CubaLif};

  for (int rep = 0; rep < 6; ++rep) {
    auto weights = init_weights(topo, 100 + rep);
    weights.input_hidden *= 3.0;  // drive some spikes
    const auto model =
        NetworkModel<double>::from_time_constants(topo, 20.0, 120.0, 14.0);
    const auto raster = random_raster(6, 10, 300 + rep);

    ForwardOptions opts;
    opts.record_traces = true;
    const auto record = forward(raster, weights, model, opts);

    const auto ref = oracle::scalar_net_sim(
        oracle::raster_to_grid(raster), oracle::to_grid(weights.input_hidden),
        oracle::to_grid(weights.recurrent), oracle::to_grid(weights.hidden_readout),
        oracle::to_vec(model.hidden.alpha), oracle::to_vec(model.hidden.beta),
        oracle::to_vec(model.readout.alpha), oracle::to_vec(model.readout.beta),
        model.theta, false, 100.0);

    for (Index t = 0; t < raster.steps(); ++t) {
      for (Index i = 0; i < topo.hidden; ++i)
        CHECK(record.hidden_spikes(t, i) ==
              doctest::Approx(ref.hidden_spikes[t][i]).epsilon(1e-12));
      for (Index i = 0; i < topo.outputs; ++i)
        CHECK(record.readout_membrane(t, i) ==
              doctest::Approx(ref.readout_membrane[t][i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("relaxed mode emits the fast sigmoid of the membrane") {
  Topology topo{.inputs = 5, .hidden = 4, .outputs = 2, .recurrent = false,
                .kind = NeuronModelKind::LIF};
  const auto weights = init_weights(topo, 3);
  const auto model = NetworkModel<double>::from_time_constants(topo, 0.0, 140.0, 14.0);
  const auto raster = random_raster(8, 5, 4);
  ForwardOptions opts;
  opts.relaxed = true;
  opts.record_traces = true;
  opts.steepness = 100.0;
  const auto record = forward(raster, weights, model, opts);
  for (Index t = 0; t < 8; ++t)
    for (Index i = 0; i < 4; ++i) {
      const double expected =
          fast_sigmoid(record.hidden_membrane(t, i) - model.theta, 100.0);
      CHECK(record.hidden_spikes(t, i) == doctest::Approx(expected).epsilon(1e-15));
      CHECK(std::abs(record.hidden_spikes(t, i)) < 0.01);  // bounded by 1/steepness
    }
}

TEST_CASE("predict follows the per-neuron maxima") {
  SUBCASE("documented example") {
    ForwardRecord<double> record;
    record.readout_membrane.resize(2, 2);
    // neuron 0 trace [0, 1]; neuron 1 trace [2, 0]
    record.readout_membrane << 0, 2, 1, 0;
    CHECK(predict(record) == 1);
  }
  SUBCASE("all-zero trace falls back to class 0") {
    ForwardRecord<double> record;
    record.readout_membrane = MatrixX<double>::Zero(4, 3);
    CHECK(predict(record) == 0);
  }
  SUBCASE("random traces match an exhaustive scan") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int rep = 0; rep < 50; ++rep) {
      ForwardRecord<double> record;
      record.readout_membrane.resize(7, 5);
      for (Index i = 0; i < record.readout_membrane.size(); ++i)
        record.readout_membrane(i) = u(rng);
      int best = 0;
      double best_val = -1e300;
      for (Index i = 0; i < 5; ++i)
        for (Index t = 0; t < 7; ++t)
          if (record.readout_membrane(t, i) > best_val) {
            best_val = record.readout_membrane(t, i);
            best = static_cast<int>(i);
          }
      CHECK(predict(record) == best);
    }
  }
}

TEST_CASE("readout with beta = 1 and non-negative drive never decreases") {
  Topology topo{.inputs = 4, .hidden = 6, .outputs = 2, .recurrent = false,
                .kind = NeuronModelKind::IF};
  auto weights = init_weights(topo, 11);
  weights.input_hidden = weights.input_hidden.cwiseAbs() * 4.0;
  weights.hidden_readout = weights.hidden_readout.cwiseAbs();
  const auto model = NetworkModel<double>::from_time_constants(topo, 0.0, 0.0, 14.0);
  const auto raster = random_raster(12, 4, 6, 0.5);
  const auto record = forward(raster, weights, model);
  CHECK(record.hidden_spikes.sum() > 0);  // the drive actually spikes
  for (Index t = 1; t < 12; ++t)
    for (Index i = 0; i < 2; ++i)
      CHECK(record.readout_membrane(t, i) >= record.readout_membrane(t - 1, i));
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  Topology topo{.inputs = 6, .hidden = 5, .outputs = 3, .recurrent = true,
                .kind = NeuronModelKind::CubaLif};
  Checkpoint ckpt;
  ckpt.topology = topo;
  ckpt.weights = init_weights(topo, 17);
  ckpt.model = NetworkModel<double>::from_time_constants(topo, 28.0, 420.0, 14.0);
  ckpt.hetero = HeterogeneousParams<double>::from_model(ckpt.model);
  ckpt.seeds = {17, 4, 9};

  const auto dir = std::filesystem::temp_directory_path() / "spikegrad_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "model.json";
  save_checkpoint(path, ckpt);
  const auto loaded = load_checkpoint(path);

  CHECK(loaded.topology.inputs == topo.inputs);
  CHECK(loaded.topology.recurrent);
  CHECK(loaded.topology.kind == NeuronModelKind::CubaLif);
  CHECK(loaded.weights.input_hidden == ckpt.weights.input_hidden);
  CHECK(loaded.weights.recurrent == ckpt.weights.recurrent);
  CHECK(loaded.weights.hidden_readout == ckpt.weights.hidden_readout);
  CHECK(loaded.model.hidden.alpha == ckpt.model.hidden.alpha);
  CHECK(loaded.model.hidden.beta == ckpt.model.hidden.beta);
  CHECK(loaded.model.readout.beta == ckpt.model.readout.beta);
  CHECK(loaded.hetero.hidden_a == ckpt.hetero.hidden_a);
  CHECK(loaded.hetero.readout_b == ckpt.hetero.readout_b);
  CHECK(loaded.seeds.init_seed == 17);
  CHECK(loaded.seeds.data_seed == 4);
  CHECK(loaded.seeds.epochs_trained == 9);

  // save -> load -> save produces identical bytes
  const auto path2 = dir / "model2.json";
  save_checkpoint(path2, loaded);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)), {});
  const std::string b2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(b1 == b2);
}

TEST_CASE("forward validates dimensions") {
  Topology topo{.inputs = 4, .hidden = 3, .outputs = 2, .recurrent = false,
                .kind = NeuronModelKind::LIF};
  const auto weights = init_weights(topo, 1);
  const auto model = NetworkModel<double>::from_time_constants(topo, 0.0, 140.0, 14.0);
  const auto raster = random_raster(5, 7, 1);  // 7 channels vs 4 inputs
  CHECK_THROWS_AS(forward(raster, weights, model), std::invalid_argument);
}
