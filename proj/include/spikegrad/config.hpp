// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: one JSON document drives every CLI verb. The
// "nmnist-like" and "shd-like" presets fill in the standard hyperparameters;
// the effective configuration (all defaults expanded) is dumped next to the
// results so any run can be reproduced from its own output directory.

#pragma once

#include "spikegrad/common.hpp"
#include "spikegrad/events.hpp"
#include "spikegrad/network.hpp"
#include "spikegrad/training.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spikegrad {

struct DatasetConfig {
  std::string kind = "synthetic";  // "synthetic" | "manifest"
  double dt_ms = 14.0;
  Index steps = 100;
  std::string train_manifest;
  std::string test_manifest;
  std::optional<int> class_count;  // overrides max-label+1 when set
  SyntheticTaskSpec synthetic;
};

struct ModelConfig {
  NeuronModelKind kind = NeuronModelKind::LIF;
  double tau_mem_ms = 140.0;
  double tau_syn_ms = 0.0;
  bool heterogeneous = false;
};

struct TraceConfig {
  std::string stimulus;  // canonical event file; channel 0 drives the neuron
  double weight = 1.0;
  Index steps = 0;  // 0: use dataset.steps
};

struct ExperimentConfig {
  std::string preset;  // "", "nmnist-like", "shd-like"
  DatasetConfig dataset;
  Index hidden = 200;
  bool recurrent = false;
  ModelConfig model;
  TrainConfig<double> training;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<double> sweep_tau_mem_ms;
  std::vector<double> sweep_tau_syn_ms;
  TraceConfig trace;
  std::string out_dir = "runs";
  int jobs = 1;
  bool debug_traces = false;
};

/// Parses and validates, applying preset values before explicit keys.
/// Unknown keys and type mismatches report their full field path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully explicit JSON image of the configuration; re-parsing it yields the
/// same configuration.
nlohmann::json expand_experiment_config(const ExperimentConfig& cfg);

}  // namespace spikegrad
