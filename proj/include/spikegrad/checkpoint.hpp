// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Versioned JSON weight container: topology descriptor, row-major matrices,
// decay parameters, raw heterogeneous parameters when present, and the seed
// lineage. Doubles round-trip bit-exactly through the JSON encoding.

#pragma once

#include "spikegrad/network.hpp"
#include "spikegrad/training.hpp"

#include <cstdint>
#include <filesystem>

namespace spikegrad {

struct SeedLineage {
  std::uint64_t init_seed = 0;
  std::uint64_t data_seed = 0;  // synthetic generator seed, 0 when file-backed
  int epochs_trained = 0;
};

struct Checkpoint {
  Topology topology;
  NetworkModel<double> model;
  WeightSet<double> weights;
  HeterogeneousParams<double> hetero;  // empty vectors unless heterogeneous
  SeedLineage seeds;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace spikegrad
