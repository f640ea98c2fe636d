// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Grid sweep over (tau_mem, tau_syn) cells. Cells are independent jobs; each
// is internally deterministic and writes into its own result slot, so the
// assembled table does not depend on scheduling.

#pragma once

#include <atomic>
#include <cmath>
#include <thread>

namespace spikegrad {

namespace detail {

inline void mean_std(const std::vector<double>& values, double& mean, double& stddev) {
  mean = 0;
  stddev = 0;
  if (values.empty()) return;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  for (double v : values) stddev += (v - mean) * (v - mean);
  stddev = std::sqrt(stddev / static_cast<double>(values.size()));
}

}  // namespace detail

template <typename Scalar>
std::vector<SweepCell> grid_sweep(const RasterDataset& train_data,
                                  const RasterDataset& test_data, const Topology& topo,
                                  Scalar dt_ms, const TrainConfig<Scalar>& base_cfg,
                                  const SweepGrid& grid) {
  if (grid.tau_mem_ms.empty() || grid.tau_syn_ms.empty())
    throw ConfigError("grid_sweep: tau lists must be non-empty");
  if (grid.seeds.empty()) throw ConfigError("grid_sweep: seed list must be non-empty");

  std::vector<SweepCell> cells;
  for (double tau_mem : grid.tau_mem_ms) {
    for (double tau_syn : grid.tau_syn_ms) {
      SweepCell cell;
      cell.tau_mem_ms = tau_mem;
      cell.tau_syn_ms = tau_syn;
      cells.push_back(cell);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      const auto model = NetworkModel<Scalar>::from_time_constants(
          topo, static_cast<Scalar>(cell.tau_syn_ms), static_cast<Scalar>(cell.tau_mem_ms),
          dt_ms);
      for (std::uint64_t seed : grid.seeds) {
        TrainConfig<Scalar> cfg = base_cfg;
        cfg.seed = seed;
        const auto result = train(train_data, test_data, topo, model, cfg);
        const auto eval = evaluate(test_data, result.weights, result.model);
        cell.accuracies.push_back(eval.accuracy);
        cell.spikes_per_sample.push_back(eval.hidden_spikes_per_sample);
      }
      detail::mean_std(cell.accuracies, cell.mean_accuracy, cell.std_accuracy);
      double spikes_std = 0;
      detail::mean_std(cell.spikes_per_sample, cell.mean_spikes_per_sample, spikes_std);
    }
  };

  const int jobs = std::max(1, std::min<int>(grid.jobs, static_cast<int>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return cells;
}

}  // namespace spikegrad
