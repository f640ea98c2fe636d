// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON/CSV serialization of metric reports.

#pragma once

#include "spikegrad/metrics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace spikegrad {

nlohmann::json to_json(const SynOpCounts& counts);
nlohmann::json to_json(const SynOpReport& report);
nlohmann::json to_json(const NetworkSynOpReport& report);
nlohmann::json to_json(const SparsityReport& report);
nlohmann::json to_json(const MatrixStats& stats);
nlohmann::json to_json(const WeightStats& stats);
nlohmann::json to_json(const AccuracyReport& report);

/// Histogram CSV: header "bin_left,count", one row per bin.
void write_histogram_csv(const std::filesystem::path& path, const MatrixStats& stats);

/// Confusion CSV: row i holds the prediction counts for true class i.
void write_confusion_csv(const std::filesystem::path& path, const AccuracyReport& report);

}  // namespace spikegrad
