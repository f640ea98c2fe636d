// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Event ingestion: canonical event files, binning into binary spike rasters,
// dataset manifests and desk-scale synthetic task generators.
//
// Canonical event file layout (little-endian):
//   bytes 0..3   magic "EVS1"
//   bytes 4..7   u32 channel_count
//   bytes 8..11  u32 event_count
//   then event_count records of { u64 time_us, u32 channel }, sorted by time.

#pragma once

#include "spikegrad/common.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spikegrad {

struct Event {
  std::uint64_t time_us = 0;
  std::uint32_t channel = 0;
};

/// Timestamped spikes of one sample. Immutable after construction; the
/// constructor rejects unsorted events and out-of-range channels.
class EventStream {
 public:
  EventStream(std::uint32_t channel_count, std::vector<Event> events);

  std::uint32_t channel_count() const { return channel_count_; }
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::uint32_t channel_count_;
  std::vector<Event> events_;
};

/// Binary steps x channels spike tensor at dt_ms resolution.
struct SpikeRaster {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits;
  double dt_ms = 14.0;

  Index steps() const { return bits.rows(); }
  Index channels() const { return bits.cols(); }
  std::int64_t spike_count() const;
};

/// bit[t][c] = 1 iff at least one event falls in bin t = floor(time_us /
/// (1000*dt_ms)) on channel c. Events past `steps` bins are dropped; multiple
/// events per bin clamp to one spike.
SpikeRaster bin_events(const EventStream& stream, double dt_ms, Index steps);

/// Inverse view of a raster: one event per set bit, stamped at the bin
/// centre. Re-binning the result at the same dt reproduces the raster.
EventStream raster_to_events(const SpikeRaster& raster);

EventStream load_events_file(const std::filesystem::path& path);
void save_events_file(const std::filesystem::path& path, const EventStream& stream);

struct ManifestEntry {
  std::string path;
  int label = 0;
};

/// One dataset split: event file records plus class/channel bookkeeping.
/// On disk this is a JSON-lines file, one {"path": ..., "label": ...} object
/// per line, with paths relative to the manifest's directory.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  int class_count = 0;    // max label + 1 unless overridden
  int channel_count = 0;  // 0 until event files are opened
  std::string split;      // "train" | "test"
};

DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::string& split,
                              std::optional<int> class_count_override = {});
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Throws DataError if the two splits share any event file path.
void check_splits_disjoint(const DatasetManifest& train, const DatasetManifest& test);

/// A fully loaded split: streams in manifest order.
struct EventDataset {
  std::vector<EventStream> streams;
  std::vector<int> labels;
  int class_count = 0;
  int channel_count = 0;
  std::string split;

  std::size_t size() const { return streams.size(); }
};

/// Loads every event file named by the manifest (paths resolved against
/// `base_dir`) and validates uniform channel counts and label ranges.
EventDataset load_event_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& base_dir);

/// Writes streams as canonical files `<prefix>_NNNNN.evs` plus
/// `<prefix>_manifest.jsonl` under `dir`; returns the manifest path.
std::filesystem::path export_event_dataset(const std::filesystem::path& dir,
                                           const std::string& prefix,
                                           const EventDataset& dataset);

/// Desk-scale synthetic tasks.
///
/// rate-coded: each class drives a class-specific contiguous channel group
/// with Bernoulli-per-bin spikes at `active_rate` (background elsewhere), so
/// spike counts alone separate the classes.
///
/// temporal-order: class_count channel groups fire one burst each, classes
/// differing only in the cyclic ORDER of the bursts (class k fires group
/// (k+b) mod class_count in burst slot b, bursts separated by silent gaps).
/// Every class fires every group once at the same rate, so expected
/// per-channel spike counts are identical across classes.
struct SyntheticTaskSpec {
  enum class Task { RateCoded, TemporalOrder };

  Task task = Task::RateCoded;
  int class_count = 4;
  int channel_count = 40;
  double duration_ms = 700.0;
  double dt_ms = 14.0;

  // rate-coded parameters (per-step spike probabilities)
  double active_rate = 0.4;
  double background_rate = 0.02;

  // temporal-order parameters
  double burst_rate = 0.5;
  int burst_steps = 8;
  int gap_steps = 12;
  int jitter_steps = 0;      // per-sample uniform shift of the whole burst pattern
  int distractor_bursts = 0; // lone class-independent bursts trailing the pattern

  int train_per_class = 150;
  int test_per_class = 50;
  std::uint64_t seed = 1;

  Index steps() const { return static_cast<Index>(duration_ms / dt_ms + 1e-9); }
  void validate() const;
};

/// Deterministic given (spec.seed, split): per-sample streams use derived
/// sub-seeds, so samples do not depend on generation order and the train and
/// test splits are disjoint by construction.
EventDataset generate_synthetic_dataset(const SyntheticTaskSpec& spec,
                                        const std::string& split);

/// Prebinned split ready for the network.
struct RasterDataset {
  std::vector<SpikeRaster> rasters;
  std::vector<int> labels;
  int class_count = 0;
  int channel_count = 0;

  std::size_t size() const { return rasters.size(); }
};

RasterDataset bin_dataset(const EventDataset& dataset, double dt_ms, Index steps);

}  // namespace spikegrad
