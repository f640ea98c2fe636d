// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/events.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace spikegrad {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'S', '1'};
constexpr std::size_t kHeaderBytes = 12;
constexpr std::size_t kRecordBytes = 12;

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t read_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t read_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

[[noreturn]] void format_error(const std::filesystem::path& path,
                               std::size_t byte_offset, const std::string& what) {
  throw DataError(path.string() + ": " + what + " at byte " +
                  std::to_string(byte_offset));
}

}  // namespace

EventStream::EventStream(std::uint32_t channel_count, std::vector<Event> events)
    : channel_count_(channel_count), events_(std::move(events)) {
  if (channel_count_ == 0) throw DataError("EventStream: channel_count must be positive");
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].channel >= channel_count_)
      throw DataError("EventStream: event " + std::to_string(i) + " channel " +
                      std::to_string(events_[i].channel) + " out of range [0, " +
                      std::to_string(channel_count_) + ")");
    if (events_[i].time_us < prev)
      throw DataError("EventStream: event " + std::to_string(i) +
                      " breaks non-decreasing time order");
    prev = events_[i].time_us;
  }
}

std::int64_t SpikeRaster::spike_count() const {
  return bits.cast<std::int64_t>().sum();
}

SpikeRaster bin_events(const EventStream& stream, double dt_ms, Index steps) {
  if (!(dt_ms > 0)) throw std::domain_error("bin_events: dt_ms must be positive");
  if (steps < 1) throw std::domain_error("bin_events: steps must be >= 1");
  SpikeRaster raster;
  raster.dt_ms = dt_ms;
  raster.bits.setZero(steps, static_cast<Index>(stream.channel_count()));
  const double bin_us = dt_ms * 1000.0;
  for (const Event& e : stream.events()) {
    const auto t = static_cast<std::int64_t>(
        std::floor(static_cast<double>(e.time_us) / bin_us));
    if (t >= steps) continue;  // truncate past the simulation window
    raster.bits(static_cast<Index>(t), static_cast<Index>(e.channel)) = 1;
  }
  return raster;
}

EventStream raster_to_events(const SpikeRaster& raster) {
  std::vector<Event> events;
  for (Index t = 0; t < raster.steps(); ++t) {
    // bin-centre timestamps; bin-start ones can land in the previous bin
    // after rounding when dt_ms has no exact binary representation
    const auto time_us = static_cast<std::uint64_t>(
        std::llround((static_cast<double>(t) + 0.5) * raster.dt_ms * 1000.0));
    for (Index c = 0; c < raster.channels(); ++c) {
      if (raster.bits(t, c) != 0)
        events.push_back({time_us, static_cast<std::uint32_t>(c)});
    }
  }
  return EventStream(static_cast<std::uint32_t>(raster.channels()), std::move(events));
}

EventStream load_events_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open event file: " + path.string());
  std::string raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());

  if (raw.size() < kHeaderBytes) {
    if (raw.size() < 4 || std::memcmp(raw.data(), kMagic, 4) != 0)
      format_error(path, 0, "bad magic (expected \"EVS1\")");
    format_error(path, raw.size(), "truncated header");
  }
  if (std::memcmp(raw.data(), kMagic, 4) != 0)
    format_error(path, 0, "bad magic (expected \"EVS1\")");

  const std::uint32_t channel_count = read_u32(bytes + 4);
  const std::uint32_t event_count = read_u32(bytes + 8);
  if (channel_count == 0) format_error(path, 4, "channel_count must be positive");

  const std::size_t expected = kHeaderBytes + std::size_t(event_count) * kRecordBytes;
  if (raw.size() < expected)
    format_error(path, raw.size(), "truncated record (file ends early)");

  std::vector<Event> events;
  events.reserve(event_count);
  std::uint64_t prev = 0;
  for (std::uint32_t i = 0; i < event_count; ++i) {
    const std::size_t off = kHeaderBytes + std::size_t(i) * kRecordBytes;
    Event e;
    e.time_us = read_u64(bytes + off);
    e.channel = read_u32(bytes + off + 8);
    if (e.channel >= channel_count)
      format_error(path, off + 8, "channel " + std::to_string(e.channel) +
                                      " out of range [0, " +
                                      std::to_string(channel_count) + ")");
    if (e.time_us < prev) format_error(path, off, "unsorted events");
    prev = e.time_us;
    events.push_back(e);
  }
  return EventStream(channel_count, std::move(events));
}

void save_events_file(const std::filesystem::path& path, const EventStream& stream) {
  std::string out;
  out.reserve(kHeaderBytes + stream.size() * kRecordBytes);
  out.append(kMagic, 4);
  append_u32(out, stream.channel_count());
  append_u32(out, static_cast<std::uint32_t>(stream.size()));
  for (const Event& e : stream.events()) {
    append_u64(out, e.time_us);
    append_u32(out, e.channel);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write event file: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("short write to event file: " + path.string());
}

DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::string& split,
                              std::optional<int> class_count_override) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path.string());
  DatasetManifest manifest;
  manifest.split = split;
  std::string line;
  int line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": invalid JSON line: " + e.what());
    }
    if (!j.contains("path") || !j.contains("label"))
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": manifest line needs \"path\" and \"label\"");
    ManifestEntry entry;
    entry.path = j["path"].get<std::string>();
    entry.label = j["label"].get<int>();
    if (entry.label < 0)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": negative label");
    max_label = std::max(max_label, entry.label);
    manifest.entries.push_back(std::move(entry));
  }
  manifest.class_count = class_count_override.value_or(max_label + 1);
  for (const auto& e : manifest.entries) {
    if (e.label >= manifest.class_count)
      throw DataError(path.string() + ": label " + std::to_string(e.label) +
                      " >= class_count " + std::to_string(manifest.class_count));
  }
  return manifest;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest: " + path.string());
  for (const auto& entry : manifest.entries) {
    nlohmann::json j;
    j["path"] = entry.path;
    j["label"] = entry.label;
    out << j.dump() << "\n";
  }
}

void check_splits_disjoint(const DatasetManifest& train, const DatasetManifest& test) {
  std::set<std::string> train_paths;
  for (const auto& e : train.entries) train_paths.insert(e.path);
  for (const auto& e : test.entries) {
    if (train_paths.count(e.path))
      throw DataError("train/test splits overlap on " + e.path);
  }
}

EventDataset load_event_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& base_dir) {
  EventDataset ds;
  ds.class_count = manifest.class_count;
  ds.split = manifest.split;
  ds.labels.reserve(manifest.entries.size());
  ds.streams.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    std::filesystem::path p(entry.path);
    if (p.is_relative()) p = base_dir / p;
    EventStream stream = load_events_file(p);
    if (ds.channel_count == 0) {
      ds.channel_count = static_cast<int>(stream.channel_count());
    } else if (ds.channel_count != static_cast<int>(stream.channel_count())) {
      throw DataError(p.string() + ": channel_count " +
                      std::to_string(stream.channel_count()) +
                      " differs from dataset's " + std::to_string(ds.channel_count));
    }
    ds.streams.push_back(std::move(stream));
    ds.labels.push_back(entry.label);
  }
  return ds;
}

std::filesystem::path export_event_dataset(const std::filesystem::path& dir,
                                           const std::string& prefix,
                                           const EventDataset& dataset) {
  std::filesystem::create_directories(dir);
  DatasetManifest manifest;
  manifest.class_count = dataset.class_count;
  manifest.channel_count = dataset.channel_count;
  manifest.split = dataset.split;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%05zu.evs", prefix.c_str(), i);
    save_events_file(dir / name, dataset.streams[i]);
    manifest.entries.push_back({name, dataset.labels[i]});
  }
  const auto manifest_path = dir / (prefix + "_manifest.jsonl");
  save_manifest(manifest_path, manifest);
  return manifest_path;
}

void SyntheticTaskSpec::validate() const {
  if (class_count < 2) throw ConfigError("synthetic: class_count must be >= 2");
  if (channel_count < class_count)
    throw ConfigError("synthetic: channel_count must be >= class_count");
  if (!(dt_ms > 0)) throw ConfigError("synthetic: dt_ms must be positive");
  if (steps() < 1) throw ConfigError("synthetic: duration shorter than one step");
  if (train_per_class < 1 || test_per_class < 1)
    throw ConfigError("synthetic: samples per class must be >= 1");
  auto check_rate = [](double r, const char* name) {
    if (!(r >= 0.0) || !(r <= 1.0))
      throw ConfigError(std::string("synthetic: ") + name + " must lie in [0,1]");
  };
  check_rate(active_rate, "active_rate");
  check_rate(background_rate, "background_rate");
  check_rate(burst_rate, "burst_rate");
  if (task == Task::TemporalOrder) {
    if (burst_steps < 1 || gap_steps < 0 || jitter_steps < 0 || distractor_bursts < 0)
      throw ConfigError("synthetic: bad burst/gap geometry");
    const Index pattern_width = static_cast<Index>(class_count) * burst_steps +
                                static_cast<Index>(class_count - 1) * gap_steps;
    const Index slot_pitch = pattern_width + 2 * (burst_steps + gap_steps);
    const Index needed = static_cast<Index>(jitter_steps) +
                         static_cast<Index>(distractor_bursts) * slot_pitch +
                         pattern_width;
    if (needed > steps())
      throw ConfigError("synthetic: bursts, gaps and jitter exceed the sample "
                        "duration (" +
                        std::to_string(needed) + " > " + std::to_string(steps()) +
                        " steps)");
  }
}

namespace {

// Channel group g of G contiguous groups; remainder channels go to the last.
std::pair<int, int> channel_group(int channels, int groups, int g) {
  const int width = channels / groups;
  const int lo = g * width;
  const int hi = (g == groups - 1) ? channels : lo + width;
  return {lo, hi};
}

EventStream synthesize_sample(const SyntheticTaskSpec& spec, int label,
                              std::uint64_t sample_seed) {
  std::mt19937_64 rng(sample_seed);
  const Index steps = spec.steps();
  std::vector<Event> events;
  auto emit = [&](Index t, int c) {
    // Bin-centred timestamps so re-binning at the same dt is exact.
    const auto us = static_cast<std::uint64_t>(
        std::llround((static_cast<double>(t) + 0.5) * spec.dt_ms * 1000.0));
    events.push_back({us, static_cast<std::uint32_t>(c)});
  };

  if (spec.task == SyntheticTaskSpec::Task::RateCoded) {
    const auto [lo, hi] = channel_group(spec.channel_count, spec.class_count, label);
    for (Index t = 0; t < steps; ++t) {
      for (int c = 0; c < spec.channel_count; ++c) {
        const double rate = (c >= lo && c < hi) ? spec.active_rate : spec.background_rate;
        if (uniform_unit(rng) < rate) emit(t, c);
      }
    }
  } else {
    // Burst slot b fires channel group (label + b) mod G; every channel also
    // carries class-independent background spikes, so expected per-channel
    // counts stay identical across classes. A per-sample jitter shifts the
    // whole pattern, keeping absolute burst times uninformative.
    // Slot grid: the tightly packed burst pattern (the only bursts ever
    // within gap_steps of each other) occupies one randomly chosen slot;
    // every other slot holds a lone burst on a uniformly drawn group. The
    // whole grid shifts by a per-sample jitter. Apart from the order of the
    // bursts inside the pattern slot, nothing depends on the label.
    const int groups = spec.class_count;
    const Index pattern_width = static_cast<Index>(groups) * spec.burst_steps +
                                static_cast<Index>(groups - 1) * spec.gap_steps;
    const Index slot_pitch =
        pattern_width + 2 * (spec.burst_steps + spec.gap_steps);
    const Index offset =
        spec.jitter_steps > 0
            ? static_cast<Index>(uniform_below(
                  rng, static_cast<std::uint64_t>(spec.jitter_steps) + 1))
            : 0;
    const int n_slots = spec.distractor_bursts + 1;
    const int pattern_slot = spec.distractor_bursts > 0
                                 ? static_cast<int>(uniform_below(
                                       rng, static_cast<std::uint64_t>(n_slots)))
                                 : 0;

    std::vector<std::pair<int, int>> active(steps, {0, 0});  // [lo, hi) per step
    auto paint = [&](Index start, std::pair<int, int> group) {
      for (Index t = start; t < std::min<Index>(start + spec.burst_steps, steps); ++t)
        active[static_cast<std::size_t>(t)] = group;
    };
    for (int s = 0; s < n_slots; ++s) {
      const Index slot_start = offset + static_cast<Index>(s) * slot_pitch;
      if (s == pattern_slot) {
        for (int b = 0; b < groups; ++b) {
          paint(slot_start + static_cast<Index>(b) * (spec.burst_steps + spec.gap_steps),
                channel_group(spec.channel_count, groups, (label + b) % groups));
        }
      } else {
        const int g = static_cast<int>(
            uniform_below(rng, static_cast<std::uint64_t>(groups)));
        paint(slot_start, channel_group(spec.channel_count, groups, g));
      }
    }
    for (Index t = 0; t < steps; ++t) {
      const auto [lo, hi] = active[static_cast<std::size_t>(t)];
      for (int c = 0; c < spec.channel_count; ++c) {
        const double rate =
            (c >= lo && c < hi) ? spec.burst_rate : spec.background_rate;
        if (uniform_unit(rng) < rate) emit(t, c);
      }
    }
  }
  return EventStream(static_cast<std::uint32_t>(spec.channel_count), std::move(events));
}

}  // namespace

EventDataset generate_synthetic_dataset(const SyntheticTaskSpec& spec,
                                        const std::string& split) {
  spec.validate();
  if (split != "train" && split != "test")
    throw ConfigError("synthetic: split must be \"train\" or \"test\"");
  const bool is_test = split == "test";
  const int per_class = is_test ? spec.test_per_class : spec.train_per_class;

  EventDataset ds;
  ds.class_count = spec.class_count;
  ds.channel_count = spec.channel_count;
  ds.split = split;
  for (int label = 0; label < spec.class_count; ++label) {
    for (int i = 0; i < per_class; ++i) {
      // Distinct (split, class, index) sub-seed keeps splits disjoint.
      const std::uint64_t tag = (std::uint64_t(is_test ? 1 : 0) << 62) |
                                (std::uint64_t(label) << 32) |
                                std::uint64_t(i);
      ds.streams.push_back(synthesize_sample(spec, label, derive_seed(spec.seed, tag)));
      ds.labels.push_back(label);
    }
  }
  return ds;
}

RasterDataset bin_dataset(const EventDataset& dataset, double dt_ms, Index steps) {
  RasterDataset out;
  out.class_count = dataset.class_count;
  out.channel_count = dataset.channel_count;
  out.labels = dataset.labels;
  out.rasters.reserve(dataset.size());
  for (const auto& stream : dataset.streams)
    out.rasters.push_back(bin_events(stream, dt_ms, steps));
  return out;
}

}  // namespace spikegrad
