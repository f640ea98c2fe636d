// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/events.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracle.hpp"

using namespace spikegrad;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "spikegrad_events_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("binning drops one event into the right bin") {
  EventStream stream(8, {{20000, 3}});
  const auto raster = bin_events(stream, 14.0, 4);
  CHECK(raster.steps() == 4);
  CHECK(raster.channels() == 8);
  CHECK(raster.spike_count() == 1);
  CHECK(raster.bits(1, 3) == 1);  // floor(20 / 14) == 1
}

TEST_CASE("binning an empty stream yields an all-zero raster") {
  EventStream stream(2, {});
  const auto raster = bin_events(stream, 14.0, 5);
  CHECK(raster.steps() == 5);
  CHECK(raster.channels() == 2);
  CHECK(raster.spike_count() == 0);
}

TEST_CASE("binning matches an event-by-event counting oracle") {
  std::mt19937_64 rng(21);
  std::vector<Event> events;
  for (int i = 0; i < 1000; ++i)
    events.push_back({uniform_below(rng, 800000), static_cast<std::uint32_t>(
                                                      uniform_below(rng, 10))});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.time_us < b.time_us; });
  EventStream stream(10, events);

  const auto raster = bin_events(stream, 14.0, 50);
  const auto counts = oracle::count_bins(stream, 14.0, 50);
  for (Index t = 0; t < 50; ++t)
    for (Index c = 0; c < 10; ++c)
      CHECK(raster.bits(t, c) == (counts[t][c] > 0 ? 1 : 0));
  CHECK(raster.spike_count() <= 1000);  // clamping only removes
}

TEST_CASE("multiple events in one bin clamp to a single spike") {
  EventStream stream(1, {{100, 0}, {200, 0}, {300, 0}});
  const auto raster = bin_events(stream, 14.0, 3);
  CHECK(raster.spike_count() == 1);
  CHECK(raster.bits(0, 0) == 1);
}

TEST_CASE("binning validates its arguments") {
  EventStream stream(1, {});
  CHECK_THROWS_AS(bin_events(stream, 0.0, 5), std::domain_error);
  CHECK_THROWS_AS(bin_events(stream, 14.0, 0), std::domain_error);
}

TEST_CASE("EventStream construction enforces the invariants") {
  CHECK_THROWS_AS(EventStream(4, {{10, 4}}), DataError);          // channel range
  CHECK_THROWS_AS(EventStream(4, {{10, 0}, {5, 1}}), DataError);  // unsorted
  CHECK_THROWS_AS(EventStream(0, {}), DataError);                 // no channels
}

TEST_CASE("re-binning a raster's events reproduces it") {
  std::mt19937_64 rng(5);
  // 0.1 ms has no exact binary representation; it exercises the rounding path
  for (const double dt_ms : {14.0, 0.1, 2.5}) {
    SpikeRaster raster;
    raster.dt_ms = dt_ms;
    raster.bits.setZero(16, 7);
    for (Index t = 0; t < 16; ++t)
      for (Index c = 0; c < 7; ++c) raster.bits(t, c) = uniform_below(rng, 4) == 0;

    const auto events = raster_to_events(raster);
    const auto rebinned = bin_events(events, raster.dt_ms, raster.steps());
    CHECK(rebinned.bits == raster.bits);
  }
}

TEST_CASE("event files round-trip") {
  const auto dir = temp_dir();
  EventStream stream(34, {{0, 5}, {12, 5}, {900, 33}, {70001, 0}});
  const auto path = dir / "roundtrip.evs";
  save_events_file(path, stream);
  const auto loaded = load_events_file(path);
  CHECK(loaded.channel_count() == 34);
  REQUIRE(loaded.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(loaded.events()[i].time_us == stream.events()[i].time_us);
    CHECK(loaded.events()[i].channel == stream.events()[i].channel);
  }
}

TEST_CASE("loader reports format errors with byte offsets") {
  const auto dir = temp_dir();
  EventStream stream(4, {{10, 1}, {20, 2}});
  const auto path = dir / "corrupt.evs";

  SUBCASE("bad magic") {
    save_events_file(path, stream);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("EVX1", 4);
    f.close();
    CHECK_THROWS_WITH_AS(load_events_file(path),
                         doctest::Contains("bad magic"), DataError);
    try {
      load_events_file(path);
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("at byte 0") != std::string::npos);
    }
  }

  SUBCASE("truncated record") {
    save_events_file(path, stream);
    fs::resize_file(path, 12 + 12 + 6);  // second record cut short
    try {
      load_events_file(path);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("truncated") != std::string::npos);
      CHECK(msg.find("at byte 30") != std::string::npos);
    }
  }

  SUBCASE("unsorted events name the record offset") {
    // hand-build a file whose second record (offset 24) goes back in time
    EventStream sorted(4, {{500, 1}, {600, 2}});
    save_events_file(path, sorted);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(24);
    const std::uint64_t early = 5;
    f.write(reinterpret_cast<const char*>(&early), 8);
    f.close();
    try {
      load_events_file(path);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("unsorted") != std::string::npos);
      CHECK(msg.find("at byte 24") != std::string::npos);
    }
  }

  SUBCASE("out-of-range channel") {
    save_events_file(path, stream);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(12 + 8);
    const std::uint32_t bad = 9;
    f.write(reinterpret_cast<const char*>(&bad), 4);
    f.close();
    CHECK_THROWS_WITH_AS(load_events_file(path),
                         doctest::Contains("out of range"), DataError);
  }
}

TEST_CASE("manifests load, validate and check disjointness") {
  const auto dir = temp_dir();
  const auto path = dir / "train_manifest.jsonl";
  {
    std::ofstream out(path, std::ios::trunc);
    out << R"({"path": "a.evs", "label": 0})" << "\n";
    out << "\n";  // blank lines are fine
    out << R"({"path": "b.evs", "label": 2})" << "\n";
  }
  const auto manifest = load_manifest(path, "train");
  CHECK(manifest.entries.size() == 2);
  CHECK(manifest.class_count == 3);
  CHECK(manifest.split == "train");

  SUBCASE("invalid JSON names the line") {
    const auto bad = dir / "bad_manifest.jsonl";
    std::ofstream out(bad, std::ios::trunc);
    out << R"({"path": "a.evs", "label": 0})" << "\n";
    out << "not json\n";
    out.close();
    try {
      load_manifest(bad, "train");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }

  SUBCASE("class_count override validates labels") {
    CHECK_THROWS_AS(load_manifest(path, "train", 2), DataError);
  }

  SUBCASE("overlapping splits are rejected") {
    DatasetManifest test;
    test.entries.push_back({"b.evs", 1});
    CHECK_THROWS_AS(check_splits_disjoint(manifest, test), DataError);
    DatasetManifest disjoint;
    disjoint.entries.push_back({"c.evs", 1});
    CHECK_NOTHROW(check_splits_disjoint(manifest, disjoint));
  }
}

TEST_CASE("dataset export and reload round-trips") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTaskSpec::Task::RateCoded;
  spec.class_count = 3;
  spec.channel_count = 12;
  spec.duration_ms = 14.0 * 20;
  spec.train_per_class = 4;
  spec.test_per_class = 2;
  spec.seed = 42;
  const auto ds = generate_synthetic_dataset(spec, "train");

  const auto dir = temp_dir() / "export";
  const auto manifest_path = export_event_dataset(dir, "train", ds);
  const auto manifest = load_manifest(manifest_path, "train");
  CHECK(manifest.entries.size() == ds.size());
  const auto reloaded = load_event_dataset(manifest, dir);
  CHECK(reloaded.channel_count == ds.channel_count);
  REQUIRE(reloaded.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(reloaded.labels[i] == ds.labels[i]);
    CHECK(reloaded.streams[i].size() == ds.streams[i].size());
  }
}

TEST_CASE("synthetic generation is deterministic and splits differ") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTaskSpec::Task::TemporalOrder;
  spec.class_count = 2;
  spec.channel_count = 10;
  spec.duration_ms = 14.0 * 40;
  spec.burst_steps = 6;
  spec.gap_steps = 10;
  spec.train_per_class = 3;
  spec.test_per_class = 3;
  spec.seed = 9;

  const auto a = generate_synthetic_dataset(spec, "train");
  const auto b = generate_synthetic_dataset(spec, "train");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.streams[i].size() == b.streams[i].size());
    for (std::size_t k = 0; k < a.streams[i].size(); ++k) {
      CHECK(a.streams[i].events()[k].time_us == b.streams[i].events()[k].time_us);
      CHECK(a.streams[i].events()[k].channel == b.streams[i].events()[k].channel);
    }
  }

  const auto t = generate_synthetic_dataset(spec, "test");
  bool any_difference = t.size() != a.size();
  for (std::size_t i = 0; !any_difference && i < std::min(a.size(), t.size()); ++i)
    any_difference = a.streams[i].size() != t.streams[i].size();
  CHECK(any_difference);
}

TEST_CASE("rate-coded classes separate by spike counts") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTaskSpec::Task::RateCoded;
  spec.class_count = 4;
  spec.channel_count = 40;
  spec.duration_ms = 14.0 * 50;
  spec.active_rate = 0.4;
  spec.background_rate = 0.02;
  spec.train_per_class = 10;
  spec.test_per_class = 2;
  spec.seed = 123;
  const auto ds = generate_synthetic_dataset(spec, "train");
  const auto rasters = bin_dataset(ds, spec.dt_ms, spec.steps());

  for (std::size_t s = 0; s < rasters.size(); ++s) {
    const int label = rasters.labels[s];
    // count spikes inside each class group; the labeled group must dominate
    std::vector<double> group_counts(4, 0.0);
    for (Index t = 0; t < rasters.rasters[s].steps(); ++t)
      for (Index c = 0; c < 40; ++c)
        if (rasters.rasters[s].bits(t, c)) group_counts[c / 10] += 1.0;
    for (int g = 0; g < 4; ++g)
      if (g != label) CHECK(group_counts[label] > 2.0 * group_counts[g]);
  }
}

TEST_CASE("temporal-order classes have matching per-channel expected counts") {
  SyntheticTaskSpec spec;
  spec.task = SyntheticTaskSpec::Task::TemporalOrder;
  spec.class_count = 2;
  spec.channel_count = 20;
  spec.duration_ms = 14.0 * 40;
  spec.burst_rate = 0.7;
  spec.burst_steps = 10;
  spec.gap_steps = 12;
  spec.train_per_class = 400;
  spec.test_per_class = 2;
  spec.seed = 31;

  SUBCASE("plain two-burst pattern") {}
  SUBCASE("with background, jitter and distractors") {
    spec.background_rate = 0.03;
    spec.burst_steps = 6;
    spec.gap_steps = 2;
    spec.jitter_steps = 4;
    spec.distractor_bursts = 2;
    spec.duration_ms = 14.0 * 80;
    spec.train_per_class = 800;
  }

  const auto ds = generate_synthetic_dataset(spec, "train");

  // mean per-channel counts per class
  MatrixX<double> mean = MatrixX<double>::Zero(2, 20);
  std::vector<int> support(2, 0);
  for (std::size_t s = 0; s < ds.size(); ++s) {
    support[ds.labels[s]] += 1;
    for (const auto& e : ds.streams[s].events()) mean(ds.labels[s], e.channel) += 1.0;
  }
  for (int k = 0; k < 2; ++k) mean.row(k) /= support[k];

  double total0 = 0, total1 = 0;
  for (Index c = 0; c < 20; ++c) {
    const double a = mean(0, c), b = mean(1, c);
    CHECK(std::abs(a - b) / std::max(a, b) < 0.05);
    total0 += a;
    total1 += b;
  }
  CHECK(std::abs(total0 - total1) / std::max(total0, total1) < 0.02);
}
