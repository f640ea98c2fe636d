// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner. Verbs:
//   train    fit one model per seed, write checkpoints and epoch logs
//   eval     accuracy / sparsity / synop reports for a checkpoint
//   sweep    (tau_mem, tau_syn) grid with mean +- std accuracy over seeds
//   profile  sparsity, synop and weight-distribution reports
//   trace    single-neuron (I, U, S) trajectory for a stimulus file
//   convert  adapters producing canonical event files + manifests
//
// Every run writes into a timestamped directory under the configured output
// root, next to a fully expanded copy of its configuration. Exit codes:
// 0 success, 2 config error, 3 data error, 4 numeric failure; the last stdout
// line is a machine-parsable status.

#include <CLI11.hpp>

#include "spikegrad/checkpoint.hpp"
#include "spikegrad/config.hpp"
#include "spikegrad/events.hpp"
#include "spikegrad/io.hpp"
#include "spikegrad/metrics.hpp"
#include "spikegrad/network.hpp"
#include "spikegrad/report_io.hpp"
#include "spikegrad/training.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace spikegrad;
using nlohmann::json;

namespace {

struct CliOptions {
  std::string config_path;
  std::vector<std::uint64_t> seeds;  // overrides config when non-empty
  std::string out_dir;               // overrides config when non-empty
  std::string run_name;              // pins the run directory name
  int jobs = 0;                      // overrides config when > 0
  bool debug_traces = false;
  // verb-specific
  std::string checkpoint_path;
  std::string split = "test";
  std::string adapter;
  std::string source;
  int channels = 0;  // text adapter: 0 infers max channel + 1
};

fs::path make_run_dir(const ExperimentConfig& cfg, const std::string& verb,
                      const std::string& run_name) {
  const fs::path base(cfg.out_dir);
  fs::create_directories(base);
  if (!run_name.empty()) {
    const fs::path dir = base / run_name;
    fs::create_directories(dir);
    return dir;
  }
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  for (int suffix = 0;; ++suffix) {
    std::string name = verb + "-" + stamp;
    if (suffix > 0) name += "-" + std::to_string(suffix);
    const fs::path dir = base / name;
    if (!fs::exists(dir)) {
      fs::create_directories(dir);
      return dir;
    }
  }
}

void write_expanded_config(const fs::path& run_dir, const ExperimentConfig& cfg) {
  std::ofstream out(run_dir / "expanded_config.json", std::ios::trunc);
  out << expand_experiment_config(cfg).dump(2) << "\n";
}

ExperimentConfig load_config(const CliOptions& opts, bool required = true) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = load_experiment_config(opts.config_path);
  } else if (required) {
    throw ConfigError("missing --config");
  }
  if (!opts.seeds.empty()) cfg.seeds = opts.seeds;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.jobs > 0) cfg.jobs = opts.jobs;
  if (opts.debug_traces) cfg.debug_traces = true;
  return cfg;
}

RasterDataset load_split(const ExperimentConfig& cfg, const std::string& split) {
  if (cfg.dataset.kind == "synthetic") {
    const auto events = generate_synthetic_dataset(cfg.dataset.synthetic, split);
    return bin_dataset(events, cfg.dataset.dt_ms, cfg.dataset.steps);
  }
  const auto& manifest_path =
      split == "train" ? cfg.dataset.train_manifest : cfg.dataset.test_manifest;
  const fs::path path(manifest_path);
  const auto manifest = load_manifest(path, split, cfg.dataset.class_count);
  if (split == "test" && !cfg.dataset.train_manifest.empty()) {
    const auto train_manifest =
        load_manifest(cfg.dataset.train_manifest, "train", cfg.dataset.class_count);
    check_splits_disjoint(train_manifest, manifest);
  }
  const auto events = load_event_dataset(manifest, path.parent_path());
  return bin_dataset(events, cfg.dataset.dt_ms, cfg.dataset.steps);
}

Topology topology_from(const ExperimentConfig& cfg, const RasterDataset& data) {
  Topology topo;
  topo.inputs = data.channel_count;
  topo.hidden = cfg.hidden;
  topo.outputs = data.class_count;
  topo.recurrent = cfg.recurrent;
  topo.kind = cfg.model.kind;
  topo.validate();
  return topo;
}

std::uint64_t data_seed_of(const ExperimentConfig& cfg) {
  return cfg.dataset.kind == "synthetic" ? cfg.dataset.synthetic.seed : 0;
}

void write_epoch_csv(const fs::path& path, const std::vector<EpochStats>& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write epoch log: " + path.string());
  out << "epoch,train_loss,test_accuracy,hidden_spikes_per_sample,wall_time_s\n";
  for (const auto& e : log) {
    out << e.epoch << "," << format_double(e.train_loss) << ","
        << format_double(e.test_accuracy) << ","
        << format_double(e.hidden_spikes_per_sample) << ","
        << format_double(e.wall_time_s) << "\n";
  }
}

/// Full forward sweep over a split collecting everything eval/profile needs.
struct SplitProfile {
  std::vector<int> predictions;
  std::vector<std::int64_t> per_sample_spikes;
  SparsityReport sparsity;
  NetworkSynOpReport synops_mean;  // mean per sample
  double accuracy = 0;
};

SplitProfile profile_split(const RasterDataset& data, const Checkpoint& ckpt) {
  SplitProfile profile;
  if (data.channel_count != ckpt.topology.inputs)
    throw DataError("dataset channels (" + std::to_string(data.channel_count) +
                    ") do not match checkpoint inputs (" +
                    std::to_string(ckpt.topology.inputs) + ")");
  SynOpCounts hidden_total, readout_total, grand_total;
  NetworkSynOpReport last;
  std::size_t correct = 0;
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto record = forward(data.rasters[s], ckpt.weights, ckpt.model);
    const int pred = predict(record);
    profile.predictions.push_back(pred);
    if (pred == data.labels[s]) ++correct;
    profile.per_sample_spikes.push_back(
        static_cast<std::int64_t>(record.hidden_spike_count()));
    last = count_synops(record, data.rasters[s], ckpt.model.kind,
                        ckpt.topology.recurrent);
    hidden_total += last.hidden.total;
    readout_total += last.readout.total;
    grand_total += last.total_per_sample;
  }
  const double n = static_cast<double>(data.size());
  profile.accuracy = data.size() ? static_cast<double>(correct) / n : 0.0;
  profile.sparsity = sparsity_report(profile.per_sample_spikes, ckpt.topology.hidden,
                                     data.rasters.empty() ? 0 : data.rasters[0].steps());
  profile.synops_mean = last;  // shapes and kind; totals replaced by means below
  if (data.size()) {
    profile.synops_mean.hidden.total = hidden_total.scaled(1.0 / n);
    profile.synops_mean.readout.total = readout_total.scaled(1.0 / n);
    profile.synops_mean.total_per_sample = grand_total.scaled(1.0 / n);
  }
  return profile;
}

void print_status_ok(const std::string& verb, const fs::path& run_dir,
                     const std::string& extra = "") {
  std::cout << "status=ok verb=" << verb << " code=0 run_dir=" << run_dir.string();
  if (!extra.empty()) std::cout << " " << extra;
  std::cout << "\n";
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int cmd_train(const CliOptions& opts) {
  const auto cfg = load_config(opts);
  const auto train_data = load_split(cfg, "train");
  const auto test_data = load_split(cfg, "test");
  const auto topo = topology_from(cfg, train_data);
  const auto model = NetworkModel<double>::from_time_constants(
      topo, cfg.model.tau_syn_ms, cfg.model.tau_mem_ms, cfg.dataset.dt_ms);

  const auto run_dir = make_run_dir(cfg, "train", opts.run_name);
  write_expanded_config(run_dir, cfg);

  for (std::uint64_t seed : cfg.seeds) {
    TrainConfig<double> tc = cfg.training;
    tc.seed = seed;
    tc.heterogeneous = cfg.model.heterogeneous;
    std::cout << "# seed " << seed << "\n";
    const auto result =
        train(train_data, test_data, topo, model, tc, [](const EpochStats& e) {
          std::cout << "epoch " << e.epoch << " loss " << format_double(e.train_loss)
                    << " test_acc " << format_double(e.test_accuracy) << "\n";
        });

    write_epoch_csv(run_dir / ("epochs_seed" + std::to_string(seed) + ".csv"),
                    result.log);
    Checkpoint ckpt;
    ckpt.topology = topo;
    ckpt.model = result.model;
    ckpt.weights = result.weights;
    ckpt.hetero = result.hetero;
    ckpt.seeds = {seed, data_seed_of(cfg), cfg.training.epochs};
    save_checkpoint(run_dir / ("checkpoint_seed" + std::to_string(seed) + ".json"),
                    ckpt);
  }
  print_status_ok("train", run_dir);
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int cmd_eval(const CliOptions& opts) {
  if (opts.checkpoint_path.empty()) throw ConfigError("eval needs --checkpoint");
  const auto cfg = load_config(opts);
  const auto ckpt = load_checkpoint(opts.checkpoint_path);
  const auto data = load_split(cfg, opts.split);

  const auto run_dir = make_run_dir(cfg, "eval", opts.run_name);
  write_expanded_config(run_dir, cfg);

  const auto profile = profile_split(data, ckpt);
  const auto acc = accuracy(profile.predictions, data.labels, data.class_count);

  json report;
  report["split"] = opts.split;
  report["checkpoint"] = opts.checkpoint_path;
  report["accuracy"] = to_json(acc);
  report["sparsity"] = to_json(profile.sparsity);
  report["synops_mean_per_sample"] = to_json(profile.synops_mean);
  std::ofstream(run_dir / "eval.json") << report.dump(2) << "\n";
  write_confusion_csv(run_dir / "confusion.csv", acc);

  print_status_ok("eval", run_dir,
                  "accuracy=" + format_double(acc.accuracy) +
                      " spikes_per_sample=" +
                      format_double(profile.sparsity.spikes_per_sample));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::string tau_label(double tau) {
  if (std::isinf(tau)) return "inf";
  std::ostringstream os;
  os << tau;
  return os.str();
}

int cmd_sweep(const CliOptions& opts) {
  const auto cfg = load_config(opts);
  const auto train_data = load_split(cfg, "train");
  const auto test_data = load_split(cfg, "test");
  const auto topo = topology_from(cfg, train_data);

  SweepGrid grid;
  grid.tau_mem_ms = cfg.sweep_tau_mem_ms;
  grid.tau_syn_ms = cfg.sweep_tau_syn_ms;
  grid.seeds = cfg.seeds;
  grid.jobs = cfg.jobs;
  switch (cfg.model.kind) {
    case NeuronModelKind::IF:
      grid.tau_mem_ms = {std::numeric_limits<double>::infinity()};
      grid.tau_syn_ms = {0.0};
      break;
    case NeuronModelKind::LIF:
      if (grid.tau_syn_ms.empty()) grid.tau_syn_ms = {0.0};
      for (double t : grid.tau_syn_ms)
        if (t != 0.0) throw ConfigError("sweep.tau_syn_ms: LIF requires tau_syn = 0");
      if (grid.tau_mem_ms.empty())
        throw ConfigError("sweep.tau_mem_ms: empty for a LIF sweep");
      break;
    case NeuronModelKind::CubaLif:
      if (grid.tau_mem_ms.empty() || grid.tau_syn_ms.empty())
        throw ConfigError("sweep: CUBA-LIF needs tau_mem_ms and tau_syn_ms lists");
      break;
  }

  const auto run_dir = make_run_dir(cfg, "sweep", opts.run_name);
  write_expanded_config(run_dir, cfg);

  TrainConfig<double> base = cfg.training;
  base.heterogeneous = cfg.model.heterogeneous;
  const auto cells =
      grid_sweep(train_data, test_data, topo, cfg.dataset.dt_ms, base, grid);

  // table: rows tau_mem, columns tau_syn, cells "mean+-std"
  {
    std::ofstream out(run_dir / "sweep_accuracy.csv", std::ios::trunc);
    out << "tau_mem_ms\\tau_syn_ms";
    for (double ts : grid.tau_syn_ms) out << "," << tau_label(ts);
    out << "\n";
    std::size_t i = 0;
    for (double tm : grid.tau_mem_ms) {
      out << tau_label(tm);
      for (std::size_t c = 0; c < grid.tau_syn_ms.size(); ++c, ++i) {
        char cell[64];
        std::snprintf(cell, sizeof(cell), "%.4f±%.4f", cells[i].mean_accuracy,
                      cells[i].std_accuracy);
        out << "," << cell;
      }
      out << "\n";
    }
  }
  // per-cell sparsity table (spikes per sample)
  {
    std::ofstream out(run_dir / "sweep_spikes_per_sample.csv", std::ios::trunc);
    out << "tau_mem_ms\\tau_syn_ms";
    for (double ts : grid.tau_syn_ms) out << "," << tau_label(ts);
    out << "\n";
    std::size_t i = 0;
    for (double tm : grid.tau_mem_ms) {
      out << tau_label(tm);
      for (std::size_t c = 0; c < grid.tau_syn_ms.size(); ++c, ++i)
        out << "," << format_double(cells[i].mean_spikes_per_sample);
      out << "\n";
    }
  }
  // full-precision flat records
  {
    std::ofstream out(run_dir / "sweep_cells.csv", std::ios::trunc);
    out << "tau_mem_ms,tau_syn_ms,seed,accuracy,spikes_per_sample\n";
    for (const auto& cell : cells) {
      for (std::size_t s = 0; s < grid.seeds.size(); ++s) {
        out << tau_label(cell.tau_mem_ms) << "," << tau_label(cell.tau_syn_ms) << ","
            << grid.seeds[s] << "," << format_double(cell.accuracies[s]) << ","
            << format_double(cell.spikes_per_sample[s]) << "\n";
      }
    }
  }
  print_status_ok("sweep", run_dir, "cells=" + std::to_string(cells.size()));
  return 0;
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------

int cmd_profile(const CliOptions& opts) {
  if (opts.checkpoint_path.empty()) throw ConfigError("profile needs --checkpoint");
  const auto cfg = load_config(opts);
  const auto ckpt = load_checkpoint(opts.checkpoint_path);
  const auto data = load_split(cfg, opts.split);

  const auto run_dir = make_run_dir(cfg, "profile", opts.run_name);
  write_expanded_config(run_dir, cfg);

  const auto profile = profile_split(data, ckpt);
  const auto wstats = weight_stats(ckpt.weights);

  json report;
  report["split"] = opts.split;
  report["checkpoint"] = opts.checkpoint_path;
  report["sparsity"] = to_json(profile.sparsity);
  report["synops_mean_per_sample"] = to_json(profile.synops_mean);
  report["weight_stats"] = to_json(wstats);
  std::ofstream(run_dir / "profile.json") << report.dump(2) << "\n";

  write_histogram_csv(run_dir / "hist_input_hidden.csv", wstats.input_hidden);
  write_histogram_csv(run_dir / "hist_hidden_readout.csv", wstats.hidden_readout);
  if (wstats.has_recurrent)
    write_histogram_csv(run_dir / "hist_recurrent.csv", wstats.recurrent);

  if (cfg.debug_traces && data.size() > 0) {
    // per-step hidden I/U/S of the split's first sample
    ForwardOptions opts;
    opts.record_traces = true;
    const auto record = forward(data.rasters[0], ckpt.weights, ckpt.model, opts);
    std::ofstream out(run_dir / "debug_traces_sample0.csv", std::ios::trunc);
    out << "step,neuron,I,U,S\n";
    for (Index t = 0; t < record.steps(); ++t)
      for (Index i = 0; i < record.hidden_spikes.cols(); ++i)
        out << t << "," << i << "," << format_double(record.hidden_current(t, i))
            << "," << format_double(record.hidden_membrane(t, i)) << ","
            << record.hidden_spikes(t, i) << "\n";
  }

  print_status_ok("profile", run_dir,
                  "spikes_per_sample=" +
                      format_double(profile.sparsity.spikes_per_sample));
  return 0;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

int cmd_trace(const CliOptions& opts) {
  const auto cfg = load_config(opts);
  if (cfg.trace.stimulus.empty()) throw ConfigError("trace.stimulus: missing");
  const auto stream = load_events_file(cfg.trace.stimulus);
  const Index steps = cfg.trace.steps > 0 ? cfg.trace.steps : cfg.dataset.steps;
  const auto raster = bin_events(stream, cfg.dataset.dt_ms, steps);

  VectorX<double> stimulus(steps);
  for (Index t = 0; t < steps; ++t) stimulus[t] = raster.bits(t, 0);

  const double alpha = decay_from_tau(cfg.model.tau_syn_ms, cfg.dataset.dt_ms);
  const double beta = cfg.model.kind == NeuronModelKind::IF
                          ? 1.0
                          : decay_from_tau(cfg.model.tau_mem_ms, cfg.dataset.dt_ms);
  const auto trace = trace_single_neuron(cfg.model.kind, stimulus, cfg.trace.weight,
                                         cfg.model.kind == NeuronModelKind::CubaLif
                                             ? alpha
                                             : 0.0,
                                         beta);

  const auto run_dir = make_run_dir(cfg, "trace", opts.run_name);
  write_expanded_config(run_dir, cfg);
  const auto path = run_dir / "trace.csv";
  std::ofstream out(path, std::ios::trunc);
  out << "step,I,U,S\n";
  for (Index t = 0; t < steps; ++t) {
    out << t << "," << format_double(trace.current[t]) << ","
        << format_double(trace.membrane[t]) << "," << trace.spikes[t] << "\n";
  }
  print_status_ok("trace", run_dir, "rows=" + std::to_string(steps));
  return 0;
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

EventStream parse_text_events(const fs::path& path, std::uint32_t channel_count) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open text event file: " + path.string());
  std::vector<Event> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::uint64_t time_us;
    std::uint32_t channel;
    if (!(ss >> time_us >> channel))
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected \"time_us channel\"");
    events.push_back({time_us, channel});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time_us < b.time_us; });
  if (channel_count == 0) {
    for (const auto& e : events) channel_count = std::max(channel_count, e.channel + 1);
    if (channel_count == 0) channel_count = 1;
  }
  return EventStream(channel_count, std::move(events));
}

int cmd_convert(const CliOptions& opts) {
  if (opts.adapter.empty() || opts.source.empty())
    throw ConfigError("convert needs --adapter and --source");
  auto cfg = load_config(opts, /*required=*/false);
  const auto run_dir = make_run_dir(cfg, "convert", opts.run_name);

  if (opts.adapter == "text") {
    const fs::path source(opts.source);
    const auto manifest = load_manifest(source, "train");
    std::uint32_t channels = static_cast<std::uint32_t>(opts.channels);
    if (channels == 0) {
      for (const auto& entry : manifest.entries) {
        fs::path p(entry.path);
        if (p.is_relative()) p = source.parent_path() / p;
        const auto stream = parse_text_events(p, 0);
        channels = std::max(channels, stream.channel_count());
      }
    }
    EventDataset ds;
    ds.class_count = manifest.class_count;
    ds.channel_count = static_cast<int>(channels);
    ds.split = "train";
    for (const auto& entry : manifest.entries) {
      fs::path p(entry.path);
      if (p.is_relative()) p = source.parent_path() / p;
      ds.streams.push_back(parse_text_events(p, channels));
      ds.labels.push_back(entry.label);
    }
    const auto manifest_path = export_event_dataset(run_dir / "dataset", "converted", ds);
    print_status_ok("convert", run_dir, "manifest=" + manifest_path.string());
    return 0;
  }

  if (opts.adapter == "synthetic") {
    std::ifstream in(opts.source);
    if (!in) throw ConfigError("cannot open synthetic spec: " + opts.source);
    json src;
    try {
      in >> src;
    } catch (const json::exception& e) {
      throw ConfigError(opts.source + ": invalid JSON: " + std::string(e.what()));
    }
    json wrapped;
    wrapped["dataset"] = {{"kind", "synthetic"}, {"synthetic", src}};
    const auto synth_cfg = parse_experiment_config(wrapped);
    const auto& spec = synth_cfg.dataset.synthetic;
    for (const std::string split : {"train", "test"}) {
      const auto ds = generate_synthetic_dataset(spec, split);
      export_event_dataset(run_dir / "dataset", split, ds);
    }
    print_status_ok("convert", run_dir,
                    "manifest=" + (run_dir / "dataset" / "train_manifest.jsonl").string());
    return 0;
  }

  throw ConfigError("unknown adapter \"" + opts.adapter +
                    "\" (available: text, synthetic)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiking network training and profiling engine"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&](CLI::App* sub, bool with_checkpoint = false) {
    sub->add_option("--config", opts.config_path, "experiment config (JSON)");
    sub->add_option("--seed,--seeds", opts.seeds, "override the config's seed list");
    sub->add_option("--out", opts.out_dir, "override the output root directory");
    sub->add_option("--run-name", opts.run_name, "pin the run directory name");
    sub->add_option("--jobs", opts.jobs, "parallel sweep jobs");
    sub->add_flag("--debug-traces", opts.debug_traces, "record hidden I/U traces");
    if (with_checkpoint) {
      sub->add_option("--checkpoint", opts.checkpoint_path, "checkpoint JSON")
          ->required();
      sub->add_option("--split", opts.split, "dataset split (train|test)");
    }
  };

  auto* train_cmd = app.add_subcommand("train", "train one model per seed");
  add_common(train_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common(eval_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "time-constant grid search");
  add_common(sweep_cmd);
  auto* profile_cmd = app.add_subcommand("profile", "sparsity / synop / weight reports");
  add_common(profile_cmd, true);
  auto* trace_cmd = app.add_subcommand("trace", "single-neuron trajectory CSV");
  add_common(trace_cmd);
  auto* convert_cmd = app.add_subcommand("convert", "produce canonical event files");
  add_common(convert_cmd);
  convert_cmd->add_option("--adapter", opts.adapter, "adapter name (text | synthetic)");
  convert_cmd->add_option("--source", opts.source, "adapter input path");
  convert_cmd->add_option("--channels", opts.channels,
                          "channel count for the text adapter (0 = infer)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cout << "status=error code=2 error=\"command line\"\n";
    return 2;
  }

  try {
    if (app.got_subcommand(train_cmd)) return cmd_train(opts);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(opts);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(opts);
    if (app.got_subcommand(profile_cmd)) return cmd_profile(opts);
    if (app.got_subcommand(trace_cmd)) return cmd_trace(opts);
    if (app.got_subcommand(convert_cmd)) return cmd_convert(opts);
    throw ConfigError("no verb given");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::cout << "status=error code=2 error=\"" << e.what() << "\"\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    std::cout << "status=error code=3 error=\"" << e.what() << "\"\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    std::cout << "status=error code=4 error=\"" << e.what() << "\"\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "status=error code=1 error=\"" << e.what() << "\"\n";
    return 1;
  }
}
