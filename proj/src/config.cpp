// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/config.hpp"

#include <fstream>
#include <set>

namespace spikegrad {

namespace {

using nlohmann::json;

/// Typed reads with field-path error messages and unknown-key detection.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected a JSON object");
  }

  ~Reader() = default;

  Reader object(const std::string& key) {
    mark(key);
    if (!j_.contains(key)) return Reader(empty_, join(key));
    return Reader(j_.at(key), join(key));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    mark(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(join(key) + ": wrong type");
    }
  }

  /// tau values accept the string "inf" besides numbers.
  double get_tau(const std::string& key, double fallback) {
    mark(key);
    if (!j_.contains(key)) return fallback;
    const auto& v = j_.at(key);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
      throw ConfigError(join(key) + ": expected a number or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError(join(key) + ": wrong type");
    return v.get<double>();
  }

  /// Array of tau values; "inf" entries are accepted alongside numbers.
  std::vector<double> get_tau_list(const std::string& key) {
    mark(key);
    std::vector<double> out;
    if (!j_.contains(key)) return out;
    const auto& arr = j_.at(key);
    if (!arr.is_array()) throw ConfigError(join(key) + ": expected an array");
    for (const auto& v : arr) {
      if (v.is_string() && (v == "inf" || v == "infinity"))
        out.push_back(std::numeric_limits<double>::infinity());
      else if (v.is_number())
        out.push_back(v.get<double>());
      else
        throw ConfigError(join(key) + ": entries must be numbers or \"inf\"");
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw ConfigError("unknown config key \"" + join(it.key()) + "\"");
    }
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  void mark(const std::string& key) { seen_.insert(key); }

  static const json empty_;
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const json Reader::empty_ = json::object();

void apply_preset(ExperimentConfig& cfg, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "nmnist-like") {
    cfg.dataset.dt_ms = 14.0;
    cfg.dataset.steps = 22;  // ~300 ms saccade recordings at dt = 14 ms
    cfg.hidden = 200;
    cfg.training.learning_rate = 5e-3;
    cfg.training.batch_size = 256;
    cfg.training.epochs = 50;
    cfg.training.surrogate.steepness = 100.0;
  } else if (preset == "shd-like") {
    cfg.dataset.dt_ms = 14.0;
    cfg.dataset.steps = 100;  // ~1.4 s utterances at dt = 14 ms
    cfg.hidden = 200;
    cfg.training.learning_rate = 2e-4;
    cfg.training.batch_size = 128;
    cfg.training.epochs = 200;
    cfg.training.surrogate.steepness = 100.0;
  } else {
    throw ConfigError("unknown preset \"" + preset +
                      "\" (expected nmnist-like | shd-like)");
  }
}

SyntheticTaskSpec::Task parse_task(const std::string& name) {
  if (name == "rate-coded" || name == "rate") return SyntheticTaskSpec::Task::RateCoded;
  if (name == "temporal-order" || name == "order")
    return SyntheticTaskSpec::Task::TemporalOrder;
  throw ConfigError("dataset.synthetic.task: unknown task \"" + name +
                    "\" (expected rate-coded | temporal-order)");
}

const char* task_name(SyntheticTaskSpec::Task task) {
  return task == SyntheticTaskSpec::Task::RateCoded ? "rate-coded" : "temporal-order";
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  Reader root(j, "");
  ExperimentConfig cfg;

  cfg.preset = root.get<std::string>("preset", "");
  apply_preset(cfg, cfg.preset);

  {
    Reader d = root.object("dataset");
    cfg.dataset.kind = d.get<std::string>("kind", cfg.dataset.kind);
    if (cfg.dataset.kind != "synthetic" && cfg.dataset.kind != "manifest")
      throw ConfigError("dataset.kind: expected synthetic | manifest");
    cfg.dataset.dt_ms = d.get<double>("dt_ms", cfg.dataset.dt_ms);
    cfg.dataset.steps = d.get<Index>("steps", cfg.dataset.steps);
    cfg.dataset.train_manifest = d.get<std::string>("train_manifest", "");
    cfg.dataset.test_manifest = d.get<std::string>("test_manifest", "");
    if (d.has("class_count")) cfg.dataset.class_count = d.get<int>("class_count", 0);
    if (!(cfg.dataset.dt_ms > 0)) throw ConfigError("dataset.dt_ms: must be positive");
    if (cfg.dataset.steps < 1) throw ConfigError("dataset.steps: must be >= 1");

    {
      Reader s = d.object("synthetic");
      auto& spec = cfg.dataset.synthetic;
      spec.dt_ms = cfg.dataset.dt_ms;
      spec.duration_ms = static_cast<double>(cfg.dataset.steps) * cfg.dataset.dt_ms;
      spec.task = parse_task(s.get<std::string>("task", task_name(spec.task)));
      spec.class_count = s.get<int>("class_count", spec.class_count);
      spec.channel_count = s.get<int>("channel_count", spec.channel_count);
      spec.duration_ms = s.get<double>("duration_ms", spec.duration_ms);
      spec.active_rate = s.get<double>("active_rate", spec.active_rate);
      spec.background_rate = s.get<double>("background_rate", spec.background_rate);
      spec.burst_rate = s.get<double>("burst_rate", spec.burst_rate);
      spec.burst_steps = s.get<int>("burst_steps", spec.burst_steps);
      spec.gap_steps = s.get<int>("gap_steps", spec.gap_steps);
      spec.jitter_steps = s.get<int>("jitter_steps", spec.jitter_steps);
      spec.distractor_bursts =
          s.get<int>("distractor_bursts", spec.distractor_bursts);
      spec.train_per_class = s.get<int>("train_per_class", spec.train_per_class);
      spec.test_per_class = s.get<int>("test_per_class", spec.test_per_class);
      spec.seed = s.get<std::uint64_t>("seed", spec.seed);
      s.finish();
    }
    if (cfg.dataset.kind == "synthetic") cfg.dataset.synthetic.validate();
    if (cfg.dataset.kind == "manifest" &&
        (cfg.dataset.train_manifest.empty() || cfg.dataset.test_manifest.empty()))
      throw ConfigError("dataset: manifest kind needs train_manifest and test_manifest");
    d.finish();
  }

  {
    Reader t = root.object("topology");
    cfg.hidden = t.get<Index>("hidden", cfg.hidden);
    cfg.recurrent = t.get<bool>("recurrent", cfg.recurrent);
    if (cfg.hidden < 1) throw ConfigError("topology.hidden: must be >= 1");
    t.finish();
  }

  {
    Reader m = root.object("model");
    cfg.model.kind = parse_neuron_kind(m.get<std::string>("kind", "lif"));
    cfg.model.tau_mem_ms = m.get_tau("tau_mem_ms", cfg.model.tau_mem_ms);
    cfg.model.tau_syn_ms = m.get_tau("tau_syn_ms", cfg.model.tau_syn_ms);
    cfg.model.heterogeneous = m.get<bool>("heterogeneous", cfg.model.heterogeneous);
    m.finish();
  }

  {
    Reader t = root.object("training");
    cfg.training.learning_rate = t.get<double>("learning_rate", cfg.training.learning_rate);
    cfg.training.batch_size = t.get<int>("batch_size", cfg.training.batch_size);
    cfg.training.epochs = t.get<int>("epochs", cfg.training.epochs);
    cfg.training.surrogate.steepness =
        t.get<double>("surrogate_steepness", cfg.training.surrogate.steepness);
    cfg.training.adamax_beta1 = t.get<double>("adamax_beta1", cfg.training.adamax_beta1);
    cfg.training.adamax_beta2 = t.get<double>("adamax_beta2", cfg.training.adamax_beta2);
    cfg.training.adamax_eps = t.get<double>("adamax_eps", cfg.training.adamax_eps);
    cfg.training.heterogeneous = cfg.model.heterogeneous;
    cfg.training.validate();
    t.finish();
  }

  cfg.seeds = root.get<std::vector<std::uint64_t>>("seeds", cfg.seeds);
  if (cfg.seeds.empty()) throw ConfigError("seeds: must be non-empty");

  {
    Reader s = root.object("sweep");
    cfg.sweep_tau_mem_ms = s.get_tau_list("tau_mem_ms");
    cfg.sweep_tau_syn_ms = s.get_tau_list("tau_syn_ms");
    s.finish();
  }

  {
    Reader t = root.object("trace");
    cfg.trace.stimulus = t.get<std::string>("stimulus", "");
    cfg.trace.weight = t.get<double>("weight", cfg.trace.weight);
    cfg.trace.steps = t.get<Index>("steps", cfg.trace.steps);
    t.finish();
  }

  {
    Reader o = root.object("output");
    cfg.out_dir = o.get<std::string>("dir", cfg.out_dir);
    o.finish();
  }

  cfg.jobs = root.get<int>("jobs", cfg.jobs);
  if (cfg.jobs < 1) throw ConfigError("jobs: must be >= 1");
  cfg.debug_traces = root.get<bool>("debug_traces", cfg.debug_traces);

  root.finish();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + std::string(e.what()));
  }
  return parse_experiment_config(j);
}

namespace {

json tau_to_json(double tau) {
  if (std::isinf(tau)) return "inf";
  return tau;
}

}  // namespace

json expand_experiment_config(const ExperimentConfig& cfg) {
  json j;
  j["preset"] = cfg.preset;

  json synth;
  const auto& s = cfg.dataset.synthetic;
  synth["task"] = task_name(s.task);
  synth["class_count"] = s.class_count;
  synth["channel_count"] = s.channel_count;
  synth["duration_ms"] = s.duration_ms;
  synth["active_rate"] = s.active_rate;
  synth["background_rate"] = s.background_rate;
  synth["burst_rate"] = s.burst_rate;
  synth["burst_steps"] = s.burst_steps;
  synth["gap_steps"] = s.gap_steps;
  synth["jitter_steps"] = s.jitter_steps;
  synth["distractor_bursts"] = s.distractor_bursts;
  synth["train_per_class"] = s.train_per_class;
  synth["test_per_class"] = s.test_per_class;
  synth["seed"] = s.seed;

  json d;
  d["kind"] = cfg.dataset.kind;
  d["dt_ms"] = cfg.dataset.dt_ms;
  d["steps"] = cfg.dataset.steps;
  d["train_manifest"] = cfg.dataset.train_manifest;
  d["test_manifest"] = cfg.dataset.test_manifest;
  if (cfg.dataset.class_count) d["class_count"] = *cfg.dataset.class_count;
  d["synthetic"] = std::move(synth);
  j["dataset"] = std::move(d);

  j["topology"] = {{"hidden", cfg.hidden}, {"recurrent", cfg.recurrent}};
  j["model"] = {{"kind", neuron_kind_name(cfg.model.kind)},
                {"tau_mem_ms", tau_to_json(cfg.model.tau_mem_ms)},
                {"tau_syn_ms", tau_to_json(cfg.model.tau_syn_ms)},
                {"heterogeneous", cfg.model.heterogeneous}};
  j["training"] = {{"learning_rate", cfg.training.learning_rate},
                   {"batch_size", cfg.training.batch_size},
                   {"epochs", cfg.training.epochs},
                   {"surrogate_steepness", cfg.training.surrogate.steepness},
                   {"adamax_beta1", cfg.training.adamax_beta1},
                   {"adamax_beta2", cfg.training.adamax_beta2},
                   {"adamax_eps", cfg.training.adamax_eps}};
  j["seeds"] = cfg.seeds;
  json sweep;
  json mem = json::array();
  for (double t : cfg.sweep_tau_mem_ms) mem.push_back(tau_to_json(t));
  sweep["tau_mem_ms"] = std::move(mem);
  sweep["tau_syn_ms"] = cfg.sweep_tau_syn_ms;
  j["sweep"] = std::move(sweep);
  j["trace"] = {{"stimulus", cfg.trace.stimulus},
                {"weight", cfg.trace.weight},
                {"steps", cfg.trace.steps}};
  j["output"] = {{"dir", cfg.out_dir}};
  j["jobs"] = cfg.jobs;
  j["debug_traces"] = cfg.debug_traces;
  return j;
}

}  // namespace spikegrad
