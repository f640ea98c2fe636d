// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/config.hpp"

#include <doctest.h>

using namespace spikegrad;
using nlohmann::json;

TEST_CASE("presets pin the published hyperparameters") {
  SUBCASE("nmnist-like") {
    const auto cfg = parse_experiment_config(json{{"preset", "nmnist-like"}});
    CHECK(cfg.training.learning_rate == 5e-3);
    CHECK(cfg.training.batch_size == 256);
    CHECK(cfg.training.epochs == 50);
    CHECK(cfg.training.surrogate.steepness == 100.0);
    CHECK(cfg.dataset.dt_ms == 14.0);
    CHECK(cfg.dataset.steps == 22);
    CHECK(cfg.hidden == 200);
  }
  SUBCASE("shd-like") {
    const auto cfg = parse_experiment_config(json{{"preset", "shd-like"}});
    CHECK(cfg.training.learning_rate == 2e-4);
    CHECK(cfg.training.batch_size == 128);
    CHECK(cfg.training.epochs == 200);
    CHECK(cfg.training.surrogate.steepness == 100.0);
    CHECK(cfg.dataset.dt_ms == 14.0);
    CHECK(cfg.dataset.steps == 100);
    CHECK(cfg.hidden == 200);
  }
  SUBCASE("explicit keys override the preset") {
    const auto cfg = parse_experiment_config(
        json{{"preset", "shd-like"}, {"training", {{"epochs", 7}}}});
    CHECK(cfg.training.epochs == 7);
    CHECK(cfg.training.batch_size == 128);
  }
}

TEST_CASE("validation errors carry field paths") {
  CHECK_THROWS_WITH_AS(parse_experiment_config(json{{"presett", "x"}}),
                       doctest::Contains("presett"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_config(json{{"training", {{"learning_rate", "fast"}}}}),
      doctest::Contains("training.learning_rate"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_config(json{{"dataset", {{"synthetic", {{"task", "nope"}}}}}}),
      doctest::Contains("task"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json{{"model", {{"kind", "izhikevich"}}}}),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config(json{{"dataset", {{"kind", "manifest"}}}}),
      ConfigError);  // manifests missing
  CHECK_THROWS_AS(parse_experiment_config(json{{"jobs", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json{{"seeds", json::array()}}), ConfigError);
}

TEST_CASE("expanded configs re-parse to themselves") {
  json j;
  j["preset"] = "shd-like";
  j["dataset"] = {{"kind", "synthetic"},
                  {"steps", 40},
                  {"synthetic", {{"task", "temporal-order"}, {"class_count", 2},
                                 {"channel_count", 16}, {"seed", 3}}}};
  j["topology"] = {{"hidden", 32}, {"recurrent", true}};
  j["model"] = {{"kind", "cuba-lif"}, {"tau_mem_ms", 420.0}, {"tau_syn_ms", 28.0}};
  j["sweep"] = {{"tau_mem_ms", {140.0, "inf"}}, {"tau_syn_ms", {14.0, 28.0}}};
  j["seeds"] = {4, 5};

  const auto cfg = parse_experiment_config(j);
  CHECK(cfg.recurrent);
  CHECK(cfg.model.kind == NeuronModelKind::CubaLif);
  CHECK(std::isinf(cfg.sweep_tau_mem_ms[1]));

  const json expanded = expand_experiment_config(cfg);
  const auto cfg2 = parse_experiment_config(expanded);
  CHECK(expand_experiment_config(cfg2) == expanded);
  CHECK(cfg2.dataset.synthetic.class_count == 2);
  CHECK(cfg2.training.epochs == cfg.training.epochs);
  CHECK(cfg2.seeds == cfg.seeds);
}

TEST_CASE("tau accepts the string inf") {
  const auto cfg = parse_experiment_config(
      json{{"model", {{"kind", "if"}, {"tau_mem_ms", "inf"}, {"tau_syn_ms", 0.0}}}});
  CHECK(std::isinf(cfg.model.tau_mem_ms));
}
