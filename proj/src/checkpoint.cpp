// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace spikegrad {

namespace {

using nlohmann::json;

json matrix_to_json(const MatrixX<double>& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = std::move(data);
  return j;
}

MatrixX<double> matrix_from_json(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Index>(data.size()) != rows * cols)
    throw DataError("checkpoint: matrix data length does not match shape");
  MatrixX<double> m(rows, cols);
  std::size_t k = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = data[k++];
  return m;
}

json vector_to_json(const VectorX<double>& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorX<double> vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const VectorX<double>>(data.data(),
                                           static_cast<Index>(data.size()));
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  json j;
  j["format"] = "spikegrad-checkpoint";
  j["version"] = 1;
  j["topology"] = {{"inputs", ckpt.topology.inputs},
                   {"hidden", ckpt.topology.hidden},
                   {"outputs", ckpt.topology.outputs},
                   {"recurrent", ckpt.topology.recurrent},
                   {"kind", neuron_kind_name(ckpt.topology.kind)}};
  j["model"] = {{"theta", ckpt.model.theta},
                {"dt_ms", ckpt.model.hidden.dt_ms},
                {"hidden_alpha", vector_to_json(ckpt.model.hidden.alpha)},
                {"hidden_beta", vector_to_json(ckpt.model.hidden.beta)},
                {"readout_alpha", vector_to_json(ckpt.model.readout.alpha)},
                {"readout_beta", vector_to_json(ckpt.model.readout.beta)}};
  json weights;
  weights["input_hidden"] = matrix_to_json(ckpt.weights.input_hidden);
  weights["hidden_readout"] = matrix_to_json(ckpt.weights.hidden_readout);
  if (ckpt.weights.has_recurrent())
    weights["recurrent"] = matrix_to_json(ckpt.weights.recurrent);
  j["weights"] = std::move(weights);
  if (ckpt.hetero.active()) {
    json h;
    if (ckpt.hetero.hidden_a.size() > 0) h["hidden_a"] = vector_to_json(ckpt.hetero.hidden_a);
    if (ckpt.hetero.hidden_b.size() > 0) h["hidden_b"] = vector_to_json(ckpt.hetero.hidden_b);
    if (ckpt.hetero.readout_a.size() > 0)
      h["readout_a"] = vector_to_json(ckpt.hetero.readout_a);
    if (ckpt.hetero.readout_b.size() > 0)
      h["readout_b"] = vector_to_json(ckpt.hetero.readout_b);
    j["heterogeneous"] = std::move(h);
  }
  j["seed_lineage"] = {{"init_seed", ckpt.seeds.init_seed},
                       {"data_seed", ckpt.seeds.data_seed},
                       {"epochs_trained", ckpt.seeds.epochs_trained}};

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": invalid checkpoint JSON: " + e.what());
  }
  if (j.value("format", "") != "spikegrad-checkpoint")
    throw DataError(path.string() + ": not a spikegrad checkpoint");
  if (j.value("version", 0) != 1)
    throw DataError(path.string() + ": unsupported checkpoint version");

  Checkpoint ckpt;
  const auto& t = j.at("topology");
  ckpt.topology.inputs = t.at("inputs").get<Index>();
  ckpt.topology.hidden = t.at("hidden").get<Index>();
  ckpt.topology.outputs = t.at("outputs").get<Index>();
  ckpt.topology.recurrent = t.at("recurrent").get<bool>();
  ckpt.topology.kind = parse_neuron_kind(t.at("kind").get<std::string>());

  const auto& m = j.at("model");
  ckpt.model.kind = ckpt.topology.kind;
  ckpt.model.theta = m.at("theta").get<double>();
  ckpt.model.hidden.dt_ms = m.at("dt_ms").get<double>();
  ckpt.model.readout.dt_ms = ckpt.model.hidden.dt_ms;
  ckpt.model.hidden.alpha = vector_from_json(m.at("hidden_alpha"));
  ckpt.model.hidden.beta = vector_from_json(m.at("hidden_beta"));
  ckpt.model.readout.alpha = vector_from_json(m.at("readout_alpha"));
  ckpt.model.readout.beta = vector_from_json(m.at("readout_beta"));

  const auto& w = j.at("weights");
  ckpt.weights.input_hidden = matrix_from_json(w.at("input_hidden"));
  ckpt.weights.hidden_readout = matrix_from_json(w.at("hidden_readout"));
  if (w.contains("recurrent")) ckpt.weights.recurrent = matrix_from_json(w.at("recurrent"));
  ckpt.weights.check_shapes(ckpt.topology);

  if (j.contains("heterogeneous")) {
    const auto& h = j.at("heterogeneous");
    if (h.contains("hidden_a")) ckpt.hetero.hidden_a = vector_from_json(h.at("hidden_a"));
    if (h.contains("hidden_b")) ckpt.hetero.hidden_b = vector_from_json(h.at("hidden_b"));
    if (h.contains("readout_a")) ckpt.hetero.readout_a = vector_from_json(h.at("readout_a"));
    if (h.contains("readout_b")) ckpt.hetero.readout_b = vector_from_json(h.at("readout_b"));
  }

  const auto& s = j.at("seed_lineage");
  ckpt.seeds.init_seed = s.at("init_seed").get<std::uint64_t>();
  ckpt.seeds.data_seed = s.at("data_seed").get<std::uint64_t>();
  ckpt.seeds.epochs_trained = s.at("epochs_trained").get<int>();
  return ckpt;
}

}  // namespace spikegrad
