// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/report_io.hpp"

#include "spikegrad/io.hpp"

#include <fstream>

namespace spikegrad {

using nlohmann::json;

json to_json(const SynOpCounts& counts) {
  return {{"multiplications", counts.multiplications},
          {"additions", counts.additions},
          {"comparisons", counts.comparisons}};
}

json to_json(const SynOpReport& report) {
  return {{"kind", neuron_kind_name(report.kind)},
          {"inputs", report.inputs},
          {"spike_fraction", report.spike_fraction},
          {"neurons", report.neurons},
          {"steps", report.steps},
          {"per_neuron_per_step", to_json(report.per_neuron_per_step)},
          {"per_step", to_json(report.per_step)},
          {"total", to_json(report.total)}};
}

json to_json(const NetworkSynOpReport& report) {
  return {{"hidden", to_json(report.hidden)},
          {"readout", to_json(report.readout)},
          {"total_per_sample", to_json(report.total_per_sample)}};
}

json to_json(const SparsityReport& report) {
  json j = {{"total_hidden_spikes", report.total_hidden_spikes},
            {"sample_count", report.sample_count},
            {"spikes_per_sample", report.spikes_per_sample},
            {"spikes_per_neuron_per_step", report.spikes_per_neuron_per_step}};
  if (!std::isnan(report.tau_mem_ms)) j["tau_mem_ms"] = report.tau_mem_ms;
  if (!std::isnan(report.tau_syn_ms)) j["tau_syn_ms"] = report.tau_syn_ms;
  return j;
}

json to_json(const MatrixStats& stats) {
  return {{"mean", stats.mean},
          {"stddev", stats.stddev},  // population
          {"histogram_bins", kHistogramBins},
          {"histogram_min", stats.range_min},
          {"histogram_bin_width", stats.bin_width},
          {"histogram", stats.histogram}};
}

json to_json(const WeightStats& stats) {
  json j = {{"input_hidden", to_json(stats.input_hidden)},
            {"hidden_readout", to_json(stats.hidden_readout)},
            {"stddev_kind", "population"}};
  if (stats.has_recurrent) j["recurrent"] = to_json(stats.recurrent);
  return j;
}

json to_json(const AccuracyReport& report) {
  json confusion = json::array();
  for (Index r = 0; r < report.confusion.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < report.confusion.cols(); ++c)
      row.push_back(report.confusion(r, c));
    confusion.push_back(std::move(row));
  }
  return {{"accuracy", report.accuracy}, {"confusion", std::move(confusion)}};
}

void write_histogram_csv(const std::filesystem::path& path, const MatrixStats& stats) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write histogram: " + path.string());
  out << "bin_left,count\n";
  for (std::size_t b = 0; b < stats.histogram.size(); ++b) {
    const double left = stats.range_min + stats.bin_width * static_cast<double>(b);
    out << format_double(left) << "," << stats.histogram[b] << "\n";
  }
}

void write_confusion_csv(const std::filesystem::path& path, const AccuracyReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write confusion matrix: " + path.string());
  out << "true_class";
  for (Index c = 0; c < report.confusion.cols(); ++c) out << ",predicted_" << c;
  out << "\n";
  for (Index r = 0; r < report.confusion.rows(); ++r) {
    out << r;
    for (Index c = 0; c < report.confusion.cols(); ++c)
      out << "," << report.confusion(r, c);
    out << "\n";
  }
}

}  // namespace spikegrad
