// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0
//
// Surrogate-gradient training: max-over-time cross-entropy on the readout
// membrane trace, backpropagation through the unrolled dynamics with the
// fast-sigmoid surrogate standing in for dS/dU, Adamax updates, and optional
// per-neuron trainable time constants (alpha/beta reparameterized through a
// logistic so they stay inside (0,1)).

#pragma once

#include "spikegrad/common.hpp"
#include "spikegrad/events.hpp"
#include "spikegrad/network.hpp"
#include "spikegrad/neuron.hpp"
#include "spikegrad/surrogate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace spikegrad {

// ---------------------------------------------------------------------------
// Loss
// ---------------------------------------------------------------------------

/// Per-sample loss seed: the gradient of the batch loss with respect to each
/// readout neuron's membrane at the step where that neuron peaks. Gradients
/// flow only into those (neuron, step) entries.
template <typename Scalar>
struct ReadoutLossSeed {
  VectorX<Scalar> grad_at_max;  // dL/dU_i[t_i], includes the 1/N_batch factor
  std::vector<Index> argmax_t;  // t_i per readout neuron (earliest on ties)
};

template <typename Scalar>
struct LossValue {
  Scalar loss = Scalar(0);
  std::vector<ReadoutLossSeed<Scalar>> seeds;  // one per sample
};

/// Cross entropy over per-neuron maxima of the readout membrane, averaged
/// over the batch.
template <typename Scalar>
LossValue<Scalar> loss_max_over_time(const std::vector<ForwardRecord<Scalar>>& records,
                                     const std::vector<int>& labels) {
  if (records.empty()) throw std::invalid_argument("loss_max_over_time: empty batch");
  if (records.size() != labels.size())
    throw std::invalid_argument("loss_max_over_time: records/labels size mismatch");
  const auto batch = static_cast<Scalar>(records.size());

  LossValue<Scalar> out;
  out.seeds.reserve(records.size());
  for (std::size_t s = 0; s < records.size(); ++s) {
    auto [maxima, argmax_t] = readout_maxima(records[s]);
    const int label = labels[s];
    if (label < 0 || label >= maxima.size())
      throw std::invalid_argument("loss_max_over_time: label out of range");

    const Scalar shift = maxima.maxCoeff();
    VectorX<Scalar> p = (maxima.array() - shift).exp();
    p /= p.sum();
    out.loss += -std::log(p[label]) / batch;

    ReadoutLossSeed<Scalar> seed;
    seed.argmax_t = std::move(argmax_t);
    seed.grad_at_max = p / batch;
    seed.grad_at_max[label] -= Scalar(1) / batch;
    out.seeds.push_back(std::move(seed));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heterogeneous (trainable) time constants
// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar logistic(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

template <typename Scalar>
Scalar logit(Scalar y) {
  return std::log(y / (Scalar(1) - y));
}

/// Raw per-neuron parameters with alpha = logistic(a), beta = logistic(b).
/// Which vectors exist follows the model kind: CUBA-LIF trains both, LIF
/// trains only b (alpha is pinned at 0), IF trains neither.
template <typename Scalar>
struct HeterogeneousParams {
  VectorX<Scalar> hidden_a, hidden_b;
  VectorX<Scalar> readout_a, readout_b;

  bool active() const { return hidden_a.size() > 0 || hidden_b.size() > 0; }
  bool trains_alpha() const { return hidden_a.size() > 0; }
  bool trains_beta() const { return hidden_b.size() > 0; }

  /// Inverts the model's current decays so materialize() reproduces them.
  static HeterogeneousParams from_model(const NetworkModel<Scalar>& model) {
    HeterogeneousParams h;
    auto invert = [](const VectorX<Scalar>& v, const char* what) {
      VectorX<Scalar> raw(v.size());
      for (Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > Scalar(0)) || !(v[i] < Scalar(1)))
          throw ConfigError(std::string("heterogeneous training needs ") + what +
                            " strictly inside (0,1); got " + std::to_string(v[i]));
        raw[i] = logit(v[i]);
      }
      return raw;
    };
    switch (model.kind) {
      case NeuronModelKind::IF:
        break;  // nothing trainable
      case NeuronModelKind::LIF:
        h.hidden_b = invert(model.hidden.beta, "beta");
        h.readout_b = invert(model.readout.beta, "beta");
        break;
      case NeuronModelKind::CubaLif:
        h.hidden_a = invert(model.hidden.alpha, "alpha");
        h.hidden_b = invert(model.hidden.beta, "beta");
        h.readout_a = invert(model.readout.alpha, "alpha");
        h.readout_b = invert(model.readout.beta, "beta");
        break;
    }
    return h;
  }

  /// Writes logistic(raw) back into the model's decay vectors. Values are
  /// clamped to the representable open interval; logistic() itself rounds to
  /// exactly 0 or 1 once |raw| exceeds ~37.
  void materialize(NetworkModel<Scalar>& model) const {
    const Scalar lo = std::numeric_limits<Scalar>::min();
    const Scalar hi = Scalar(1) - std::numeric_limits<Scalar>::epsilon() / Scalar(2);
    auto apply = [lo, hi](const VectorX<Scalar>& raw, VectorX<Scalar>& decay) {
      for (Index i = 0; i < raw.size(); ++i)
        decay[i] = std::clamp(logistic(raw[i]), lo, hi);
    };
    if (hidden_a.size() > 0) apply(hidden_a, model.hidden.alpha);
    if (hidden_b.size() > 0) apply(hidden_b, model.hidden.beta);
    if (readout_a.size() > 0) apply(readout_a, model.readout.alpha);
    if (readout_b.size() > 0) apply(readout_b, model.readout.beta);
  }
};

// ---------------------------------------------------------------------------
// Backpropagation through time
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Gradients {
  MatrixX<Scalar> input_hidden;
  MatrixX<Scalar> recurrent;  // 0x0 when the network is feedforward
  MatrixX<Scalar> hidden_readout;
  VectorX<Scalar> hidden_a, hidden_b;    // raw-parameter gradients; size 0 when fixed
  VectorX<Scalar> readout_a, readout_b;

  static Gradients zeros_like(const WeightSet<Scalar>& weights,
                              const HeterogeneousParams<Scalar>& hetero) {
    Gradients g;
    g.input_hidden = MatrixX<Scalar>::Zero(weights.input_hidden.rows(),
                                           weights.input_hidden.cols());
    if (weights.has_recurrent())
      g.recurrent = MatrixX<Scalar>::Zero(weights.recurrent.rows(),
                                          weights.recurrent.cols());
    g.hidden_readout = MatrixX<Scalar>::Zero(weights.hidden_readout.rows(),
                                             weights.hidden_readout.cols());
    g.hidden_a = VectorX<Scalar>::Zero(hetero.hidden_a.size());
    g.hidden_b = VectorX<Scalar>::Zero(hetero.hidden_b.size());
    g.readout_a = VectorX<Scalar>::Zero(hetero.readout_a.size());
    g.readout_b = VectorX<Scalar>::Zero(hetero.readout_b.size());
    return g;
  }

  void accumulate(const Gradients& other) {
    input_hidden += other.input_hidden;
    if (recurrent.size() > 0) recurrent += other.recurrent;
    hidden_readout += other.hidden_readout;
    if (hidden_a.size() > 0) hidden_a += other.hidden_a;
    if (hidden_b.size() > 0) hidden_b += other.hidden_b;
    if (readout_a.size() > 0) readout_a += other.readout_a;
    if (readout_b.size() > 0) readout_b += other.readout_b;
  }
};

/// Which decay gradients backward should produce.
struct HeteroGradRequest {
  bool alpha = false;
  bool beta = false;

  static HeteroGradRequest for_kind(NeuronModelKind kind, bool heterogeneous) {
    if (!heterogeneous) return {};
    switch (kind) {
      case NeuronModelKind::IF:
        return {};
      case NeuronModelKind::LIF:
        return {false, true};
      case NeuronModelKind::CubaLif:
        return {true, true};
    }
    return {};
  }
};

/// Reverse pass over one sample's recorded trajectory. Adjoint recursions,
/// iterating t from T-1 down to 0 (hats are adjoints, r[t] the reset mask
/// 1 - Theta(U1[t-1] - theta), recomputed from the recorded membrane):
///
///   readout:  gU2[t] = seed[t] + beta2.*gU2[t+1]
///             gI2[t] = gU2[t] + alpha2.*gI2[t+1]
///   hidden:   gS1[t] = W2' gI2[t] + V' gI1[t+1]
///             gU1[t] = gS1[t].*sigma'(U1[t]-theta) + beta1.*r[t+1].*gU1[t+1]
///             gI1[t] = r[t].*gU1[t] + alpha1.*gI1[t+1]
///
/// The reset mask is a constant in the backward pass (no gradient through
/// the spike that caused it). Weight gradients are the usual outer products;
/// decay gradients chain through alpha = logistic(a) into the raw space.
template <typename Scalar>
Gradients<Scalar> backward_bptt(const ForwardRecord<Scalar>& record,
                                const SpikeRaster& raster,
                                const WeightSet<Scalar>& weights,
                                const NetworkModel<Scalar>& model,
                                const SurrogateConfig<Scalar>& surrogate,
                                const ReadoutLossSeed<Scalar>& seed,
                                const HeteroGradRequest& hetero = {}) {
  if (!record.has_traces())
    throw std::invalid_argument("backward_bptt: record lacks traces; run forward "
                                "with record_traces");
  const Index steps = record.steps();
  const Index n_hidden = weights.input_hidden.rows();
  const Index n_out = weights.hidden_readout.rows();
  if (record.hidden_spikes.cols() != n_hidden ||
      record.readout_membrane.cols() != n_out ||
      raster.channels() != weights.input_hidden.cols() || raster.steps() != steps)
    throw std::invalid_argument("backward_bptt: record/weights/raster mismatch");
  if (static_cast<Index>(seed.argmax_t.size()) != n_out ||
      seed.grad_at_max.size() != n_out)
    throw std::invalid_argument("backward_bptt: loss seed shape mismatch");

  const bool recurrent = weights.has_recurrent();
  const MatrixX<Scalar> inputs = raster.bits.cast<Scalar>();

  Gradients<Scalar> grads;
  grads.input_hidden = MatrixX<Scalar>::Zero(n_hidden, raster.channels());
  if (recurrent) grads.recurrent = MatrixX<Scalar>::Zero(n_hidden, n_hidden);
  grads.hidden_readout = MatrixX<Scalar>::Zero(n_out, n_hidden);

  VectorX<Scalar> d_alpha1, d_beta1, d_alpha2, d_beta2;
  if (hetero.alpha) {
    d_alpha1 = VectorX<Scalar>::Zero(n_hidden);
    d_alpha2 = VectorX<Scalar>::Zero(n_out);
  }
  if (hetero.beta) {
    d_beta1 = VectorX<Scalar>::Zero(n_hidden);
    d_beta2 = VectorX<Scalar>::Zero(n_out);
  }

  VectorX<Scalar> gU1_next = VectorX<Scalar>::Zero(n_hidden);
  VectorX<Scalar> gI1_next = VectorX<Scalar>::Zero(n_hidden);
  VectorX<Scalar> gU2_next = VectorX<Scalar>::Zero(n_out);
  VectorX<Scalar> gI2_next = VectorX<Scalar>::Zero(n_out);

  for (Index t = steps - 1; t >= 0; --t) {
    // readout adjoints
    VectorX<Scalar> gU2 = model.readout.beta.cwiseProduct(gU2_next);
    for (Index i = 0; i < n_out; ++i)
      if (seed.argmax_t[static_cast<std::size_t>(i)] == t) gU2[i] += seed.grad_at_max[i];
    VectorX<Scalar> gI2 = gU2 + model.readout.alpha.cwiseProduct(gI2_next);

    grads.hidden_readout.noalias() += gI2 * record.hidden_spikes.row(t);
    if (t > 0) {
      if (hetero.alpha)
        d_alpha2 += gI2.cwiseProduct(record.readout_current.row(t - 1).transpose());
      if (hetero.beta)
        d_beta2 += gU2.cwiseProduct(record.readout_membrane.row(t - 1).transpose());
    }

    // hidden adjoints
    VectorX<Scalar> gS1 = weights.hidden_readout.transpose() * gI2;
    if (recurrent) gS1.noalias() += weights.recurrent.transpose() * gI1_next;

    VectorX<Scalar> reset_t(n_hidden);       // r[t]  = 1 - Theta(U1[t-1]-theta)
    if (t == 0) {
      reset_t.setOnes();
    } else {
      reset_t = (record.hidden_membrane.row(t - 1).transpose().array() < model.theta)
                    .template cast<Scalar>();
    }
    const VectorX<Scalar> reset_t1 =         // r[t+1] = 1 - Theta(U1[t]-theta)
        (record.hidden_membrane.row(t).transpose().array() < model.theta)
            .template cast<Scalar>();

    VectorX<Scalar> gU1 =
        gS1.cwiseProduct(record.hidden_membrane.row(t)
                             .transpose()
                             .unaryExpr([&](Scalar u) {
                               return surrogate_derivative(u, surrogate, model.theta);
                             }))
        + model.hidden.beta.cwiseProduct(reset_t1).cwiseProduct(gU1_next);
    VectorX<Scalar> gI1 =
        reset_t.cwiseProduct(gU1) + model.hidden.alpha.cwiseProduct(gI1_next);

    grads.input_hidden.noalias() += gI1 * inputs.row(t);
    if (t > 0) {
      if (recurrent)
        grads.recurrent.noalias() += gI1 * record.hidden_spikes.row(t - 1);
      if (hetero.alpha)
        d_alpha1 += gI1.cwiseProduct(record.hidden_current.row(t - 1).transpose());
      if (hetero.beta)
        d_beta1 += gU1.cwiseProduct(
            reset_t.cwiseProduct(record.hidden_membrane.row(t - 1).transpose()));
    }

    gU1_next.swap(gU1);
    gI1_next.swap(gI1);
    gU2_next.swap(gU2);
    gI2_next.swap(gI2);
  }

  // chain rule through the logistic reparameterization: d/da = d/dalpha * alpha(1-alpha)
  auto to_raw = [](const VectorX<Scalar>& d_decay, const VectorX<Scalar>& decay) {
    return d_decay.cwiseProduct(
        decay.cwiseProduct((Scalar(1) - decay.array()).matrix()));
  };
  if (hetero.alpha) {
    grads.hidden_a = to_raw(d_alpha1, model.hidden.alpha);
    grads.readout_a = to_raw(d_alpha2, model.readout.alpha);
  }
  if (hetero.beta) {
    grads.hidden_b = to_raw(d_beta1, model.hidden.beta);
    grads.readout_b = to_raw(d_beta2, model.readout.beta);
  }
  return grads;
}

// ---------------------------------------------------------------------------
// Adamax
// ---------------------------------------------------------------------------

/// One Adamax coordinate-block update (Kingma & Ba, infinity-norm variant):
///   m <- beta1*m + (1-beta1)*g
///   u <- max(beta2*u, |g|)
///   p <- p - (lr / (1 - beta1^step)) * m / (u + eps)
/// `step` counts updates starting at 1.
template <typename Scalar>
void adamax_step(Eigen::Ref<VectorX<Scalar>> params, const VectorX<Scalar>& grad,
                 VectorX<Scalar>& m, VectorX<Scalar>& u, long step, Scalar lr,
                 Scalar beta1, Scalar beta2, Scalar eps) {
  if (params.size() != grad.size() || m.size() != grad.size() || u.size() != grad.size())
    throw std::invalid_argument("adamax_step: shape mismatch");
  m = beta1 * m + (Scalar(1) - beta1) * grad;
  u = (beta2 * u).cwiseMax(grad.cwiseAbs());
  const Scalar correction = Scalar(1) - std::pow(beta1, static_cast<Scalar>(step));
  params -= (lr / correction) * m.cwiseQuotient((u.array() + eps).matrix());
}

template <typename Scalar>
class AdamaxOptimizer {
 public:
  explicit AdamaxOptimizer(Scalar lr, Scalar beta1 = Scalar(0.9),
                           Scalar beta2 = Scalar(0.999), Scalar eps = Scalar(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  /// Applies one update over parallel lists of parameter and gradient views.
  /// Block sizes are fixed on the first call.
  void step(std::vector<Eigen::Map<VectorX<Scalar>>>& params,
            const std::vector<VectorX<Scalar>>& grads) {
    if (params.size() != grads.size())
      throw std::invalid_argument("AdamaxOptimizer: params/grads count mismatch");
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.push_back(VectorX<Scalar>::Zero(p.size()));
        u_.push_back(VectorX<Scalar>::Zero(p.size()));
      }
    }
    if (m_.size() != params.size())
      throw std::invalid_argument("AdamaxOptimizer: block count changed");
    ++step_count_;
    for (std::size_t b = 0; b < params.size(); ++b)
      adamax_step<Scalar>(params[b], grads[b], m_[b], u_[b], step_count_, lr_,
                          beta1_, beta2_, eps_);
  }

  long step_count() const { return step_count_; }

 private:
  Scalar lr_, beta1_, beta2_, eps_;
  long step_count_ = 0;
  std::vector<VectorX<Scalar>> m_, u_;
};

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

template <typename Scalar>
struct TrainConfig {
  Scalar learning_rate = Scalar(5e-3);
  int batch_size = 256;
  int epochs = 50;
  std::uint64_t seed = 1;
  bool heterogeneous = false;
  SurrogateConfig<Scalar> surrogate;
  Scalar adamax_beta1 = Scalar(0.9);
  Scalar adamax_beta2 = Scalar(0.999);
  Scalar adamax_eps = Scalar(1e-8);

  void validate() const {
    if (!(learning_rate > Scalar(0))) throw ConfigError("learning_rate must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    surrogate.validate();
  }
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  double test_accuracy = 0;
  double hidden_spikes_per_sample = 0;  // measured on the test split
  double wall_time_s = 0;
};

template <typename Scalar>
struct TrainResult {
  WeightSet<Scalar> weights;
  NetworkModel<Scalar> model;  // decays reflect heterogeneous training
  HeterogeneousParams<Scalar> hetero;
  std::vector<EpochStats> log;
};

template <typename Scalar>
struct EvalStats {
  double accuracy = 0;
  double hidden_spikes_per_sample = 0;
  std::vector<int> predictions;
};

/// Forward-only pass over a split: accuracy and mean hidden spikes.
template <typename Scalar>
EvalStats<Scalar> evaluate(const RasterDataset& data, const WeightSet<Scalar>& weights,
                           const NetworkModel<Scalar>& model) {
  EvalStats<Scalar> stats;
  if (data.size() == 0) return stats;
  std::size_t correct = 0;
  double spikes = 0;
  stats.predictions.reserve(data.size());
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto record = forward(data.rasters[s], weights, model);
    const int pred = predict(record);
    stats.predictions.push_back(pred);
    if (pred == data.labels[s]) ++correct;
    spikes += static_cast<double>(record.hidden_spike_count());
  }
  stats.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  stats.hidden_spikes_per_sample = spikes / static_cast<double>(data.size());
  return stats;
}

namespace detail {

template <typename Scalar>
std::vector<Eigen::Map<VectorX<Scalar>>> parameter_views(
    WeightSet<Scalar>& weights, HeterogeneousParams<Scalar>& hetero) {
  std::vector<Eigen::Map<VectorX<Scalar>>> views;
  views.emplace_back(weights.input_hidden.data(), weights.input_hidden.size());
  if (weights.has_recurrent())
    views.emplace_back(weights.recurrent.data(), weights.recurrent.size());
  views.emplace_back(weights.hidden_readout.data(), weights.hidden_readout.size());
  for (VectorX<Scalar>* v : {&hetero.hidden_a, &hetero.hidden_b, &hetero.readout_a,
                             &hetero.readout_b}) {
    if (v->size() > 0) views.emplace_back(v->data(), v->size());
  }
  return views;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> gradient_blocks(const Gradients<Scalar>& g,
                                             bool recurrent) {
  std::vector<VectorX<Scalar>> blocks;
  auto flat = [](const MatrixX<Scalar>& m) {
    return VectorX<Scalar>(Eigen::Map<const VectorX<Scalar>>(m.data(), m.size()));
  };
  blocks.push_back(flat(g.input_hidden));
  if (recurrent) blocks.push_back(flat(g.recurrent));
  blocks.push_back(flat(g.hidden_readout));
  for (const VectorX<Scalar>* v : {&g.hidden_a, &g.hidden_b, &g.readout_a, &g.readout_b})
    if (v->size() > 0) blocks.push_back(*v);
  return blocks;
}

}  // namespace detail

using EpochCallback = std::function<void(const EpochStats&)>;

/// Full training run: seeded shuffling, mini-batches, forward -> loss ->
/// BPTT -> Adamax, one log row per epoch (test accuracy and test-split
/// hidden spikes measured after the epoch's updates).
template <typename Scalar>
TrainResult<Scalar> train(const RasterDataset& train_data, const RasterDataset& test_data,
                          const Topology& topo, const NetworkModel<Scalar>& init_model,
                          const TrainConfig<Scalar>& cfg,
                          const EpochCallback& on_epoch = {}) {
  cfg.validate();
  topo.validate();
  if (train_data.size() == 0) throw ConfigError("train: empty training split");
  if (train_data.channel_count != topo.inputs)
    throw ConfigError("train: dataset channels (" +
                      std::to_string(train_data.channel_count) +
                      ") do not match topology inputs (" + std::to_string(topo.inputs) +
                      ")");
  if (train_data.class_count > topo.outputs)
    throw ConfigError("train: more classes than readout neurons");

  TrainResult<Scalar> result;
  result.weights = init_weights<Scalar>(topo, cfg.seed);
  result.model = init_model;
  if (cfg.heterogeneous) {
    result.hetero = HeterogeneousParams<Scalar>::from_model(result.model);
    result.hetero.materialize(result.model);  // identity at init
  }
  const HeteroGradRequest hetero_req =
      HeteroGradRequest::for_kind(result.model.kind, cfg.heterogeneous);

  AdamaxOptimizer<Scalar> optimizer(cfg.learning_rate, cfg.adamax_beta1,
                                    cfg.adamax_beta2, cfg.adamax_eps);
  const ForwardOptions train_fwd{.record_traces = true, .relaxed = false,
                                 .steepness = static_cast<double>(cfg.surrogate.steepness)};

  std::vector<std::size_t> order(train_data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 0x1000 + std::uint64_t(epoch)));
    deterministic_shuffle(order, shuffle_rng);

    double loss_sum = 0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch_n =
          std::min<std::size_t>(cfg.batch_size, order.size() - cursor);
      std::vector<ForwardRecord<Scalar>> records;
      std::vector<int> labels;
      records.reserve(batch_n);
      labels.reserve(batch_n);
      for (std::size_t k = 0; k < batch_n; ++k) {
        const std::size_t idx = order[cursor + k];
        records.push_back(
            forward(train_data.rasters[idx], result.weights, result.model, train_fwd));
        labels.push_back(train_data.labels[idx]);
      }

      const LossValue<Scalar> loss = loss_max_over_time(records, labels);
      if (!std::isfinite(static_cast<double>(loss.loss)))
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
      loss_sum += static_cast<double>(loss.loss) * static_cast<double>(batch_n);

      Gradients<Scalar> batch_grads =
          Gradients<Scalar>::zeros_like(result.weights, result.hetero);
      for (std::size_t k = 0; k < batch_n; ++k) {
        const std::size_t idx = order[cursor + k];
        batch_grads.accumulate(backward_bptt(records[k], train_data.rasters[idx],
                                             result.weights, result.model,
                                             cfg.surrogate, loss.seeds[k], hetero_req));
      }

      auto params = detail::parameter_views(result.weights, result.hetero);
      const auto grads =
          detail::gradient_blocks(batch_grads, result.weights.has_recurrent());
      optimizer.step(params, grads);
      if (cfg.heterogeneous) result.hetero.materialize(result.model);

      cursor += batch_n;
    }

    const auto eval = evaluate(test_data, result.weights, result.model);
    const auto t1 = std::chrono::steady_clock::now();
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train_data.size());
    stats.test_accuracy = eval.accuracy;
    stats.hidden_spikes_per_sample = eval.hidden_spikes_per_sample;
    stats.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    result.log.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Time-constant grid sweep
// ---------------------------------------------------------------------------

struct SweepCell {
  double tau_mem_ms = 0;
  double tau_syn_ms = 0;
  std::vector<double> accuracies;         // one per seed
  std::vector<double> spikes_per_sample;  // one per seed
  double mean_accuracy = 0;
  double std_accuracy = 0;  // population std over seeds
  double mean_spikes_per_sample = 0;
};

struct SweepGrid {
  std::vector<double> tau_mem_ms;
  std::vector<double> tau_syn_ms;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int jobs = 1;
};

template <typename Scalar>
std::vector<SweepCell> grid_sweep(const RasterDataset& train_data,
                                  const RasterDataset& test_data, const Topology& topo,
                                  Scalar dt_ms, const TrainConfig<Scalar>& base_cfg,
                                  const SweepGrid& grid);

}  // namespace spikegrad

#include "spikegrad/training_sweep.hpp"
