// Copyright 2026 The spikestab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spikestab/network.h"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace spikestab {

namespace {

constexpr std::size_t kLane = 4;
constexpr std::size_t kRowBlock = 4;

// Two doubles updated lane by lane with plain IEEE operations.
typedef double Pair __attribute__((vector_size(2 * sizeof(double))));

std::size_t PadSteps(std::size_t steps) { return (steps + kLane - 1) / kLane * kLane; }

// out[i * padded + t] = sum_j W(i, j) * in[j * padded + t] for every step t,
// where `in` holds +-1/0 spikes as doubles. Every (i, t) entry is summed over
// j in ascending order, which matches SynapticDrive on row i bit for bit; the
// weight matrix is streamed once for all steps.
void LayerDrive(const Matrix& w, const std::vector<double>& in, std::size_t padded,
                std::vector<double>& out) {
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  out.assign(rows * padded, 0.0);
  std::size_t i = 0;
  for (; i + kRowBlock <= rows; i += kRowBlock) {
    const double* r0 = w.row(i).data();
    const double* r1 = w.row(i + 1).data();
    const double* r2 = w.row(i + 2).data();
    const double* r3 = w.row(i + 3).data();
    for (std::size_t t0 = 0; t0 < padded; t0 += kLane) {
      Pair a0 = {}, b0 = {}, a1 = {}, b1 = {}, a2 = {}, b2 = {}, a3 = {}, b3 = {};
      const double* sj = in.data() + t0;
      for (std::size_t j = 0; j < cols; ++j, sj += padded) {
        Pair lo, hi;
        std::memcpy(&lo, sj, sizeof(Pair));
        std::memcpy(&hi, sj + 2, sizeof(Pair));
        a0 += r0[j] * lo;
        b0 += r0[j] * hi;
        a1 += r1[j] * lo;
        b1 += r1[j] * hi;
        a2 += r2[j] * lo;
        b2 += r2[j] * hi;
        a3 += r3[j] * lo;
        b3 += r3[j] * hi;
      }
      double* o = out.data() + i * padded + t0;
      std::memcpy(o, &a0, sizeof(Pair));
      std::memcpy(o + 2, &b0, sizeof(Pair));
      std::memcpy(o + padded, &a1, sizeof(Pair));
      std::memcpy(o + padded + 2, &b1, sizeof(Pair));
      std::memcpy(o + 2 * padded, &a2, sizeof(Pair));
      std::memcpy(o + 2 * padded + 2, &b2, sizeof(Pair));
      std::memcpy(o + 3 * padded, &a3, sizeof(Pair));
      std::memcpy(o + 3 * padded + 2, &b3, sizeof(Pair));
    }
  }
  for (; i < rows; ++i) {
    const double* r = w.row(i).data();
    for (std::size_t t0 = 0; t0 < padded; t0 += kLane) {
      double a[kLane] = {};
      for (std::size_t j = 0; j < cols; ++j) {
        const double* sj = in.data() + j * padded + t0;
        for (std::size_t k = 0; k < kLane; ++k) a[k] += r[j] * sj[k];
      }
      for (std::size_t k = 0; k < kLane; ++k) out[i * padded + t0 + k] = a[k];
    }
  }
}

}  // namespace

std::size_t NetworkConfig::parameter_count() const {
  std::size_t d = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) d += widths[l] * widths[l - 1];
  return d;
}

void ValidateWidths(const std::vector<std::size_t>& widths) {
  if (widths.size() < 2) {
    throw std::invalid_argument("network needs at least one layer: widths [n_0, ..., n_L] with L >= 1");
  }
  for (std::size_t w : widths) {
    if (w == 0) throw std::invalid_argument("layer widths must be >= 1");
  }
}

void NetworkConfig::Validate() const {
  ValidateWidths(widths);
  params.Validate();
  if (weights.size() + 1 != widths.size()) {
    throw std::invalid_argument("network has " + std::to_string(weights.size()) +
                                " weight matrices for " + std::to_string(widths.size() - 1) +
                                " layers");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != widths[l + 1] || weights[l].cols() != widths[l]) {
      throw std::invalid_argument("weight matrix of layer " + std::to_string(l + 1) +
                                  " has the wrong shape");
    }
  }
}

NetworkConfig InitRandom(const std::vector<std::size_t>& widths, const NeuronParams& params,
                         const SeedSpec& seed) {
  ValidateWidths(widths);
  params.Validate();
  NetworkConfig net{widths, params, {}};
  for (std::size_t l = 1; l < widths.size(); ++l) {
    const double variance = 1.0 / static_cast<double>(widths[l - 1]);
    net.weights.push_back(GaussianWeights(widths[l], widths[l - 1], variance, seed.child(l)));
  }
  return net;
}

NetworkConfig ZeroNetwork(const std::vector<std::size_t>& widths, const NeuronParams& params) {
  ValidateWidths(widths);
  params.Validate();
  NetworkConfig net{widths, params, {}};
  for (std::size_t l = 1; l < widths.size(); ++l) net.weights.emplace_back(widths[l], widths[l - 1]);
  return net;
}

SpikeTrain ForwardRecord::train(std::size_t layer, std::size_t neuron) const {
  const LayerTrace& trace = layers.at(layer);
  if (neuron >= trace.width) throw std::out_of_range("neuron index out of range");
  SpikeTrain out;
  for (std::size_t t = 0; t < latency; ++t) {
    out.spikes.push_back(trace.spike(t, neuron));
    if (!trace.potentials.empty()) out.potentials.push_back(trace.potentials[t * trace.width + neuron]);
  }
  return out;
}

ForwardRecord Forward(const NetworkConfig& net, const InputSequence& inputs,
                      const ForwardOptions& options) {
  net.Validate();
  if (inputs.dimension() != net.input_dim()) {
    throw DimensionError("network expects inputs of dimension " + std::to_string(net.input_dim()) +
                         ", got " + std::to_string(inputs.dimension()));
  }
  if (inputs.steps() != net.params.latency) {
    throw DimensionError("network latency is " + std::to_string(net.params.latency) +
                         " but the input sequence has " + std::to_string(inputs.steps()) + " steps");
  }
  const NeuronParams& params = net.params;
  const std::size_t steps = inputs.steps();
  const std::size_t depth = net.depth();

  ForwardRecord record;
  record.latency = steps;
  record.layers.resize(depth + 1);
  for (std::size_t l = 0; l <= depth; ++l) {
    LayerTrace& trace = record.layers[l];
    trace.width = net.widths[l];
    const bool keep = l == 0 || l == depth || options.record_hidden;
    if (keep) trace.spikes.resize(steps * trace.width);
    if (l > 0 && keep && options.record_potentials) trace.potentials.resize(steps * trace.width);
  }

  // Layers are evaluated one at a time over all steps; `in` holds the spikes
  // of the layer below, neuron-major with `padded` slots per neuron.
  const bool shared_first = inputs.encoding() == Encoding::kStatic;
  std::size_t padded = PadSteps(shared_first ? 1 : steps);
  std::vector<double> in(net.widths[0] * padded, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto x = inputs.at(t).coords();
    std::copy(x.begin(), x.end(), record.layers[0].spikes.begin() + t * net.widths[0]);
    if (t > 0 && shared_first) continue;
    for (std::size_t j = 0; j < x.size(); ++j) in[j * padded + t] = x[j];
  }

  std::vector<double> drive;
  for (std::size_t l = 1; l <= depth; ++l) {
    LayerDrive(net.weights[l - 1], in, padded, drive);
    const bool constant_drive = l == 1 && shared_first;
    const std::size_t in_padded = padded;
    padded = PadSteps(steps);
    const std::size_t width = net.widths[l];
    in.assign(width * padded, 0.0);
    LayerTrace& trace = record.layers[l];
    for (std::size_t i = 0; i < width; ++i) {
      double u = 0.0;
      std::int8_t s = params.no_spike();
      for (std::size_t t = 0; t < steps; ++t) {
        u = Integrate(u, s, drive[i * in_padded + (constant_drive ? 0 : t)], params);
        s = Fire(u, params);
        in[i * padded + t] = s;
        if (!trace.spikes.empty()) trace.spikes[t * width + i] = s;
        if (!trace.potentials.empty()) trace.potentials[t * width + i] = u;
      }
    }
  }
  record.spike_counts.assign(net.classes(), 0);
  for (std::size_t i = 0; i < net.classes(); ++i) {
    for (std::size_t t = 0; t < steps; ++t) record.spike_counts[i] += static_cast<long>(in[i * padded + t]);
  }
  return record;
}

Classification ArgmaxCounts(std::span<const long> counts) {
  if (counts.empty()) throw std::invalid_argument("argmax over an empty count vector");
  Classification c;
  c.counts.assign(counts.begin(), counts.end());
  const auto best = std::max_element(counts.begin(), counts.end());
  c.predicted_class = static_cast<std::size_t>(best - counts.begin());
  c.tie = std::count(counts.begin(), counts.end(), *best) > 1;
  return c;
}

Classification Classify(const NetworkConfig& net, const InputSequence& inputs) {
  ForwardOptions options;
  options.record_potentials = false;
  options.record_hidden = false;
  const ForwardRecord record = Forward(net, inputs, options);
  return ArgmaxCounts(record.spike_counts);
}

int BinaryLabel(const NetworkConfig& net, const HypercubePoint& x) {
  if (net.classes() != 2) throw std::invalid_argument("binary label needs n_L = 2");
  const Classification c = Classify(net, InputSequence::Static(x, net.params.latency));
  return c.predicted_class == 0 ? 1 : -1;
}

}  // namespace spikestab
