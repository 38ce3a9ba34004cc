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


#ifndef SPIKESTAB_NETWORK_H_
#define SPIKESTAB_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikestab/core.h"
#include "spikestab/neuron.h"

namespace spikestab {

// Feed-forward L-layer spiking network. widths = [n_0, ..., n_L]; layer l
// (1-based) owns a weight matrix of shape n_l x n_{l-1}.
struct NetworkConfig {
  std::vector<std::size_t> widths;
  NeuronParams params;
  std::vector<Matrix> weights;

  std::size_t depth() const { return weights.size(); }
  std::size_t input_dim() const { return widths.front(); }
  std::size_t classes() const { return widths.back(); }
  // d = sum_l n_l * n_{l-1}.
  std::size_t parameter_count() const;

  // Throws std::invalid_argument on inconsistent widths/shapes/params.
  void Validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

void ValidateWidths(const std::vector<std::size_t>& widths);

// Entries of W^(l) are i.i.d. N(0, 1/n_{l-1}); layer l draws from seed.child(l).
NetworkConfig InitRandom(const std::vector<std::size_t>& widths, const NeuronParams& params,
                         const SeedSpec& seed);

// All-zero weights: no neuron ever crosses a positive threshold.
NetworkConfig ZeroNetwork(const std::vector<std::size_t>& widths, const NeuronParams& params);

// Spikes (and optionally potentials) of one layer, stored time-major:
// entry [t * width + i] belongs to neuron i at step t.
struct LayerTrace {
  std::size_t width = 0;
  std::vector<std::int8_t> spikes;
  std::vector<double> potentials;

  std::int8_t spike(std::size_t t, std::size_t i) const { return spikes[t * width + i]; }
  std::span<const std::int8_t> at(std::size_t t) const {
    return {spikes.data() + t * width, width};
  }
};

struct ForwardRecord {
  std::size_t latency = 0;
  // layers[0] holds the input spikes s^(0)_t = x_t; layers[l] is layer l.
  std::vector<LayerTrace> layers;
  // Per output neuron: sum over t of s^(L)_{t,i}.
  std::vector<long> spike_counts;

  SpikeTrain train(std::size_t layer, std::size_t neuron) const;
  const LayerTrace& output() const { return layers.back(); }
};

struct ForwardOptions {
  bool record_potentials = true;
  bool record_hidden = true;  // keep every layer's spikes, not just the output
};

// Time-synchronous evaluation: at step t, layer l consumes layer l-1's spikes
// from the same t.
ForwardRecord Forward(const NetworkConfig& net, const InputSequence& inputs,
                      const ForwardOptions& options = {});

struct Classification {
  std::size_t predicted_class = 0;
  std::vector<long> counts;
  bool tie = false;
};

// Argmax with lowest-index tie-breaking; `tie` is set when the maximum is
// attained more than once.
Classification ArgmaxCounts(std::span<const long> counts);
Classification Classify(const NetworkConfig& net, const InputSequence& inputs);

// Binary classifier view of a network with n_L = 2 under static encoding:
// class 0 maps to +1, class 1 to -1.
int BinaryLabel(const NetworkConfig& net, const HypercubePoint& x);

}  // namespace spikestab

#endif  // SPIKESTAB_NETWORK_H_
