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


#include "spikestab/neuron.h"

#include <stdexcept>

namespace spikestab {

std::string ToString(Alphabet alphabet) {
  return alphabet == Alphabet::kSigned ? "signed" : "heaviside";
}

Alphabet ParseAlphabet(const std::string& name) {
  if (name == "signed") return Alphabet::kSigned;
  if (name == "heaviside") return Alphabet::kHeaviside;
  throw std::invalid_argument("unknown alphabet '" + name + "' (expected signed|heaviside)");
}

void NeuronParams::Validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  if (latency == 0) throw std::invalid_argument("latency T must be >= 1");
}

double SynapticDrive(std::span<const double> w, std::span<const std::int8_t> s) {
  if (w.size() != s.size()) {
    throw DimensionError("synaptic drive: weight length " + std::to_string(w.size()) +
                         " vs input length " + std::to_string(s.size()));
  }
  // w * (+-1) is exact, so any path that adds the same terms in ascending j
  // (the network's layer kernel included) rounds identically.
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * static_cast<double>(s[j]);
  return sum;
}

StepResult Step(const NeuronState& state, double drive, const NeuronParams& params) {
  const double u = Integrate(state.u, state.s_prev, drive, params);
  const std::int8_t s = Fire(u, params);
  return StepResult{NeuronState{u, s, state.t + 1}, s};
}

SpikeTrain Run(const NeuronParams& params, std::span<const double> w,
               const InputSequence& inputs) {
  params.Validate();
  if (w.size() != inputs.dimension()) {
    throw DimensionError("neuron weights have length " + std::to_string(w.size()) +
                         " but inputs have dimension " + std::to_string(inputs.dimension()));
  }
  SpikeTrain train;
  train.spikes.reserve(inputs.steps());
  train.potentials.reserve(inputs.steps());
  NeuronState state = NeuronState::Initial(params);
  double drive = 0.0;
  for (std::size_t t = 0; t < inputs.steps(); ++t) {
    if (t == 0 || inputs.encoding() == Encoding::kDynamic) {
      drive = SynapticDrive(w, inputs.at(t).coords());
    }
    const StepResult r = Step(state, drive, params);
    state = r.state;
    train.spikes.push_back(r.spike);
    train.potentials.push_back(state.u);
  }
  return train;
}

SpikeTrain RunClosedForm(const NeuronParams& params, std::span<const double> w,
                         const InputSequence& inputs) {
  params.Validate();
  if (params.beta != 1.0) throw std::invalid_argument("closed form requires beta == 1");
  if (params.alphabet != Alphabet::kSigned) {
    throw std::invalid_argument("closed form requires the signed alphabet");
  }
  const std::size_t n = inputs.dimension();
  if (w.size() != n) {
    throw DimensionError("neuron weights have length " + std::to_string(w.size()) +
                         " but inputs have dimension " + std::to_string(n));
  }
  SpikeTrain train;
  std::vector<long> cumulative(n, 0);
  long fired = 0;  // sum over k < t of (s_k + 1) / 2, with s_0 = -1
  for (std::size_t t = 0; t < inputs.steps(); ++t) {
    const auto x = inputs.at(t).coords();
    for (std::size_t j = 0; j < n; ++j) cumulative[j] += x[j];
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += w[j] * static_cast<double>(cumulative[j]);
    const double u = dot - params.theta * static_cast<double>(fired);
    const std::int8_t s = u - params.theta >= 0.0 ? 1 : -1;
    train.spikes.push_back(s);
    train.potentials.push_back(u);
    if (s == 1) ++fired;
  }
  return train;
}

}  // namespace spikestab
