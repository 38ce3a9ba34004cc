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


#ifndef SPIKESTAB_NEURON_H_
#define SPIKESTAB_NEURON_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikestab/core.h"

namespace spikestab {

enum class Alphabet {
  kSigned,     // spikes in {-1,+1}, reset (theta/2)(s_prev+1)
  kHeaviside,  // spikes in {0,1}, reset theta * s_prev
};

std::string ToString(Alphabet alphabet);
Alphabet ParseAlphabet(const std::string& name);

struct NeuronParams {
  double beta = 1.0;
  double theta = 0.5;
  std::size_t latency = 1;
  Alphabet alphabet = Alphabet::kSigned;

  // Throws std::invalid_argument unless 0 <= beta <= 1, theta >= 0, T >= 1.
  void Validate() const;

  std::int8_t no_spike() const { return alphabet == Alphabet::kSigned ? -1 : 0; }
  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

struct NeuronState {
  double u = 0.0;
  std::int8_t s_prev = -1;
  std::size_t t = 0;

  static NeuronState Initial(const NeuronParams& params) {
    return NeuronState{0.0, params.no_spike(), 0};
  }
};

struct SpikeTrain {
  std::vector<std::int8_t> spikes;
  std::vector<double> potentials;
};

// Membrane update shared by every simulator path so that all of them round
// identically. Returns the new potential.
inline double Integrate(double u_prev, std::int8_t s_prev, double drive,
                        const NeuronParams& params) {
  const double reset = params.alphabet == Alphabet::kSigned
                           ? (params.theta / 2.0) * (s_prev + 1)
                           : params.theta * s_prev;
  return (params.beta * u_prev + drive) - reset;
}

// sign(u - theta) with sign(0) = +1, or the Heaviside step u >= theta.
inline std::int8_t Fire(double u, const NeuronParams& params) {
  const bool fires = u - params.theta >= 0.0;
  if (params.alphabet == Alphabet::kSigned) return fires ? 1 : -1;
  return fires ? 1 : 0;
}

// Synaptic drive w . s summed in ascending index order.
double SynapticDrive(std::span<const double> w, std::span<const std::int8_t> s);

struct StepResult {
  NeuronState state;
  std::int8_t spike;
};

StepResult Step(const NeuronState& state, double drive, const NeuronParams& params);

// Simulates one neuron from the zero state over all T steps of `inputs`.
SpikeTrain Run(const NeuronParams& params, std::span<const double> w,
               const InputSequence& inputs);

// Closed-form integrate-and-fire recursion from cumulative input sums and
// cumulative spike counts. Requires beta == 1 and the signed alphabet.
SpikeTrain RunClosedForm(const NeuronParams& params, std::span<const double> w,
                         const InputSequence& inputs);

}  // namespace spikestab

#endif  // SPIKESTAB_NEURON_H_
