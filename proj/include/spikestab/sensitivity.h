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


#ifndef SPIKESTAB_SENSITIVITY_H_
#define SPIKESTAB_SENSITIVITY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "spikestab/core.h"
#include "spikestab/fourier.h"
#include "spikestab/network.h"
#include "spikestab/neuron.h"

namespace spikestab {

// What a classifier reports for one input sequence.
struct Outcome {
  std::size_t label = 0;
  bool tie = false;
  // Output spikes per step, time-major with `step_width` entries per step.
  // Empty for classifiers without a time dimension.
  std::vector<std::int8_t> steps;
  std::size_t step_width = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Outcome Evaluate(const InputSequence& inputs) const = 0;
};

// A distribution over classifiers; Draw must be a pure function of the seed.
class ClassifierFamily {
 public:
  virtual ~ClassifierFamily() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::size_t latency() const = 0;
  virtual std::unique_ptr<Classifier> Draw(const SeedSpec& seed) const = 0;
};

// Random L-layer networks with the argmax spike-count classifier.
class NetworkFamily : public ClassifierFamily {
 public:
  NetworkFamily(std::vector<std::size_t> widths, NeuronParams params);
  std::size_t dimension() const override { return widths_.front(); }
  std::size_t latency() const override { return params_.latency; }
  std::unique_ptr<Classifier> Draw(const SeedSpec& seed) const override;

 private:
  std::vector<std::size_t> widths_;
  NeuronParams params_;
};

// A single neuron with w ~ N(0, I/n). Its label is the spike at the last
// step (+1 -> 0, otherwise 1) and `steps` carries the full train.
class NeuronFamily : public ClassifierFamily {
 public:
  NeuronFamily(std::size_t n, NeuronParams params);
  std::size_t dimension() const override { return n_; }
  std::size_t latency() const override { return params_.latency; }
  std::unique_ptr<Classifier> Draw(const SeedSpec& seed) const override;

 private:
  std::size_t n_;
  NeuronParams params_;
};

using BooleanFunction = std::function<int(const HypercubePoint&)>;

// A fixed Boolean function viewed as a degenerate family (every draw is the
// same function); label 0 for +1 and 1 for -1, evaluated on step 0.
class FunctionFamily : public ClassifierFamily {
 public:
  FunctionFamily(std::size_t n, BooleanFunction f, std::size_t latency = 1);
  std::size_t dimension() const override { return n_; }
  std::size_t latency() const override { return latency_; }
  std::unique_ptr<Classifier> Draw(const SeedSpec& seed) const override;

 private:
  std::size_t n_;
  BooleanFunction f_;
  std::size_t latency_;
};

BooleanFunction Dictator(std::size_t coordinate = 0);
BooleanFunction Parity();
BooleanFunction Majority();

struct SensitivityEstimate {
  double estimate = 0.0;  // flips / trials
  long trials = 0;
  double std_error = 0.0;
  PerturbationModel model;
  long flips = 0;
  // Flips in which either side's argmax was tied.
  long ties = 0;
  // Per step t: trials whose output spikes at t differ.
  std::vector<long> step_flips;
  double wilson_low = 0.0;
  double wilson_high = 0.0;

  double stability() const { return 1.0 - 2.0 * estimate; }
  double estimate_excluding_ties() const;
  // t runs from 1 to the latency; step_flips[t - 1] holds the count.
  double step_estimate(std::size_t t) const;
  double step_std_error(std::size_t t) const;
};

struct EnsOptions {
  std::size_t n_weights = 10;
  std::size_t n_inputs = 100;
  std::size_t n_perturbations = 100;
  Encoding encoding = Encoding::kStatic;
  std::size_t jobs = 1;
};

// Monte Carlo estimate of P[f_W(x) != f_W(x (.) xi)] over the product of
// weight draws, data points and perturbations. Streams: weights
// {kWeights, w}; data {kData, i}; perturbations {kPerturbation, i, j}.
SensitivityEstimate EnsMonteCarlo(const ClassifierFamily& family, const PerturbationModel& model,
                                  const EnsOptions& options, const SeedSpec& seed);

// Normal-approximation standard error and Wilson score interval (z = 1.96).
double BinomialStdError(long hits, long trials);
std::pair<double, double> WilsonInterval(long hits, long trials, double z = 1.96);

struct ProbabilityEstimate {
  double p = 0.0;
  long hits = 0;
  long trials = 0;
  double std_error = 0.0;
};

// P_w[s_t(x) != s_t(y)] for one neuron with w ~ N(0, I/n); t is 1-based.
ProbabilityEstimate FlipProbabilitySingle(const NeuronParams& params, const InputSequence& x,
                                          const InputSequence& y, std::size_t draws,
                                          std::size_t t, const SeedSpec& seed);
// P_w[s_k(x) != s_k(y) for some k <= T].
ProbabilityEstimate AnyStepFlipProbability(const NeuronParams& params, const InputSequence& x,
                                           const InputSequence& y, std::size_t draws,
                                           const SeedSpec& seed);

inline constexpr double kMaxEnumeration = 1e7;

// Raised when an exact enumeration would exceed kMaxEnumeration subsets.
class EnumerationTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double BinomialCoefficient(std::size_t n, std::size_t k);

// N_h(x; f): inputs at Hamming distance exactly h from x on which f differs.
std::uint64_t NhExact(const BooleanFunction& f, const HypercubePoint& x, std::size_t h);

struct NhProfile {
  std::size_t n = 0;
  // values[h] estimates E[N_h], h = 0..n.
  std::vector<double> values;
  std::vector<double> std_errors;
  bool exact = false;
};

// E_x[N_h(x; f)] for every h, by enumerating all pairs of the table.
NhProfile NhProfileExact(const TruthTable& table);
// Average of exact per-draw profiles.
NhProfile ExpectedNhProfile(const TableSampler& sampler, std::size_t draws, const SeedSpec& seed,
                            std::size_t jobs = 1);
// C(n, h) * P[f(x) != f(y)] with y at distance h, estimated per listed h.
NhProfile NhProfileMonteCarlo(const ClassifierFamily& family, const std::vector<std::size_t>& hs,
                              const EnsOptions& options, const SeedSpec& seed);

// sum_h E[N_h] nu^h (1 - nu)^(n - h). Requires an exact, complete profile.
double EnsFromNh(const NhProfile& profile, double nu);

// sum_x sum_y 2^-n nu^d (1 - nu)^(n - d) [f(x) != f(y)] with d = d_H(x, y).
double ExhaustiveNs(const TruthTable& table, double nu);

struct DisagreementProfile {
  // counts[l] = number of layer-l neurons whose spikes differ at some step;
  // counts[0] is the input layer.
  std::vector<std::size_t> counts;
};

DisagreementProfile Disagreement(const NetworkConfig& net, const InputSequence& x,
                                 const InputSequence& y);

}  // namespace spikestab

#endif  // SPIKESTAB_SENSITIVITY_H_
