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


#include "spikestab/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spikestab/parallel.h"

namespace spikestab {

namespace {

class NetworkClassifier : public Classifier {
 public:
  explicit NetworkClassifier(NetworkConfig net) : net_(std::move(net)) {}

  Outcome Evaluate(const InputSequence& inputs) const override {
    ForwardOptions options;
    options.record_potentials = false;
    options.record_hidden = false;
    ForwardRecord record = Forward(net_, inputs, options);
    const Classification c = ArgmaxCounts(record.spike_counts);
    Outcome out;
    out.label = c.predicted_class;
    out.tie = c.tie;
    out.step_width = net_.classes();
    out.steps = std::move(record.layers.back().spikes);
    return out;
  }

 private:
  NetworkConfig net_;
};

class NeuronClassifier : public Classifier {
 public:
  NeuronClassifier(std::vector<double> w, NeuronParams params)
      : w_(std::move(w)), params_(params) {}

  Outcome Evaluate(const InputSequence& inputs) const override {
    SpikeTrain train = Run(params_, w_, inputs);
    Outcome out;
    out.label = train.spikes.back() == 1 ? 0 : 1;
    out.step_width = 1;
    out.steps = std::move(train.spikes);
    return out;
  }

 private:
  std::vector<double> w_;
  NeuronParams params_;
};

class FunctionClassifier : public Classifier {
 public:
  explicit FunctionClassifier(const BooleanFunction* f) : f_(f) {}

  Outcome Evaluate(const InputSequence& inputs) const override {
    Outcome out;
    out.label = (*f_)(inputs.at(0)) == 1 ? 0 : 1;
    return out;
  }

 private:
  const BooleanFunction* f_;
};

InputSequence SampleInput(const ClassifierFamily& family, Encoding encoding, const SeedSpec& seed) {
  auto engine = seed.engine();
  if (encoding == Encoding::kStatic) {
    return InputSequence::Static(SampleUniformPoint(family.dimension(), engine), family.latency());
  }
  std::vector<HypercubePoint> steps;
  for (std::size_t t = 0; t < family.latency(); ++t) {
    steps.push_back(SampleUniformPoint(family.dimension(), engine));
  }
  return InputSequence::Dynamic(std::move(steps));
}

struct FlipCounts {
  long trials = 0;
  long flips = 0;
  long ties = 0;
  std::vector<long> step_flips;

  void Add(const Outcome& x, const Outcome& y) {
    ++trials;
    if (x.label != y.label) {
      ++flips;
      if (x.tie || y.tie) ++ties;
    }
    if (x.step_width == 0 || x.steps.size() != y.steps.size()) return;
    const std::size_t steps = x.steps.size() / x.step_width;
    if (step_flips.size() < steps) step_flips.resize(steps, 0);
    for (std::size_t t = 0; t < steps; ++t) {
      const auto first = x.steps.begin() + static_cast<std::ptrdiff_t>(t * x.step_width);
      if (!std::equal(first, first + static_cast<std::ptrdiff_t>(x.step_width),
                      y.steps.begin() + static_cast<std::ptrdiff_t>(t * x.step_width))) {
        ++step_flips[t];
      }
    }
  }

  void Merge(const FlipCounts& other) {
    trials += other.trials;
    flips += other.flips;
    ties += other.ties;
    if (step_flips.size() < other.step_flips.size()) step_flips.resize(other.step_flips.size(), 0);
    for (std::size_t t = 0; t < other.step_flips.size(); ++t) step_flips[t] += other.step_flips[t];
  }
};

void CheckTableForNh(const TruthTable& table) {
  table.Validate();
  if (table.n > 16) throw EnumerationTooLarge("exhaustive pair enumeration needs n <= 16");
}

}  // namespace

NetworkFamily::NetworkFamily(std::vector<std::size_t> widths, NeuronParams params)
    : widths_(std::move(widths)), params_(params) {
  ValidateWidths(widths_);
  params_.Validate();
}

std::unique_ptr<Classifier> NetworkFamily::Draw(const SeedSpec& seed) const {
  return std::make_unique<NetworkClassifier>(InitRandom(widths_, params_, seed));
}

NeuronFamily::NeuronFamily(std::size_t n, NeuronParams params) : n_(n), params_(params) {
  if (n == 0) throw std::invalid_argument("neuron family needs n >= 1");
  params_.Validate();
}

std::unique_ptr<Classifier> NeuronFamily::Draw(const SeedSpec& seed) const {
  const Matrix w = GaussianWeights(1, n_, 1.0 / static_cast<double>(n_), seed);
  const auto row = w.row(0);
  return std::make_unique<NeuronClassifier>(std::vector<double>(row.begin(), row.end()), params_);
}

FunctionFamily::FunctionFamily(std::size_t n, BooleanFunction f, std::size_t latency)
    : n_(n), f_(std::move(f)), latency_(latency) {
  if (n == 0 || latency == 0) throw std::invalid_argument("function family needs n, T >= 1");
}

std::unique_ptr<Classifier> FunctionFamily::Draw(const SeedSpec&) const {
  return std::make_unique<FunctionClassifier>(&f_);
}

BooleanFunction Dictator(std::size_t coordinate) {
  return [coordinate](const HypercubePoint& x) { return static_cast<int>(x[coordinate]); };
}

BooleanFunction Parity() {
  return [](const HypercubePoint& x) {
    int p = 1;
    for (std::int8_t c : x.coords()) p *= c;
    return p;
  };
}

BooleanFunction Majority() {
  return [](const HypercubePoint& x) {
    int sum = 0;
    for (std::int8_t c : x.coords()) sum += c;
    return sum >= 0 ? 1 : -1;
  };
}

double SensitivityEstimate::estimate_excluding_ties() const {
  return trials == 0 ? 0.0 : static_cast<double>(flips - ties) / static_cast<double>(trials);
}

double SensitivityEstimate::step_estimate(std::size_t t) const {
  if (t == 0) throw std::out_of_range("time steps start at 1");
  return trials == 0 ? 0.0 : static_cast<double>(step_flips.at(t - 1)) / static_cast<double>(trials);
}

double SensitivityEstimate::step_std_error(std::size_t t) const {
  if (t == 0) throw std::out_of_range("time steps start at 1");
  return BinomialStdError(step_flips.at(t - 1), trials);
}

double BinomialStdError(long hits, long trials) {
  if (trials <= 0) return 0.0;
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::pair<double, double> WilsonInterval(long hits, long trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SensitivityEstimate EnsMonteCarlo(const ClassifierFamily& family, const PerturbationModel& model,
                                  const EnsOptions& options, const SeedSpec& seed) {
  if (options.n_weights == 0 || options.n_inputs == 0 || options.n_perturbations == 0) {
    throw std::invalid_argument("ENS estimation needs at least one weight, input and perturbation");
  }
  model.Validate(family.dimension());
  const std::size_t units = options.n_weights * options.n_inputs;
  std::vector<FlipCounts> partial(std::max<std::size_t>(1, std::min(options.jobs, units)));

  ParallelFor(units, options.jobs, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    FlipCounts& counts = partial[worker];
    std::unique_ptr<Classifier> classifier;
    std::size_t current = options.n_weights;
    for (std::size_t unit = begin; unit < end; ++unit) {
      const std::size_t w = unit / options.n_inputs;
      const std::size_t i = unit % options.n_inputs;
      if (w != current) {
        classifier = family.Draw(seed.child({streams::kWeights, w}));
        current = w;
      }
      const InputSequence x = SampleInput(family, options.encoding, seed.child({streams::kData, i}));
      const Outcome fx = classifier->Evaluate(x);
      for (std::size_t j = 0; j < options.n_perturbations; ++j) {
        const InputSequence y = Perturb(x, model, seed.child({streams::kPerturbation, i, j}));
        counts.Add(fx, classifier->Evaluate(y));
      }
    }
  });

  FlipCounts total;
  for (const auto& p : partial) total.Merge(p);
  SensitivityEstimate est;
  est.model = model;
  est.trials = total.trials;
  est.flips = total.flips;
  est.ties = total.ties;
  est.step_flips = total.step_flips;
  est.estimate = static_cast<double>(total.flips) / static_cast<double>(total.trials);
  est.std_error = BinomialStdError(total.flips, total.trials);
  std::tie(est.wilson_low, est.wilson_high) = WilsonInterval(total.flips, total.trials);
  return est;
}

namespace {

template <typename Pred>
ProbabilityEstimate NeuronDisagreement(const NeuronParams& params, const InputSequence& x,
                                       const InputSequence& y, std::size_t draws,
                                       const SeedSpec& seed, Pred differs) {
  if (x.dimension() != y.dimension() || x.steps() != y.steps()) {
    throw DimensionError("input sequences must share dimension and length");
  }
  if (draws == 0) throw std::invalid_argument("need at least one weight draw");
  const std::size_t n = x.dimension();
  ProbabilityEstimate est;
  for (std::size_t k = 0; k < draws; ++k) {
    const Matrix w = GaussianWeights(1, n, 1.0 / static_cast<double>(n),
                                     seed.child({streams::kWeights, k}));
    const auto row = w.row(0);
    if (differs(Run(params, row, x).spikes, Run(params, row, y).spikes)) ++est.hits;
  }
  est.trials = static_cast<long>(draws);
  est.p = static_cast<double>(est.hits) / static_cast<double>(est.trials);
  est.std_error = BinomialStdError(est.hits, est.trials);
  return est;
}

}  // namespace

ProbabilityEstimate FlipProbabilitySingle(const NeuronParams& params, const InputSequence& x,
                                          const InputSequence& y, std::size_t draws,
                                          std::size_t t, const SeedSpec& seed) {
  if (t == 0 || t > x.steps()) throw std::invalid_argument("time step t must lie in [1, T]");
  return NeuronDisagreement(params, x, y, draws, seed,
                            [t](const auto& a, const auto& b) { return a[t - 1] != b[t - 1]; });
}

ProbabilityEstimate AnyStepFlipProbability(const NeuronParams& params, const InputSequence& x,
                                           const InputSequence& y, std::size_t draws,
                                           const SeedSpec& seed) {
  return NeuronDisagreement(params, x, y, draws, seed,
                            [](const auto& a, const auto& b) { return a != b; });
}

double BinomialCoefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

std::uint64_t NhExact(const BooleanFunction& f, const HypercubePoint& x, std::size_t h) {
  const std::size_t n = x.size();
  if (h > n) throw std::invalid_argument("N_h needs h <= n");
  if (BinomialCoefficient(n, h) > kMaxEnumeration) {
    throw EnumerationTooLarge("C(" + std::to_string(n) + ", " + std::to_string(h) +
                              ") exceeds the enumeration limit of 1e7 subsets");
  }
  const int fx = f(x);
  std::vector<std::size_t> idx(h);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::uint64_t count = 0;
  HypercubePoint y = x;
  while (true) {
    for (std::size_t i : idx) y.flip(i);
    if (f(y) != fx) ++count;
    for (std::size_t i : idx) y.flip(i);
    // Next h-subset in lexicographic order.
    std::size_t k = h;
    while (k > 0 && idx[k - 1] == n - h + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t m = k; m < h; ++m) idx[m] = idx[m - 1] + 1;
  }
  return count;
}

NhProfile NhProfileExact(const TruthTable& table) {
  CheckTableForNh(table);
  const std::size_t n = table.n;
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> totals(n + 1, 0);
  for (std::uint64_t x = 0; x < size; ++x) {
    const std::int8_t fx = table.values[x];
    for (std::uint64_t y = 0; y < size; ++y) {
      if (table.values[y] != fx) ++totals[HammingDistance(x, y)];
    }
  }
  NhProfile profile;
  profile.n = n;
  profile.exact = true;
  profile.std_errors.assign(n + 1, 0.0);
  for (std::size_t h = 0; h <= n; ++h) {
    profile.values.push_back(static_cast<double>(totals[h]) / static_cast<double>(size));
  }
  return profile;
}

NhProfile ExpectedNhProfile(const TableSampler& sampler, std::size_t draws, const SeedSpec& seed,
                            std::size_t jobs) {
  if (draws == 0) throw std::invalid_argument("expected N_h profile needs >= 1 draw");
  std::vector<NhProfile> profiles(draws);
  ParallelFor(draws, jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      profiles[k] = NhProfileExact(sampler(seed.child({streams::kWeights, k})));
    }
  });
  NhProfile out;
  out.n = profiles.front().n;
  out.exact = true;
  out.values.assign(out.n + 1, 0.0);
  out.std_errors.assign(out.n + 1, 0.0);
  for (std::size_t h = 0; h <= out.n; ++h) {
    double sum = 0.0;
    for (const auto& p : profiles) sum += p.values[h];
    out.values[h] = sum / static_cast<double>(draws);
    if (draws > 1) {
      double ss = 0.0;
      for (const auto& p : profiles) ss += (p.values[h] - out.values[h]) * (p.values[h] - out.values[h]);
      out.std_errors[h] = std::sqrt(ss / static_cast<double>(draws - 1) / static_cast<double>(draws));
    }
  }
  return out;
}

NhProfile NhProfileMonteCarlo(const ClassifierFamily& family, const std::vector<std::size_t>& hs,
                              const EnsOptions& options, const SeedSpec& seed) {
  const std::size_t n = family.dimension();
  NhProfile profile;
  profile.n = n;
  profile.exact = false;
  profile.values.assign(n + 1, std::nan(""));
  profile.std_errors.assign(n + 1, std::nan(""));
  for (std::size_t h : hs) {
    if (h > n) throw std::invalid_argument("N_h needs h <= n");
    const SensitivityEstimate est =
        EnsMonteCarlo(family, PerturbationModel::FixedHamming(h), options, seed.child(h));
    const double pairs = BinomialCoefficient(n, h);
    profile.values[h] = pairs * est.estimate;
    profile.std_errors[h] = pairs * est.std_error;
  }
  return profile;
}

double EnsFromNh(const NhProfile& profile, double nu) {
  if (!profile.exact) throw std::invalid_argument("ENS from N_h needs an exact profile");
  if (profile.values.size() != profile.n + 1) {
    throw std::invalid_argument("ENS from N_h needs values for every h = 0..n");
  }
  for (double v : profile.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("N_h profile is incomplete");
  }
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("nu must lie in [0, 1]");
  const std::size_t n = profile.n;
  double sum = 0.0;
  for (std::size_t h = 1; h <= n; ++h) {
    sum += profile.values[h] * std::pow(nu, static_cast<double>(h)) *
           std::pow(1.0 - nu, static_cast<double>(n - h));
  }
  return sum;
}

double ExhaustiveNs(const TruthTable& table, double nu) {
  CheckTableForNh(table);
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("nu must lie in [0, 1]");
  const std::size_t n = table.n;
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<double> pair_weight(n + 1);
  for (std::size_t d = 0; d <= n; ++d) {
    pair_weight[d] = std::pow(nu, static_cast<double>(d)) *
                     std::pow(1.0 - nu, static_cast<double>(n - d)) / static_cast<double>(size);
  }
  double sum = 0.0;
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      if (table.values[x] != table.values[y]) sum += pair_weight[HammingDistance(x, y)];
    }
  }
  return sum;
}

DisagreementProfile Disagreement(const NetworkConfig& net, const InputSequence& x,
                                 const InputSequence& y) {
  ForwardOptions options;
  options.record_potentials = false;
  const ForwardRecord rx = Forward(net, x, options);
  const ForwardRecord ry = Forward(net, y, options);
  DisagreementProfile profile;
  for (std::size_t l = 0; l < rx.layers.size(); ++l) {
    const LayerTrace& a = rx.layers[l];
    const LayerTrace& b = ry.layers[l];
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.width; ++i) {
      for (std::size_t t = 0; t < rx.latency; ++t) {
        if (a.spike(t, i) != b.spike(t, i)) {
          ++count;
          break;
        }
      }
    }
    profile.counts.push_back(count);
  }
  return profile;
}

}  // namespace spikestab
