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


// Randomized checks of the model invariants. Each case draws its instances
// from a fixed seed, so failures are reproducible.
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "spikestab/bounds.h"
#include "spikestab/fourier.h"
#include "spikestab/network.h"
#include "spikestab/sensitivity.h"

using namespace spikestab;

namespace {

const NeuronParams kParams{1.0, 0.5, 10, Alphabet::kSigned};

InputSequence RandomSequence(std::size_t n, std::size_t T, bool dynamic, std::mt19937_64& engine) {
  if (!dynamic) return InputSequence::Static(SampleUniformPoint(n, engine), T);
  std::vector<HypercubePoint> steps;
  for (std::size_t t = 0; t < T; ++t) steps.push_back(SampleUniformPoint(n, engine));
  return InputSequence::Dynamic(std::move(steps));
}

}  // namespace

TEST_CASE("fixed-Hamming perturbations flip exactly h coordinates") {
  auto engine = SeedSpec(100).engine();
  std::uniform_int_distribution<std::size_t> dim(1, 300);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = dim(engine);
    const std::size_t h = std::uniform_int_distribution<std::size_t>(0, n)(engine);
    const HypercubePoint x = SampleUniformPoint(n, engine);
    CHECK(HammingDistance(x, Perturb(x, PerturbationModel::FixedHamming(h), engine)) == h);
  }
}

TEST_CASE("iid flips give a binomial Hamming distance") {
  const std::size_t n = 60;
  const double nu = 0.2;
  const std::size_t draws = 10000;
  const HypercubePoint x = SampleUniformPoint(n, SeedSpec(101));
  auto engine = SeedSpec(102).engine();
  std::vector<std::size_t> hist(n + 1, 0);
  for (std::size_t k = 0; k < draws; ++k) ++hist[HammingDistance(x, Perturb(x, PerturbationModel::IidFlip(nu), engine))];
  const double band = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * draws));
  double empirical = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    empirical += static_cast<double>(hist[k]) / draws;
    CHECK(std::abs(empirical - static_cast<double>(BinomialCdf(n, nu, k))) <= band);
  }
}

TEST_CASE("neuron invariants") {
  auto engine = SeedSpec(103).engine();
  for (std::uint64_t k = 0; k < 300; ++k) {
    const std::size_t n = 1 + k % 40;
    const std::size_t T = 1 + k % 10;
    const double theta = 0.25 * (k % 5);
    const NeuronParams p{1.0, theta, T, Alphabet::kSigned};
    const Matrix w = GaussianWeights(1, n, 1.0 / n, SeedSpec(104, {k}));
    const InputSequence x = RandomSequence(n, T, k % 2, engine);
    const SpikeTrain train = Run(p, w.row(0), x);

    std::vector<double> cumulative(n, 0.0);
    double resets = 0;
    int s_prev = -1;
    for (std::size_t t = 0; t < T; ++t) {
      CHECK(train.spikes[t] == (train.potentials[t] - theta >= 0 ? 1 : -1));
      for (std::size_t j = 0; j < n; ++j) cumulative[j] += x.at(t)[j];
      resets += (theta / 2) * (s_prev + 1);
      const double dot = std::inner_product(cumulative.begin(), cumulative.end(), w.row(0).begin(), 0.0);
      CHECK(train.potentials[t] == doctest::Approx(dot - resets).epsilon(1e-9).scale(1.0));
      s_prev = train.spikes[t];
    }
  }
}

TEST_CASE("one-step threshold monotonicity and alphabet consistency") {
  auto engine = SeedSpec(105).engine();
  for (std::uint64_t k = 0; k < 300; ++k) {
    const Matrix w = GaussianWeights(1, 16, 1.0 / 16, SeedSpec(106, {k}));
    const InputSequence x = InputSequence::Static(SampleUniformPoint(16, engine), 1);
    int previous = 1;
    for (double theta : {0.0, 0.2, 0.5, 1.0, 2.0}) {
      const int s = Run(NeuronParams{1.0, theta, 1, Alphabet::kSigned}, w.row(0), x).spikes[0];
      CHECK(s <= previous);
      previous = s;
      const int h = Run(NeuronParams{1.0, theta, 1, Alphabet::kHeaviside}, w.row(0), x).spikes[0];
      CHECK(2 * h - 1 == s);
    }
  }
}

TEST_CASE("network invariants") {
  auto engine = SeedSpec(107).engine();
  for (std::uint64_t k = 0; k < 60; ++k) {
    const Alphabet alphabet = k % 3 == 0 ? Alphabet::kHeaviside : Alphabet::kSigned;
    const NeuronParams p{k % 4 == 0 ? 0.8 : 1.0, 0.5, 1 + k % 10, alphabet};
    const std::size_t n = 5 + k % 20;
    const NetworkConfig net = InitRandom({n, n, 2 + k % 3}, p, SeedSpec(108, {k}));
    const InputSequence x = RandomSequence(n, p.latency, k % 2, engine);
    const ForwardRecord rec = Forward(net, x);
    const long T = static_cast<long>(p.latency);
    for (long c : rec.spike_counts) {
      if (alphabet == Alphabet::kSigned) {
        CHECK((c >= -T && c <= T));
      } else {
        CHECK((c >= 0 && c <= T));
      }
    }
    const Classification cls = Classify(net, x);
    CHECK(cls.counts[cls.predicted_class] == *std::max_element(cls.counts.begin(), cls.counts.end()));
    CHECK(Forward(net, x).output().spikes == rec.output().spikes);

    const InputSequence y = RandomSequence(n, p.latency, k % 2, engine);
    if (Forward(net, y).output().spikes == rec.output().spikes) {
      CHECK(Classify(net, y).predicted_class == cls.predicted_class);
    }
  }
}

TEST_CASE("binary classifiers are total Boolean functions") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const TruthTable t = TruthTableOf(InitRandom({8, 8, 2}, kParams, SeedSpec(109, {k})));
    CHECK(t.values.size() == 256);
    for (auto v : t.values) CHECK((v == 1 || v == -1));
  }
}

TEST_CASE("degree profiles are distributions with nonincreasing tails") {
  for (std::uint64_t k = 0; k < 30; ++k) {
    const std::size_t n = 4 + k % 8;
    const SpectrumTable s = WalshHadamard(TruthTableOf(InitRandom({n, n, 2}, kParams, SeedSpec(110, {k}))));
    CHECK(std::abs(ParsevalSum(s) - 1.0) <= 1e-9);
    const DegreeProfile d = DegreeProfileOf(s);
    for (double w : d.weights) CHECK(w >= 0.0);
    CHECK(std::abs(d.total() - 1.0) <= 1e-9);
    for (std::size_t j = 1; j <= n; ++j) CHECK(d.tail(j) <= d.tail(j - 1));
    CHECK(d.tail(n) == 0.0);
    for (double nu : {0.05, 0.1, 0.25, 0.5}) CHECK(CheckConcentration(s, nu).holds);
  }
}

TEST_CASE("estimator bookkeeping") {
  const NetworkFamily family({16, 16, 2}, kParams);
  const SensitivityEstimate zero =
      EnsMonteCarlo(family, PerturbationModel::FixedHamming(0), EnsOptions{3, 20, 20}, SeedSpec(111));
  CHECK(zero.estimate == 0.0);
  CHECK(zero.flips == 0);

  const SensitivityEstimate e =
      EnsMonteCarlo(family, PerturbationModel::IidFlip(0.2), EnsOptions{3, 20, 20}, SeedSpec(112));
  CHECK(e.estimate == static_cast<double>(e.flips) / e.trials);
  CHECK(e.std_error == std::sqrt(e.estimate * (1 - e.estimate) / e.trials));
  CHECK(e.stability() == 1.0 - 2.0 * e.estimate);
  CHECK(e.ties <= e.flips);
}

TEST_CASE("Monte Carlo ENS covers the exhaustive value") {
  const TruthTable table = TruthTableOf(InitRandom({10, 10, 2}, kParams, SeedSpec(113)));
  const double nu = 0.1;
  const double exact = ExhaustiveNs(table, nu);
  CHECK(std::abs(EnsFromNh(NhProfileExact(table), nu) - exact) <= 1e-9);
  const FunctionFamily f(10, [&table](const HypercubePoint& x) { return table(x.mask()); });
  // One perturbation per input keeps the trials independent, as the binomial error assumes.
  int covered = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const SensitivityEstimate e =
        EnsMonteCarlo(f, PerturbationModel::IidFlip(nu), EnsOptions{1, 10000, 1}, SeedSpec(114, {r}));
    covered += std::abs(e.estimate - exact) <= 4 * e.std_error;
  }
  CHECK(covered >= 99);
}

TEST_CASE("N_h never exceeds the number of h-subsets") {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const NetworkConfig net = InitRandom({9, 2}, kParams, SeedSpec(115, {k}));
    const BooleanFunction f = [&](const HypercubePoint& x) { return BinaryLabel(net, x); };
    const HypercubePoint x = SampleUniformPoint(9, SeedSpec(116, {k}));
    for (std::size_t h = 0; h <= 9; ++h) CHECK(NhExact(f, x, h) <= BinomialCoefficient(9, h));
  }
}

TEST_CASE("disagreement is bounded and permutes with the rows") {
  auto engine = SeedSpec(117).engine();
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t n = 30;
    NetworkConfig net = InitRandom({n, n, n, 2}, kParams, SeedSpec(118, {k}));
    const HypercubePoint x = SampleUniformPoint(n, engine);
    HypercubePoint y = x;
    for (std::size_t i = 0; i < 1 + k % 6; ++i) y.flip(i);
    const InputSequence xs = InputSequence::Static(x, 10), ys = InputSequence::Static(y, 10);
    const DisagreementProfile d = Disagreement(net, xs, ys);
    for (std::size_t l = 0; l < d.counts.size(); ++l) CHECK(d.counts[l] <= net.widths[l]);

    auto indicators = [&](const NetworkConfig& m) {
      const ForwardRecord a = Forward(m, xs), b = Forward(m, ys);
      std::vector<int> out(n, 0);
      for (std::size_t t = 0; t < 10; ++t) {
        for (std::size_t i = 0; i < n; ++i) out[i] |= a.layers[1].spike(t, i) != b.layers[1].spike(t, i);
      }
      return out;
    };
    const std::vector<int> before = indicators(net);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), engine);
    NetworkConfig shuffled = net;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) shuffled.weights[0](i, j) = net.weights[0](perm[i], j);
    }
    const std::vector<int> after = indicators(shuffled);
    for (std::size_t i = 0; i < n; ++i) CHECK(after[i] == before[perm[i]]);
  }
}

TEST_CASE("bound monotonicity") {
  const BoundParams unit{1.0, 1.0};
  auto engine = SeedSpec(119).engine();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double theta = 2 * u(engine), nu = u(engine);
    const std::size_t t = 1 + k % 10, n = 2 + k * 7;
    const bool stat = k % 2;
    const double base = Thm1Bound(theta, t, nu, n, unit, stat);
    CHECK(Thm1Bound(theta + 0.1, t, nu, n, unit, stat) >= base);
    CHECK(Thm1Bound(theta, t + 1, nu, n, unit, stat) >= base);
    CHECK(Thm1Bound(theta, t, std::min(1.0, nu + 0.05), n, unit, stat) >= base);
    CHECK(Thm1Bound(theta, t, nu, n + 10, unit, stat) >= base);

    const std::size_t L = 1 + k % 4;
    const Thm2Terms a = Thm2BoundTerms(theta, 10, L, n, 2, nu, unit);
    const Thm2Terms b = Thm2BoundTerms(theta, 10, L, n, 2, std::min(1.0, nu + 0.05), unit);
    const Thm2Terms c = Thm2BoundTerms(theta, 10, L, n + 10, 2, nu, unit);
    CHECK(b.main >= a.main);
    CHECK(c.depth <= a.depth);
  }
}

TEST_CASE("stochastic order holds on random triples") {
  auto engine = SeedSpec(120).engine();
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int k = 0; k < 100; ++k) {
    double p = u(engine), q = u(engine);
    if (p == q) continue;
    if (p > q) std::swap(p, q);
    CHECK(StochasticDominanceCheck(1 + k * 3, p, q, 0, SeedSpec(121)).holds);
  }
}
