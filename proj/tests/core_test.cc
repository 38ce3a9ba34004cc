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


#include <cmath>
#include <cstdlib>
#include <numeric>

#include "doctest.h"
#include "spikestab/core.h"

using namespace spikestab;

TEST_CASE("hamming distance") {
  const HypercubePoint x{1, 1, 1, 1};
  CHECK(HammingDistance(x, x) == 0);
  CHECK(HammingDistance(x, HypercubePoint{1, -1, 1, -1}) == 2);
  CHECK_THROWS_AS(HammingDistance(x, HypercubePoint{1, 1}), DimensionError);

  auto engine = SeedSpec(3).engine();
  for (int k = 0; k < 100; ++k) {
    const HypercubePoint a = SampleUniformPoint(8, engine);
    const HypercubePoint b = SampleUniformPoint(8, engine);
    int half_l1 = 0;
    for (std::size_t i = 0; i < 8; ++i) half_l1 += std::abs(a[i] - b[i]);
    CHECK(HammingDistance(a, b) == static_cast<std::size_t>(half_l1 / 2));
    CHECK(HammingDistance(a.mask(), b.mask()) == HammingDistance(a, b));
  }
}

TEST_CASE("hypercube points reject invalid coordinates") {
  CHECK_THROWS(HypercubePoint{1, 0, -1});
  CHECK_THROWS(HypercubePoint(std::vector<std::int8_t>{}));
  const HypercubePoint p = HypercubePoint::FromMask(0b101, 3);
  CHECK(p == HypercubePoint{1, -1, 1});
  CHECK(p.mask() == 0b101);
  CHECK(p.negated() == HypercubePoint{-1, 1, -1});
}

TEST_CASE("input sequences") {
  const InputSequence s = InputSequence::Static(HypercubePoint{1, -1}, 4);
  CHECK(s.steps() == 4);
  CHECK(s.dimension() == 2);
  CHECK(s.encoding() == Encoding::kStatic);
  CHECK(s.at(3) == s.at(0));
  CHECK_THROWS(InputSequence::Static(HypercubePoint{1}, 0));
  CHECK_THROWS_AS(InputSequence::Dynamic({HypercubePoint{1}, HypercubePoint{1, 1}}), DimensionError);
}

TEST_CASE("perturbation models") {
  const HypercubePoint x = SampleUniformPoint(50, SeedSpec(1));
  CHECK(Perturb(x, PerturbationModel::IidFlip(0.0), SeedSpec(2)) == x);
  CHECK(Perturb(x, PerturbationModel::FixedHamming(50), SeedSpec(2)) == x.negated());
  for (std::size_t h : {0, 1, 7, 25}) {
    CHECK(HammingDistance(x, Perturb(x, PerturbationModel::FixedHamming(h), SeedSpec(h))) == h);
  }
  CHECK_THROWS(PerturbationModel::FixedHamming(51).Validate(50));
  CHECK_THROWS(PerturbationModel::IidFlip(1.5).Validate(50));

  SUBCASE("iid flip rate") {
    const std::size_t n = 10000;
    const HypercubePoint ones = HypercubePoint::Ones(n);
    auto engine = SeedSpec(9).engine();
    const auto model = PerturbationModel::IidFlip(0.3);
    double flipped = 0;
    const int samples = 1000;
    for (int k = 0; k < samples; ++k) flipped += HammingDistance(ones, Perturb(ones, model, engine));
    CHECK(std::abs(flipped / (samples * static_cast<double>(n)) - 0.3) < 0.005);
  }

  SUBCASE("static vs per-step sequences") {
    const InputSequence seq = InputSequence::Static(x, 5);
    const InputSequence once = Perturb(seq, PerturbationModel::IidFlip(0.3), SeedSpec(4));
    for (std::size_t t = 1; t < 5; ++t) CHECK(once.at(t) == once.at(0));
    const InputSequence each = Perturb(seq, PerturbationModel::IidFlip(0.3, true), SeedSpec(4));
    bool differ = false;
    for (std::size_t t = 1; t < 5; ++t) differ |= !(each.at(t) == each.at(0));
    CHECK(differ);
  }
}

TEST_CASE("uniform points") {
  auto engine = SeedSpec(11).engine();
  int plus = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) plus += SampleUniformPoint(1, engine)[0] == 1;
  CHECK(std::abs(plus - draws / 2.0) <= 3.0 * std::sqrt(draws * 0.25));

  std::vector<double> sums(10, 0.0);
  for (int k = 0; k < draws; ++k) {
    const HypercubePoint p = SampleUniformPoint(10, engine);
    for (std::size_t i = 0; i < 10; ++i) sums[i] += p[i];
  }
  for (double s : sums) CHECK(std::abs(s / draws) < 0.02);
  CHECK(SampleUniformPoint(64, SeedSpec(5, {1, 2})) == SampleUniformPoint(64, SeedSpec(5, {1, 2})));
}

TEST_CASE("seed streams") {
  const SeedSpec root(42);
  CHECK(root.child(1) == SeedSpec(42, {1}));
  CHECK(root.child({1, 2}) == root.child(1).child(2));
  CHECK(root.child(1).key() != root.child(2).key());
  CHECK(SeedSpec(42).key() != SeedSpec(43).key());
  CHECK(root.child({1, 2}).key() != root.child({2, 1}).key());
}

TEST_CASE("gaussian weights") {
  const std::size_t n = 1000;
  const Matrix w = GaussianWeights(1, n, 1.0 / n, SeedSpec(8));
  const auto row = w.row(0);
  const double mean = std::accumulate(row.begin(), row.end(), 0.0) / n;
  double var = 0;
  for (double v : row) var += (v - mean) * (v - mean);
  var /= n - 1;
  CHECK(std::abs(var - 1.0 / n) <= 3.0 * (1.0 / n) * std::sqrt(2.0 / n));
  CHECK(GaussianWeights(3, 4, 1.0, SeedSpec(8)) == GaussianWeights(3, 4, 1.0, SeedSpec(8)));
  CHECK_THROWS(GaussianWeights(0, 4, 1.0, SeedSpec(8)));

  SUBCASE("w.x has unit variance for a fixed hypercube point") {
    const std::size_t dim = 64;
    const HypercubePoint x = SampleUniformPoint(dim, SeedSpec(1));
    const int draws = 10000;
    double s = 0, s2 = 0;
    for (int k = 0; k < draws; ++k) {
      const Matrix m = GaussianWeights(1, dim, 1.0 / dim, SeedSpec(2, {static_cast<std::uint64_t>(k)}));
      double dot = 0;
      for (std::size_t i = 0; i < dim; ++i) dot += m(0, i) * x[i];
      s += dot;
      s2 += dot * dot;
    }
    const double sample_var = (s2 - s * s / draws) / (draws - 1);
    CHECK(std::abs(sample_var - 1.0) < 0.05);
  }
}
