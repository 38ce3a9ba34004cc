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


#include "spikestab/core.h"

#include <cmath>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace spikestab {

namespace {

std::uint64_t SplitMix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

HypercubePoint::HypercubePoint(std::vector<std::int8_t> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("hypercube point needs n >= 1");
  for (std::int8_t c : coords_) {
    if (c != 1 && c != -1) {
      throw std::invalid_argument("hypercube coordinates must be -1 or +1");
    }
  }
}

HypercubePoint::HypercubePoint(std::initializer_list<int> coords)
    : HypercubePoint(std::vector<std::int8_t>(coords.begin(), coords.end())) {}

HypercubePoint HypercubePoint::Ones(std::size_t n) {
  return HypercubePoint(std::vector<std::int8_t>(n, 1));
}

HypercubePoint HypercubePoint::FromMask(std::uint64_t mask, std::size_t n) {
  if (n > 64) throw std::invalid_argument("FromMask supports n <= 64");
  std::vector<std::int8_t> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = ((mask >> i) & 1U) ? 1 : -1;
  return HypercubePoint(std::move(c));
}

HypercubePoint HypercubePoint::negated() const {
  HypercubePoint out = *this;
  for (auto& c : out.coords_) c = static_cast<std::int8_t>(-c);
  return out;
}

std::uint64_t HypercubePoint::mask() const {
  if (coords_.size() > 64) throw std::invalid_argument("mask() supports n <= 64");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 1) m |= (std::uint64_t{1} << i);
  }
  return m;
}

InputSequence InputSequence::Static(HypercubePoint point, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("input sequence needs T >= 1");
  InputSequence seq;
  seq.steps_.assign(steps, std::move(point));
  seq.encoding_ = Encoding::kStatic;
  return seq;
}

InputSequence InputSequence::Dynamic(std::vector<HypercubePoint> steps) {
  if (steps.empty()) throw std::invalid_argument("input sequence needs T >= 1");
  for (const auto& p : steps) {
    if (p.size() != steps.front().size()) {
      throw DimensionError("all input steps must share one dimension");
    }
  }
  InputSequence seq;
  seq.steps_ = std::move(steps);
  seq.encoding_ = Encoding::kDynamic;
  return seq;
}

std::size_t HammingDistance(const HypercubePoint& x, const HypercubePoint& y) {
  if (x.size() != y.size()) {
    throw DimensionError("hamming distance: dimensions " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()) + " differ");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] != y[i]);
  return d;
}

std::size_t HammingDistance(std::uint64_t x_mask, std::uint64_t y_mask) {
  return static_cast<std::size_t>(__builtin_popcountll(x_mask ^ y_mask));
}

SeedSpec SeedSpec::child(std::uint64_t label) const {
  SeedSpec out = *this;
  out.labels_.push_back(label);
  return out;
}

SeedSpec SeedSpec::child(std::initializer_list<std::uint64_t> labels) const {
  SeedSpec out = *this;
  out.labels_.insert(out.labels_.end(), labels.begin(), labels.end());
  return out;
}

std::uint64_t SeedSpec::key() const {
  std::uint64_t h = SplitMix64(master_ ^ 0x5eed5eed5eed5eedULL);
  for (std::uint64_t label : labels_) h = SplitMix64(h ^ SplitMix64(label));
  return SplitMix64(h ^ labels_.size());
}

PerturbationModel PerturbationModel::IidFlip(double nu, bool per_step) {
  PerturbationModel m;
  m.kind = Kind::kIidFlip;
  m.nu = nu;
  m.per_step = per_step;
  return m;
}

PerturbationModel PerturbationModel::FixedHamming(std::size_t h, bool per_step) {
  PerturbationModel m;
  m.kind = Kind::kFixedHamming;
  m.h = h;
  m.per_step = per_step;
  return m;
}

void PerturbationModel::Validate(std::size_t n) const {
  if (kind == Kind::kIidFlip) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
      throw std::invalid_argument("iid_flip needs 0 <= nu <= 1");
    }
  } else if (h > n) {
    throw std::invalid_argument("fixed_hamming needs h <= n (h=" + std::to_string(h) +
                                ", n=" + std::to_string(n) + ")");
  }
}

std::string PerturbationModel::Describe() const {
  return kind == Kind::kIidFlip ? "iid_flip" : "fixed_hamming";
}

double PerturbationModel::Parameter() const {
  return kind == Kind::kIidFlip ? nu : static_cast<double>(h);
}

HypercubePoint SampleUniformPoint(std::size_t n, std::mt19937_64& engine) {
  if (n == 0) throw std::invalid_argument("uniform point needs n >= 1");
  std::vector<std::int8_t> c(n);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) bits = engine();
    c[i] = (bits & 1U) ? 1 : -1;
    bits >>= 1;
  }
  return HypercubePoint(std::move(c));
}

HypercubePoint SampleUniformPoint(std::size_t n, const SeedSpec& seed) {
  auto engine = seed.engine();
  return SampleUniformPoint(n, engine);
}

HypercubePoint Perturb(const HypercubePoint& x, const PerturbationModel& model,
                       std::mt19937_64& engine) {
  const std::size_t n = x.size();
  model.Validate(n);
  HypercubePoint y = x;
  if (model.kind == PerturbationModel::Kind::kIidFlip) {
    if (model.nu <= 0.0) return y;
    if (model.nu >= 1.0) return x.negated();
    // Gaps between successive flipped coordinates are geometric, which
    // reproduces independent Bernoulli(nu) flips in O(nu * n) draws.
    std::geometric_distribution<std::uint64_t> gap(model.nu);
    std::uint64_t pos = gap(engine);
    while (pos < n) {
      y.flip(static_cast<std::size_t>(pos));
      pos += 1 + gap(engine);
    }
    return y;
  }
  // Partial Fisher-Yates over a virtual identity permutation; only displaced
  // slots are materialised.
  std::unordered_map<std::size_t, std::size_t> displaced;
  displaced.reserve(model.h * 2);
  auto slot = [&](std::size_t i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };
  for (std::size_t k = 0; k < model.h; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    const std::size_t j = pick(engine);
    const std::size_t chosen = slot(j);
    displaced[j] = slot(k);
    y.flip(chosen);
  }
  return y;
}

HypercubePoint Perturb(const HypercubePoint& x, const PerturbationModel& model,
                       const SeedSpec& seed) {
  auto engine = seed.engine();
  return Perturb(x, model, engine);
}

InputSequence Perturb(const InputSequence& x, const PerturbationModel& model,
                      const SeedSpec& seed) {
  const std::size_t steps = x.steps();
  if (model.per_step) {
    std::vector<HypercubePoint> out;
    out.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      out.push_back(Perturb(x.at(t), model, seed.child(t)));
    }
    return InputSequence::Dynamic(std::move(out));
  }
  if (x.encoding() == Encoding::kStatic) {
    return InputSequence::Static(Perturb(x.at(0), model, seed), steps);
  }
  // One shared noise vector applied to every step.
  const HypercubePoint xi = Perturb(HypercubePoint::Ones(x.dimension()), model, seed);
  std::vector<HypercubePoint> out;
  out.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    HypercubePoint y = x.at(t);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (xi[i] == -1) y.flip(i);
    }
    out.push_back(std::move(y));
  }
  return InputSequence::Dynamic(std::move(out));
}

Matrix GaussianWeights(std::size_t rows, std::size_t cols, double variance,
                       const SeedSpec& seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("weight matrix needs rows, cols >= 1");
  if (!(variance > 0.0)) throw std::invalid_argument("weight variance must be positive");
  Matrix w(rows, cols);
  auto engine = seed.engine();
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) w(i, j) = normal(engine);
  }
  return w;
}

}  // namespace spikestab
