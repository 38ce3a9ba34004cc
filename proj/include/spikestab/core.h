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


#ifndef SPIKESTAB_CORE_H_
#define SPIKESTAB_CORE_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikestab {

// Raised when two objects that must share a dimension do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point of the hypercube {-1,+1}^n.
class HypercubePoint {
 public:
  HypercubePoint() = default;
  explicit HypercubePoint(std::vector<std::int8_t> coords);
  HypercubePoint(std::initializer_list<int> coords);

  // All-ones point of dimension n.
  static HypercubePoint Ones(std::size_t n);
  // Bit i of `mask` set <=> coordinate i is +1. Requires n <= 64.
  static HypercubePoint FromMask(std::uint64_t mask, std::size_t n);

  std::size_t size() const { return coords_.size(); }
  std::int8_t operator[](std::size_t i) const { return coords_[i]; }
  std::span<const std::int8_t> coords() const { return coords_; }

  void flip(std::size_t i) { coords_[i] = static_cast<std::int8_t>(-coords_[i]); }
  HypercubePoint negated() const;
  std::uint64_t mask() const;

  friend bool operator==(const HypercubePoint&, const HypercubePoint&) = default;

 private:
  std::vector<std::int8_t> coords_;
};

enum class Encoding { kStatic, kDynamic };

// A length-T sequence of hypercube points of one dimension.
class InputSequence {
 public:
  InputSequence() = default;
  // Static encoding: `point` repeated `steps` times.
  static InputSequence Static(HypercubePoint point, std::size_t steps);
  static InputSequence Dynamic(std::vector<HypercubePoint> steps);

  std::size_t steps() const { return steps_.size(); }
  std::size_t dimension() const { return steps_.empty() ? 0 : steps_.front().size(); }
  Encoding encoding() const { return encoding_; }
  const HypercubePoint& at(std::size_t t) const { return steps_[t]; }
  const std::vector<HypercubePoint>& points() const { return steps_; }

  friend bool operator==(const InputSequence&, const InputSequence&) = default;

 private:
  std::vector<HypercubePoint> steps_;
  Encoding encoding_ = Encoding::kStatic;
};

std::size_t HammingDistance(const HypercubePoint& x, const HypercubePoint& y);
std::size_t HammingDistance(std::uint64_t x_mask, std::uint64_t y_mask);

// Deterministic seeding: a master seed plus an ordered list of stream labels.
// Every (master, labels) pair names one independent random stream, so the
// draws a computation sees never depend on evaluation order or thread count.
class SeedSpec {
 public:
  SeedSpec() = default;
  explicit SeedSpec(std::uint64_t master, std::vector<std::uint64_t> labels = {})
      : master_(master), labels_(std::move(labels)) {}

  std::uint64_t master() const { return master_; }
  const std::vector<std::uint64_t>& labels() const { return labels_; }

  SeedSpec child(std::uint64_t label) const;
  SeedSpec child(std::initializer_list<std::uint64_t> labels) const;

  // 64-bit key of this stream, mixed from the master seed and labels.
  std::uint64_t key() const;
  std::mt19937_64 engine() const { return std::mt19937_64(key()); }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;

 private:
  std::uint64_t master_ = 0;
  std::vector<std::uint64_t> labels_;
};

// Top-level stream labels shared by the estimators.
namespace streams {
inline constexpr std::uint64_t kWeights = 1;
inline constexpr std::uint64_t kData = 2;
inline constexpr std::uint64_t kPerturbation = 3;
inline constexpr std::uint64_t kAuxiliary = 4;
}  // namespace streams

struct PerturbationModel {
  enum class Kind { kIidFlip, kFixedHamming };

  Kind kind = Kind::kIidFlip;
  double nu = 0.0;        // flip probability, iid_flip only
  std::size_t h = 0;      // exact flip count, fixed_hamming only
  bool per_step = false;  // perturb every time step independently

  static PerturbationModel IidFlip(double nu, bool per_step = false);
  static PerturbationModel FixedHamming(std::size_t h, bool per_step = false);

  // Throws std::invalid_argument if the model is not valid at dimension n.
  void Validate(std::size_t n) const;
  std::string Describe() const;
  // nu for iid_flip, h for fixed_hamming.
  double Parameter() const;
};

HypercubePoint SampleUniformPoint(std::size_t n, std::mt19937_64& engine);
HypercubePoint SampleUniformPoint(std::size_t n, const SeedSpec& seed);

HypercubePoint Perturb(const HypercubePoint& x, const PerturbationModel& model,
                       std::mt19937_64& engine);
HypercubePoint Perturb(const HypercubePoint& x, const PerturbationModel& model,
                       const SeedSpec& seed);

// Applies `model` to every step (per_step) or once to a static sequence.
InputSequence Perturb(const InputSequence& x, const PerturbationModel& model,
                      const SeedSpec& seed);

// Dense real matrix stored row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// I.i.d. N(0, variance) entries, drawn in row-major order from `seed`.
Matrix GaussianWeights(std::size_t rows, std::size_t cols, double variance,
                       const SeedSpec& seed);

}  // namespace spikestab

#endif  // SPIKESTAB_CORE_H_
