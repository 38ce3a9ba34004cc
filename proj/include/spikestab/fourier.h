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


#ifndef SPIKESTAB_FOURIER_H_
#define SPIKESTAB_FOURIER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "spikestab/core.h"
#include "spikestab/network.h"

namespace spikestab {

inline constexpr std::size_t kMaxSpectrumDim = 24;

// A Boolean function {-1,1}^n -> {-1,1} tabulated over all 2^n inputs. Entry
// `mask` holds f(x) where bit i of mask is set iff x_i = +1.
struct TruthTable {
  std::size_t n = 0;
  std::vector<std::int8_t> values;

  int operator()(std::uint64_t mask) const { return values[mask]; }
  // Throws unless n <= kMaxSpectrumDim, |values| = 2^n and entries are +-1.
  void Validate() const;

  static TruthTable FromFunction(std::size_t n,
                                 const std::function<int(const HypercubePoint&)>& f);
};

// Binary classifier (n_L = 2) under static encoding, class 0 -> +1.
TruthTable TruthTableOf(const NetworkConfig& net);

// Fourier-Walsh coefficients f^(S), indexed by subset bitmask S.
struct SpectrumTable {
  std::size_t n = 0;
  std::vector<double> coeffs;

  double operator[](std::uint64_t subset) const { return coeffs[subset]; }
};

// f^(S) = 2^-n sum_x f(x) chi_S(x), via an integer butterfly in O(n 2^n).
SpectrumTable WalshHadamard(const TruthTable& table);
// Recovers f(x) for every mask; exact for spectra of +-1 tables.
std::vector<double> InverseWalshHadamard(const SpectrumTable& spectrum);
double ParsevalSum(const SpectrumTable& spectrum);

// W_k = sum over |S| = k of f^(S)^2.
struct DegreeProfile {
  std::vector<double> weights;

  std::size_t n() const { return weights.empty() ? 0 : weights.size() - 1; }
  double total() const;
  // Mass strictly above degree k; 0 for k >= n.
  double tail(std::size_t k) const;
};

DegreeProfile DegreeProfileOf(const SpectrumTable& spectrum);

// NS_nu(f) = 1/2 sum_S (1 - (1 - 2 nu)^|S|) f^(S)^2, for 0 <= nu <= 1/2.
double ExactNs(const SpectrumTable& spectrum, double nu);
double ExactNs(const DegreeProfile& profile, double nu);

struct ConcentrationCheck {
  std::size_t degree = 0;  // floor(1/nu)
  double tail = 0.0;       // sum over |S| > 1/nu of f^(S)^2
  double bound = 0.0;      // 4 NS_nu(f)
  bool holds = false;
};

// Tail mass above degree 1/nu against four times the noise sensitivity.
ConcentrationCheck CheckConcentration(const SpectrumTable& spectrum, double nu);

// The same inequality decided in exact integer arithmetic for a rational rate
// nu = num / den, using 2^n f^(S) in Z. Throws when n (2 + log2 den) is too
// large for 128-bit intermediates (n = 12 admits den up to about 2^8).
bool ConcentrationHoldsExactly(const SpectrumTable& spectrum, std::uint64_t num, std::uint64_t den);

struct ExpectedDegreeProfile {
  std::size_t n = 0;
  std::size_t draws = 0;
  std::vector<double> mean_weight;
  std::vector<double> se_weight;
  std::vector<double> mean_tail;  // mean of tail(k), k = 0..n
  std::vector<double> se_tail;

  DegreeProfile mean() const { return DegreeProfile{mean_weight}; }
};

using TableSampler = std::function<TruthTable(const SeedSpec&)>;

// Averages per-draw degree profiles; draw k uses seed.child({kWeights, k}).
ExpectedDegreeProfile ExpectedDegreeProfileOf(const TableSampler& sampler, std::size_t draws,
                                              const SeedSpec& seed, std::size_t jobs = 1);

// Rows "bitmask,degree,coefficient" with a header line.
void WriteSpectrumCsv(std::ostream& out, const SpectrumTable& spectrum);
// u32 n followed by 2^n f64, little-endian.
void WriteSpectrumBinary(std::ostream& out, const SpectrumTable& spectrum);
SpectrumTable ReadSpectrumBinary(std::istream& in);

}  // namespace spikestab

#endif  // SPIKESTAB_FOURIER_H_
