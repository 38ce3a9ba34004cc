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


#include "spikestab/fourier.h"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "spikestab/csv.h"
#include "spikestab/parallel.h"

namespace spikestab {

namespace {

void CheckDim(std::size_t n) {
  if (n == 0 || n > kMaxSpectrumDim) {
    throw std::invalid_argument("exact spectra need 1 <= n <= " + std::to_string(kMaxSpectrumDim) +
                                " (got n=" + std::to_string(n) + ")");
  }
}

template <typename T>
void Butterfly(std::vector<T>& a) {
  for (std::size_t len = 1; len < a.size(); len <<= 1) {
    for (std::size_t block = 0; block < a.size(); block += len << 1) {
      for (std::size_t k = block; k < block + len; ++k) {
        const T lo = a[k];
        const T hi = a[k + len];
        a[k] = lo + hi;
        a[k + len] = lo - hi;
      }
    }
  }
}

int Parity(std::uint64_t subset) { return (std::popcount(subset) & 1) ? -1 : 1; }

}  // namespace

void TruthTable::Validate() const {
  CheckDim(n);
  if (values.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("truth table must have exactly 2^n entries");
  }
  for (std::int8_t v : values) {
    if (v != 1 && v != -1) throw std::invalid_argument("truth table entries must be +-1");
  }
}

TruthTable TruthTable::FromFunction(std::size_t n,
                                    const std::function<int(const HypercubePoint&)>& f) {
  CheckDim(n);
  TruthTable table{n, std::vector<std::int8_t>(std::size_t{1} << n)};
  for (std::uint64_t m = 0; m < table.values.size(); ++m) {
    const int v = f(HypercubePoint::FromMask(m, n));
    if (v != 1 && v != -1) throw std::invalid_argument("Boolean function must return +-1");
    table.values[m] = static_cast<std::int8_t>(v);
  }
  return table;
}

TruthTable TruthTableOf(const NetworkConfig& net) {
  if (net.classes() != 2) throw std::invalid_argument("truth tables need a binary classifier (n_L = 2)");
  CheckDim(net.input_dim());
  return TruthTable::FromFunction(
      net.input_dim(), [&net](const HypercubePoint& x) { return BinaryLabel(net, x); });
}

SpectrumTable WalshHadamard(const TruthTable& table) {
  table.Validate();
  std::vector<std::int64_t> a(table.values.begin(), table.values.end());
  Butterfly(a);
  SpectrumTable spectrum{table.n, std::vector<double>(a.size())};
  const double scale = std::ldexp(1.0, -static_cast<int>(table.n));
  // With bit i set meaning x_i = +1, chi_S(x) = (-1)^|S| (-1)^popcount(S & mask).
  for (std::uint64_t s = 0; s < a.size(); ++s) {
    spectrum.coeffs[s] = static_cast<double>(Parity(s) * a[s]) * scale;
  }
  return spectrum;
}

std::vector<double> InverseWalshHadamard(const SpectrumTable& spectrum) {
  CheckDim(spectrum.n);
  if (spectrum.coeffs.size() != (std::size_t{1} << spectrum.n)) {
    throw std::invalid_argument("spectrum must have exactly 2^n coefficients");
  }
  std::vector<double> a(spectrum.coeffs.size());
  for (std::uint64_t s = 0; s < a.size(); ++s) a[s] = Parity(s) * spectrum.coeffs[s];
  Butterfly(a);
  return a;
}

double ParsevalSum(const SpectrumTable& spectrum) {
  double sum = 0.0;
  for (double c : spectrum.coeffs) sum += c * c;
  return sum;
}

double DegreeProfile::total() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

double DegreeProfile::tail(std::size_t k) const {
  double sum = 0.0;
  for (std::size_t j = k + 1; j < weights.size(); ++j) sum += weights[j];
  return sum;
}

DegreeProfile DegreeProfileOf(const SpectrumTable& spectrum) {
  DegreeProfile profile{std::vector<double>(spectrum.n + 1, 0.0)};
  for (std::uint64_t s = 0; s < spectrum.coeffs.size(); ++s) {
    profile.weights[std::popcount(s)] += spectrum.coeffs[s] * spectrum.coeffs[s];
  }
  return profile;
}

double ExactNs(const DegreeProfile& profile, double nu) {
  if (!(nu >= 0.0 && nu <= 0.5)) throw std::invalid_argument("exact NS needs 0 <= nu <= 1/2");
  const double rho = 1.0 - 2.0 * nu;
  double sum = 0.0;
  for (std::size_t k = 0; k < profile.weights.size(); ++k) {
    sum += (1.0 - std::pow(rho, static_cast<double>(k))) * profile.weights[k];
  }
  return 0.5 * sum;
}

double ExactNs(const SpectrumTable& spectrum, double nu) {
  return ExactNs(DegreeProfileOf(spectrum), nu);
}

ConcentrationCheck CheckConcentration(const SpectrumTable& spectrum, double nu) {
  if (!(nu > 0.0 && nu <= 0.5)) throw std::invalid_argument("concentration check needs 0 < nu <= 1/2");
  const DegreeProfile profile = DegreeProfileOf(spectrum);
  ConcentrationCheck check;
  check.degree = static_cast<std::size_t>(std::floor(1.0 / nu));
  check.tail = profile.tail(check.degree);
  check.bound = 4.0 * ExactNs(profile, nu);
  check.holds = check.tail <= check.bound;
  return check;
}

bool ConcentrationHoldsExactly(const SpectrumTable& spectrum, std::uint64_t num, std::uint64_t den) {
  using Int = __int128;
  const std::size_t n = spectrum.n;
  if (num == 0 || 2 * num > den) throw std::invalid_argument("exact concentration check needs 0 < num/den <= 1/2");
  if (static_cast<double>(n) * (2.0 + std::log2(static_cast<double>(den))) + 3.0 > 126.0) {
    throw std::invalid_argument("exact concentration check would overflow 128-bit integers");
  }
  // A_k = 4^n W_k, an exact integer.
  std::vector<Int> a(n + 1, 0);
  const double scale = std::ldexp(1.0, static_cast<int>(n));
  for (std::uint64_t s = 0; s < spectrum.coeffs.size(); ++s) {
    const double scaled = spectrum.coeffs[s] * scale;
    const auto c = static_cast<std::int64_t>(scaled);
    if (static_cast<double>(c) != scaled) throw std::invalid_argument("spectrum is not that of a +-1 table");
    a[std::popcount(s)] += static_cast<Int>(c) * c;
  }
  // With r = (den - 2 num) / den, tail <= 4 NS becomes, after scaling by 4^n den^n,
  //   sum_{k > K} A_k den^n <= 2 sum_k A_k (den^n - (den - 2 num)^k den^(n-k)).
  const std::uint64_t degree = den / num;
  std::vector<Int> den_pow(n + 1, 1), r_pow(n + 1, 1);
  for (std::size_t k = 1; k <= n; ++k) {
    den_pow[k] = den_pow[k - 1] * static_cast<Int>(den);
    r_pow[k] = r_pow[k - 1] * static_cast<Int>(den - 2 * num);
  }
  Int lhs = 0, rhs = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > degree) lhs += a[k] * den_pow[n];
    rhs += 2 * a[k] * (den_pow[n] - r_pow[k] * den_pow[n - k]);
  }
  return lhs <= rhs;
}

ExpectedDegreeProfile ExpectedDegreeProfileOf(const TableSampler& sampler, std::size_t draws,
                                              const SeedSpec& seed, std::size_t jobs) {
  if (draws == 0) throw std::invalid_argument("expected degree profile needs >= 1 draw");
  std::vector<DegreeProfile> profiles(draws);
  ParallelFor(draws, jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      profiles[k] = DegreeProfileOf(WalshHadamard(sampler(seed.child({streams::kWeights, k}))));
    }
  });
  const std::size_t n = profiles.front().n();
  ExpectedDegreeProfile out;
  out.n = n;
  out.draws = draws;
  auto summarize = [&](auto value, std::vector<double>& mean, std::vector<double>& se) {
    mean.assign(n + 1, 0.0);
    se.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      double sum = 0.0;
      for (const auto& p : profiles) sum += value(p, k);
      mean[k] = sum / static_cast<double>(draws);
      if (draws > 1) {
        double ss = 0.0;
        for (const auto& p : profiles) ss += (value(p, k) - mean[k]) * (value(p, k) - mean[k]);
        se[k] = std::sqrt(ss / static_cast<double>(draws - 1) / static_cast<double>(draws));
      }
    }
  };
  summarize([](const DegreeProfile& p, std::size_t k) { return p.weights[k]; }, out.mean_weight,
            out.se_weight);
  summarize([](const DegreeProfile& p, std::size_t k) { return p.tail(k); }, out.mean_tail,
            out.se_tail);
  return out;
}

void WriteSpectrumCsv(std::ostream& out, const SpectrumTable& spectrum) {
  out << "bitmask,degree,coefficient\n";
  for (std::uint64_t s = 0; s < spectrum.coeffs.size(); ++s) {
    out << s << ',' << std::popcount(s) << ',' << FormatDouble(spectrum.coeffs[s]) << '\n';
  }
}

void WriteSpectrumBinary(std::ostream& out, const SpectrumTable& spectrum) {
  auto put = [&out](std::uint64_t v, int bytes) {
    for (int b = 0; b < bytes; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xffU));
  };
  put(spectrum.n, 4);
  for (double c : spectrum.coeffs) put(std::bit_cast<std::uint64_t>(c), 8);
  if (!out) throw IoError("failed writing spectrum dump");
}

SpectrumTable ReadSpectrumBinary(std::istream& in) {
  auto get = [&in](int bytes) {
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) {
      const int c = in.get();
      if (c == std::char_traits<char>::eof()) throw IoError("truncated spectrum dump");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
    }
    return v;
  };
  SpectrumTable spectrum;
  spectrum.n = static_cast<std::size_t>(get(4));
  if (spectrum.n == 0 || spectrum.n > kMaxSpectrumDim) throw IoError("bad dimension in spectrum dump");
  spectrum.coeffs.resize(std::size_t{1} << spectrum.n);
  for (double& c : spectrum.coeffs) c = std::bit_cast<double>(get(8));
  return spectrum;
}

}  // namespace spikestab
