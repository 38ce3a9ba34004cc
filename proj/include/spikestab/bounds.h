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


#ifndef SPIKESTAB_BOUNDS_H_
#define SPIKESTAB_BOUNDS_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spikestab/core.h"

namespace spikestab {

// Free scale constants of the stability bounds. Logarithms are natural.
struct BoundParams {
  double C = 1.0;
  double c = 1.0;
  void Validate() const;
};

// Raised when a bound is evaluated outside the hypothesis it was stated for.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Single-neuron flip bound C (1 + theta) t^2 sqrt(nu_bar) ln n; the ln n factor
// is dropped for static inputs.
double Thm1Bound(double theta, std::size_t t, double nu_bar, std::size_t n,
                 const BoundParams& params, bool static_input);

struct Thm2Terms {
  double main = 0.0;
  double depth = 0.0;
  double total() const { return main + depth; }
};

// n_L T^4 C (1 + theta) nu^(1/2^(2L+1)) ln^(3/2) n + (L - 1) exp(-c nu^(1/2^(2L-1)) n).
Thm2Terms Thm2BoundTerms(double theta, std::size_t T, std::size_t L, std::size_t n,
                         std::size_t n_L, double nu, const BoundParams& params);
double Thm2Bound(double theta, std::size_t T, std::size_t L, std::size_t n, std::size_t n_L,
                 double nu, const BoundParams& params);

// Three-term ENS bound with C_{T,theta} = 2 T^4 C (1 + theta). Requires
// nu' <= 1 / sqrt(n ln n); throws PreconditionError otherwise.
double CorBound(double theta, std::size_t T, std::size_t L, std::size_t n, double nu_prime,
                const BoundParams& params);
double CorNuLimit(std::size_t n);

// exp(-eps^2 n p / (2 + eps)).
double ChernoffTail(std::size_t n, double p, double eps);

// Exact binomial quantities by direct summation in extended precision.
long double BinomialPmf(std::size_t n, long double p, std::size_t k);
long double BinomialCdf(std::size_t n, long double p, std::size_t k);       // P[X <= k]
long double BinomialSurvival(std::size_t n, long double p, std::size_t k);  // P[X > k]
// P[X >= ceil((1 + eps) n p)].
long double BinomialUpperTail(std::size_t n, double p, double eps);

struct ChernoffGridReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  double min_slack = 0.0;  // min over the grid of bound - exact
  std::size_t worst_n = 0;
  double worst_p = 0.0;
  double worst_eps = 0.0;
};

// Compares ChernoffTail against the exact tail for every n in [1, max_n] and
// every listed p and eps.
ChernoffGridReport CheckChernoffGrid(std::size_t max_n, const std::vector<double>& ps,
                                     const std::vector<double>& epss);

struct DominanceResult {
  bool holds = false;
  std::size_t worst_k = 0;
  long double worst_gap = 0.0L;  // min over k of the dominance margin
  // Empirical DKW cross-check; skipped when n_samples == 0.
  bool empirical_checked = false;
  bool empirical_holds = true;
};

// Bin(n, p) <=_st Bin(n, q) for p < q, verified on the exact CDFs at every k.
// Throws std::invalid_argument unless 0 < p < q < 1.
DominanceResult StochasticDominanceCheck(std::size_t n, double p, double q,
                                         std::size_t n_samples, const SeedSpec& seed);

struct LemmaA4Result {
  double lhs_low = 0.0;   // P[X <= a, rho X + sqrt(1 - rho^2) Z > b]
  double lhs_high = 0.0;  // P[X > a, rho X + sqrt(1 - rho^2) Z <= b]
  double se_low = 0.0;
  double se_high = 0.0;
  double rhs = 0.0;
  bool holds_within_ci = false;
};

double LemmaA4Rhs(double rho, double a, double b);

// Monte Carlo check of the correlated-Gaussian crossing bound; holds when
// both estimates minus three standard errors stay at or below the right side.
// Samples are drawn in fixed blocks keyed by block index, so the result does
// not depend on `jobs`.
LemmaA4Result LemmaA4Check(double rho, double a, double b, std::size_t n_samples,
                           const SeedSpec& seed, std::size_t jobs = 1);

}  // namespace spikestab

#endif  // SPIKESTAB_BOUNDS_H_
