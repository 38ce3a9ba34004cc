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


#include "spikestab/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "spikestab/parallel.h"

namespace spikestab {

namespace {

void CheckUnit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

double NuExponent(std::size_t power_of_two) { return std::ldexp(1.0, -static_cast<int>(power_of_two)); }

constexpr std::size_t kA4Block = 1 << 16;

}  // namespace

void BoundParams::Validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("bound constant C must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("bound constant c must be > 0");
}

double Thm1Bound(double theta, std::size_t t, double nu_bar, std::size_t n,
                 const BoundParams& params, bool static_input) {
  params.Validate();
  CheckUnit(nu_bar, "nu_bar");
  if (n < 2) throw std::invalid_argument("thm1 bound needs n >= 2");
  if (t < 1) throw std::invalid_argument("thm1 bound needs t >= 1");
  const double td = static_cast<double>(t);
  const double log_factor = static_input ? 1.0 : std::log(static_cast<double>(n));
  return params.C * (1.0 + theta) * td * td * std::sqrt(nu_bar) * log_factor;
}

Thm2Terms Thm2BoundTerms(double theta, std::size_t T, std::size_t L, std::size_t n,
                         std::size_t n_L, double nu, const BoundParams& params) {
  params.Validate();
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("thm2 bound needs nu in (0, 1]");
  if (L < 1) throw std::invalid_argument("thm2 bound needs L >= 1");
  if (n < 2) throw std::invalid_argument("thm2 bound needs n >= 2");
  const double T4 = std::pow(static_cast<double>(T), 4.0);
  const double ln_n = std::log(static_cast<double>(n));
  Thm2Terms terms;
  terms.main = static_cast<double>(n_L) * T4 * params.C * (1.0 + theta) *
               std::pow(nu, NuExponent(2 * L + 1)) * std::pow(ln_n, 1.5);
  terms.depth = static_cast<double>(L - 1) *
                std::exp(-params.c * std::pow(nu, NuExponent(2 * L - 1)) * static_cast<double>(n));
  return terms;
}

double Thm2Bound(double theta, std::size_t T, std::size_t L, std::size_t n, std::size_t n_L,
                 double nu, const BoundParams& params) {
  return Thm2BoundTerms(theta, T, L, n, n_L, nu, params).total();
}

double CorNuLimit(std::size_t n) {
  const double nd = static_cast<double>(n);
  return 1.0 / std::sqrt(nd * std::log(nd));
}

double CorBound(double theta, std::size_t T, std::size_t L, std::size_t n, double nu_prime,
                const BoundParams& params) {
  params.Validate();
  if (n < 2) throw std::invalid_argument("corollary bound needs n >= 2");
  if (!(nu_prime > 0.0 && nu_prime <= CorNuLimit(n))) {
    throw PreconditionError("corollary bound requires 0 < nu' <= 1/sqrt(n ln n) = " +
                            std::to_string(CorNuLimit(n)) + " (got " + std::to_string(nu_prime) +
                            ")");
  }
  const double c_T_theta = 2.0 * std::pow(static_cast<double>(T), 4.0) * params.C * (1.0 + theta);
  const double ln_n = std::log(static_cast<double>(n));
  const double first = c_T_theta * std::pow(nu_prime, NuExponent(2 * L + 1)) * std::pow(ln_n, 1.5);
  const double second =
      static_cast<double>(L - 1) *
      std::exp(-params.c * std::pow(nu_prime, NuExponent(2 * L - 1)) * static_cast<double>(n));
  const double third = std::exp(-0.25 * std::sqrt(static_cast<double>(n)));
  return first + second + third;
}

double ChernoffTail(std::size_t n, double p, double eps) {
  CheckUnit(p, "p");
  if (!(eps > 0.0)) throw std::invalid_argument("chernoff tail needs eps > 0");
  const double mu = static_cast<double>(n) * p;
  return std::exp(-eps * eps * mu / (2.0 + eps));
}

long double BinomialPmf(std::size_t n, long double p, std::size_t k) {
  if (k > n) return 0.0L;
  if (p <= 0.0L) return k == 0 ? 1.0L : 0.0L;
  if (p >= 1.0L) return k == n ? 1.0L : 0.0L;
  const long double nn = static_cast<long double>(n);
  const long double kk = static_cast<long double>(k);
  const long double log_choose = std::lgamma(nn + 1.0L) - std::lgamma(kk + 1.0L) -
                                 std::lgamma(nn - kk + 1.0L);
  return std::exp(log_choose + kk * std::log(p) + (nn - kk) * std::log1p(-p));
}

long double BinomialCdf(std::size_t n, long double p, std::size_t k) {
  if (k >= n) return 1.0L;
  // Sum the smaller terms first.
  std::vector<long double> terms;
  for (std::size_t j = 0; j <= k; ++j) terms.push_back(BinomialPmf(n, p, j));
  std::sort(terms.begin(), terms.end());
  long double sum = 0.0L;
  for (long double v : terms) sum += v;
  return std::min(sum, 1.0L);
}

long double BinomialSurvival(std::size_t n, long double p, std::size_t k) {
  if (k >= n) return 0.0L;
  std::vector<long double> terms;
  for (std::size_t j = k + 1; j <= n; ++j) terms.push_back(BinomialPmf(n, p, j));
  std::sort(terms.begin(), terms.end());
  long double sum = 0.0L;
  for (long double v : terms) sum += v;
  return std::min(sum, 1.0L);
}

long double BinomialUpperTail(std::size_t n, double p, double eps) {
  const double threshold = (1.0 + eps) * static_cast<double>(n) * p;
  const double k0 = std::ceil(threshold - 1e-9);
  if (k0 <= 0.0) return 1.0L;
  if (k0 > static_cast<double>(n)) return 0.0L;
  return BinomialSurvival(n, p, static_cast<std::size_t>(k0) - 1);
}

ChernoffGridReport CheckChernoffGrid(std::size_t max_n, const std::vector<double>& ps,
                                     const std::vector<double>& epss) {
  ChernoffGridReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (double p : ps) {
      for (double eps : epss) {
        const double slack = ChernoffTail(n, p, eps) - static_cast<double>(BinomialUpperTail(n, p, eps));
        ++report.instances;
        if (slack < 0.0) ++report.violations;
        if (slack < report.min_slack) {
          report.min_slack = slack;
          report.worst_n = n;
          report.worst_p = p;
          report.worst_eps = eps;
        }
      }
    }
  }
  return report;
}

DominanceResult StochasticDominanceCheck(std::size_t n, double p, double q,
                                         std::size_t n_samples, const SeedSpec& seed) {
  if (!(p > 0.0 && p < q && q < 1.0)) {
    throw std::invalid_argument("stochastic dominance check needs 0 < p < q < 1");
  }
  DominanceResult result;
  result.holds = true;
  result.worst_gap = std::numeric_limits<long double>::infinity();
  for (std::size_t k = 0; k <= n; ++k) {
    // Compare on whichever side of the distribution is small, where the
    // extended-precision sums keep their relative accuracy.
    const long double sq = BinomialSurvival(n, q, k);
    long double gap;
    if (sq <= 0.5L) {
      gap = sq - BinomialSurvival(n, p, k);
    } else {
      gap = BinomialCdf(n, p, k) - BinomialCdf(n, q, k);
    }
    if (gap < result.worst_gap) {
      result.worst_gap = gap;
      result.worst_k = k;
    }
    if (gap < 0.0L) result.holds = false;
  }
  if (n_samples > 0) {
    result.empirical_checked = true;
    auto sample_cdf = [&](double prob, const SeedSpec& s) {
      auto engine = s.engine();
      std::binomial_distribution<std::size_t> dist(n, prob);
      std::vector<double> counts(n + 1, 0.0);
      for (std::size_t i = 0; i < n_samples; ++i) counts[dist(engine)] += 1.0;
      std::vector<double> cdf(n + 1, 0.0);
      double run = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        run += counts[k];
        cdf[k] = run / static_cast<double>(n_samples);
      }
      return cdf;
    };
    const auto fp = sample_cdf(p, seed.child(1));
    const auto fq = sample_cdf(q, seed.child(2));
    // DKW band at confidence 1 - 1e-6 for each of the two samples.
    const double band = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * static_cast<double>(n_samples)));
    for (std::size_t k = 0; k <= n; ++k) {
      if (fp[k] + 2.0 * band < fq[k]) result.empirical_holds = false;
    }
  }
  return result;
}

double LemmaA4Rhs(double rho, double a, double b) {
  return std::sqrt(std::max(0.0, 1.0 - rho * rho)) + std::abs(a) * (1.0 - rho) / rho +
         std::abs((b - a) / rho);
}

LemmaA4Result LemmaA4Check(double rho, double a, double b, std::size_t n_samples,
                           const SeedSpec& seed, std::size_t jobs) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("gaussian crossing check needs rho in (0, 1]");
  if (n_samples == 0) throw std::invalid_argument("gaussian crossing check needs n_samples >= 1");
  const std::size_t blocks = (n_samples + kA4Block - 1) / kA4Block;
  std::vector<long> low(blocks, 0);
  std::vector<long> high(blocks, 0);
  const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  ParallelFor(blocks, jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t blk = begin; blk < end; ++blk) {
      auto engine = seed.child(blk).engine();
      std::normal_distribution<double> normal;
      const std::size_t count = std::min(kA4Block, n_samples - blk * kA4Block);
      for (std::size_t i = 0; i < count; ++i) {
        const double x = normal(engine);
        const double z = normal(engine);
        const double y = rho * x + s * z;
        if (x <= a && y > b) ++low[blk];
        if (x > a && y <= b) ++high[blk];
      }
    }
  });
  long total_low = 0;
  long total_high = 0;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    total_low += low[blk];
    total_high += high[blk];
  }
  const long trials = static_cast<long>(n_samples);
  auto se = [trials](long hits) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  };
  LemmaA4Result r;
  r.lhs_low = static_cast<double>(total_low) / static_cast<double>(trials);
  r.lhs_high = static_cast<double>(total_high) / static_cast<double>(trials);
  r.se_low = se(total_low);
  r.se_high = se(total_high);
  r.rhs = LemmaA4Rhs(rho, a, b);
  r.holds_within_ci = r.lhs_low - 3.0 * r.se_low <= r.rhs && r.lhs_high - 3.0 * r.se_high <= r.rhs;
  return r;
}

}  // namespace spikestab
