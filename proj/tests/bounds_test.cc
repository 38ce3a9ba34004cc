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

#include "doctest.h"
#include "spikestab/bounds.h"

using namespace spikestab;

namespace {
const BoundParams kUnit{1.0, 1.0};
}

TEST_CASE("single-neuron bound") {
  CHECK(Thm1Bound(0.5, 1, 0.0, 100, kUnit, false) == 0.0);
  CHECK(Thm1Bound(0.5, 1, 0.01, 100, kUnit, false) == doctest::Approx(0.6907755278982137).epsilon(1e-14));
  CHECK(Thm1Bound(0.5, 1, 0.01, 100, kUnit, true) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(Thm1Bound(0.5, 2, 0.01, 100, kUnit, false) / Thm1Bound(0.5, 1, 0.01, 100, kUnit, false) ==
        doctest::Approx(4.0));
  CHECK(Thm1Bound(0.5, 1, 0.01, 100, BoundParams{3.0, 1.0}, true) == doctest::Approx(0.45));
  CHECK_THROWS(Thm1Bound(0.5, 1, 0.01, 100, BoundParams{-1.0, 1.0}, true));
}

TEST_CASE("deep bound") {
  const double nu = 1.0 / std::sqrt(1000.0);
  const Thm2Terms terms = Thm2BoundTerms(0.5, 10, 2, 1000, 2, nu, kUnit);
  CHECK(terms.main == doctest::Approx(488935.6111680985).epsilon(1e-12));
  CHECK(terms.depth == doctest::Approx(9.487259005208344e-283).epsilon(1e-9));
  CHECK(Thm2Bound(0.5, 10, 2, 1000, 2, nu, kUnit) == terms.total());

  const Thm2Terms shallow = Thm2BoundTerms(0.5, 10, 1, 1000, 2, nu, kUnit);
  CHECK(shallow.depth == 0.0);
  // The nu exponent is 1/8 at L = 1 and 1/32 at L = 2.
  const double ratio1 = Thm2BoundTerms(0.5, 10, 1, 1000, 2, 0.5, kUnit).main /
                        Thm2BoundTerms(0.5, 10, 1, 1000, 2, 0.25, kUnit).main;
  CHECK(ratio1 == doctest::Approx(std::pow(2.0, 1.0 / 8)));
  const double ratio2 = Thm2BoundTerms(0.5, 10, 2, 1000, 2, 0.5, kUnit).main /
                        Thm2BoundTerms(0.5, 10, 2, 1000, 2, 0.25, kUnit).main;
  CHECK(ratio2 == doctest::Approx(std::pow(2.0, 1.0 / 32)));
}

TEST_CASE("corollary bound") {
  const std::size_t n = 10000;
  const double limit = CorNuLimit(n);
  CHECK(limit == doctest::Approx(1.0 / std::sqrt(n * std::log(static_cast<double>(n)))));
  CHECK(CorBound(0.5, 10, 2, n, limit, kUnit) == doctest::Approx(701403.5623117862).epsilon(1e-12));
  const double shallow = CorBound(0.5, 10, 1, n, limit, kUnit);
  const double third = std::exp(-25.0);
  CHECK(third == doctest::Approx(1.3887943864964021e-11));
  CHECK(shallow == doctest::Approx(2.0 * Thm2BoundTerms(0.5, 10, 1, n, 1, limit, kUnit).main + third));
  CHECK_THROWS_AS(CorBound(0.5, 10, 2, n, 1.01 * limit, kUnit), PreconditionError);
  CHECK_THROWS_AS(CorBound(0.5, 10, 2, n, 0.5, kUnit), PreconditionError);
}

TEST_CASE("chernoff tail") {
  CHECK(ChernoffTail(100, 0.3, 1.0) == doctest::Approx(4.5399929762484854e-05).epsilon(1e-12));
  CHECK(ChernoffTail(100, 0.0, 1.0) == 1.0);
  CHECK(static_cast<double>(BinomialUpperTail(100, 0.3, 1.0)) ==
        doctest::Approx(5.129949815583161e-10).epsilon(1e-9));
  CHECK(static_cast<double>(BinomialUpperTail(100, 0.3, 0.5)) ==
        doctest::Approx(0.001085746064685438).epsilon(1e-9));

  auto engine = SeedSpec(1).engine();
  std::binomial_distribution<int> bin(100, 0.3);
  long hits = 0;
  for (int k = 0; k < 1000000; ++k) hits += bin(engine) >= 60;
  CHECK(hits / 1e6 <= ChernoffTail(100, 0.3, 1.0));

  const ChernoffGridReport grid = CheckChernoffGrid(200, {0.1, 0.3, 0.5}, {0.5, 1.0, 2.0});
  CHECK(grid.instances == 1800);
  CHECK(grid.violations == 0);
}

TEST_CASE("exact binomial distribution") {
  long double total = 0;
  for (std::size_t k = 0; k <= 30; ++k) total += BinomialPmf(30, 0.4L, k);
  CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t k = 0; k <= 30; ++k) {
    CHECK(static_cast<double>(BinomialCdf(30, 0.4L, k) + BinomialSurvival(30, 0.4L, k)) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(static_cast<double>(BinomialPmf(10, 0.5L, 5)) == doctest::Approx(252.0 / 1024));
}

TEST_CASE("binomial stochastic order") {
  const DominanceResult r = StochasticDominanceCheck(10, 0.2, 0.5, 0, SeedSpec(2));
  CHECK(r.holds);
  CHECK(r.worst_gap >= 0.0L);
  CHECK(StochasticDominanceCheck(10, 0.5 - 1e-9, 0.5, 0, SeedSpec(3)).holds);
  CHECK_THROWS(StochasticDominanceCheck(10, 0.5, 0.2, 0, SeedSpec(4)));
  const DominanceResult empirical = StochasticDominanceCheck(40, 0.3, 0.35, 100000, SeedSpec(5));
  CHECK(empirical.empirical_checked);
  CHECK(empirical.empirical_holds);
}

TEST_CASE("gaussian crossing bound") {
  const LemmaA4Result perfect = LemmaA4Check(1.0, 0.3, 0.3, 10000, SeedSpec(6));
  CHECK(perfect.lhs_low == 0.0);
  CHECK(perfect.lhs_high == 0.0);
  CHECK(perfect.rhs == 0.0);
  CHECK(perfect.holds_within_ci);

  CHECK(LemmaA4Rhs(0.99, 0.5, 0.5) == doctest::Approx(0.146117864847164).epsilon(1e-12));
  const LemmaA4Result r = LemmaA4Check(0.99, 0.5, 0.5, 1000000, SeedSpec(7), 4);
  CHECK(r.holds_within_ci);
  CHECK(r.lhs_low <= r.rhs);
  CHECK(r.lhs_high <= r.rhs);

  const LemmaA4Result serial = LemmaA4Check(0.9, -1.0, 1.0, 300000, SeedSpec(8), 1);
  const LemmaA4Result threaded = LemmaA4Check(0.9, -1.0, 1.0, 300000, SeedSpec(8), 8);
  CHECK(serial.lhs_low == threaded.lhs_low);
  CHECK(serial.lhs_high == threaded.lhs_high);

  for (double rho : {0.5, 0.9, 0.99}) {
    for (double a : {-1.0, 0.0, 1.0}) {
      for (double b : {-1.0, 0.0, 1.0}) {
        CHECK(LemmaA4Check(rho, a, b, 100000, SeedSpec(9), 2).holds_within_ci);
      }
    }
  }
}
