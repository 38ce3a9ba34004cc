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


#include "spikestab/checks.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "spikestab/bounds.h"
#include "spikestab/fourier.h"
#include "spikestab/neuron.h"
#include "spikestab/sensitivity.h"

namespace spikestab {

namespace {

using Json = nlohmann::ordered_json;

CheckResult NewResult(const char* name) {
  CheckResult r;
  r.name = name;
  return r;
}

void Record(CheckResult& result, bool ok, const Json& instance) {
  ++result.instances;
  if (ok) return;
  if (result.violations++ == 0) result.first_failure = instance.dump();
}

std::vector<std::int8_t> Train(const SpikeTrain& t) { return t.spikes; }

CheckResult ClosedForm(const SeedSpec& seed) {
  CheckResult r = NewResult("closed_form_equivalence");
  const std::size_t ns[] = {8, 32, 128};
  const std::size_t ts[] = {1, 5, 10};
  const double thetas[] = {0.0, 0.5, 1.0};
  std::size_t k = 0;
  for (std::size_t n : ns) {
    for (std::size_t T : ts) {
      for (double theta : thetas) {
        for (std::size_t rep = 0; rep < 371; ++rep, ++k) {
          const SeedSpec s = seed.child(k);
          NeuronParams params{1.0, theta, T, Alphabet::kSigned};
          const Matrix w = GaussianWeights(1, n, 1.0 / static_cast<double>(n), s.child(1));
          auto engine = s.child(2).engine();
          InputSequence x;
          if (rep % 2 == 0) {
            x = InputSequence::Static(SampleUniformPoint(n, engine), T);
          } else {
            std::vector<HypercubePoint> steps;
            for (std::size_t t = 0; t < T; ++t) steps.push_back(SampleUniformPoint(n, engine));
            x = InputSequence::Dynamic(std::move(steps));
          }
          const bool ok = Train(Run(params, w.row(0), x)) == Train(RunClosedForm(params, w.row(0), x));
          Record(r, ok, {{"n", n}, {"T", T}, {"theta", theta}, {"case", k}});
        }
      }
    }
  }
  return r;
}

TruthTable RandomTable(std::size_t n, const SeedSpec& seed) {
  auto engine = seed.engine();
  TruthTable table{n, std::vector<std::int8_t>(std::size_t{1} << n)};
  for (auto& v : table.values) v = (engine() >> 63) ? 1 : -1;
  return table;
}

CheckResult ParsevalRoundTrip(const SeedSpec& seed, bool inject_fault) {
  CheckResult r = NewResult("parseval_round_trip");
  for (std::size_t k = 0; k < 100; ++k) {
    TruthTable table = RandomTable(12, seed.child(k));
    const SpectrumTable spectrum = WalshHadamard(table);
    if (inject_fault && k == 0) table.values[0] = static_cast<std::int8_t>(-table.values[0]);
    const double parseval_err = std::abs(ParsevalSum(spectrum) - 1.0);
    const std::vector<double> back = InverseWalshHadamard(spectrum);
    std::size_t mismatches = 0;
    for (std::size_t m = 0; m < back.size(); ++m) {
      if (back[m] != static_cast<double>(table.values[m])) ++mismatches;
    }
    r.worst = std::max(r.worst, parseval_err);
    Record(r, parseval_err <= 1e-9 && mismatches == 0,
           {{"n", 12}, {"table", k}, {"parseval_error", parseval_err}, {"round_trip_mismatches", mismatches},
            {"fault_injected", inject_fault && k == 0}});
  }
  return r;
}

NetworkConfig RandomClassifier(std::size_t k, std::size_t n, const SeedSpec& seed) {
  const std::size_t L = 1 + k % 2;
  std::vector<std::size_t> widths(L, n);
  widths.push_back(2);
  return InitRandom(widths, NeuronParams{1.0, 0.5, 10, Alphabet::kSigned}, seed.child(k));
}

// Rates of the spectral checks, as exact fractions.
struct Rate {
  double nu;
  std::uint64_t num, den;
};
constexpr Rate kSpectralRates[] = {{0.05, 1, 20}, {0.1, 1, 10}, {0.25, 1, 4}};

CheckResult SpectrumVsExhaustive(const SeedSpec& seed) {
  CheckResult r = NewResult("spectrum_vs_exhaustive_ns");
  for (std::size_t k = 0; k < 20; ++k) {
    const TruthTable table = TruthTableOf(RandomClassifier(k, 10, seed));
    const SpectrumTable spectrum = WalshHadamard(table);
    for (const Rate& rate : kSpectralRates) {
      const double err = std::abs(ExactNs(spectrum, rate.nu) - ExhaustiveNs(table, rate.nu));
      r.worst = std::max(r.worst, err);
      Record(r, err <= 1e-9, {{"classifier", k}, {"nu", rate.nu}, {"error", err}});
    }
  }
  return r;
}

// The inequality is decided in integer arithmetic; the floating-point margin
// is only reported.
CheckResult LowDegreeConcentration(const SeedSpec& seed) {
  CheckResult r = NewResult("low_degree_concentration");
  r.worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 100; ++k) {
    const SpectrumTable spectrum = WalshHadamard(TruthTableOf(RandomClassifier(k, 10, seed)));
    for (const Rate& rate : kSpectralRates) {
      const ConcentrationCheck c = CheckConcentration(spectrum, rate.nu);
      const bool exact = ConcentrationHoldsExactly(spectrum, rate.num, rate.den);
      r.worst = std::min(r.worst, c.bound - c.tail);
      Record(r, exact,
             {{"classifier", k}, {"nu", rate.nu}, {"degree", c.degree}, {"tail", c.tail}, {"bound", c.bound}});
    }
  }
  return r;
}

CheckResult EnsNhIdentity(const SeedSpec& seed) {
  CheckResult r = NewResult("ens_nh_identity");
  for (std::size_t k = 0; k < 5; ++k) {
    const TruthTable table = TruthTableOf(RandomClassifier(k, 10, seed));
    const double err = std::abs(EnsFromNh(NhProfileExact(table), 0.1) - ExhaustiveNs(table, 0.1));
    r.worst = std::max(r.worst, err);
    Record(r, err <= 1e-9, {{"classifier", k}, {"nu", 0.1}, {"error", err}});
  }
  return r;
}

CheckResult Chernoff() {
  CheckResult r = NewResult("chernoff_tail");
  r.worst = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 200; ++n) {
    for (double p : {0.1, 0.3, 0.5}) {
      for (double eps : {0.5, 1.0, 2.0}) {
        const double exact = static_cast<double>(BinomialUpperTail(n, p, eps));
        const double bound = ChernoffTail(n, p, eps);
        r.worst = std::min(r.worst, bound - exact);
        Record(r, exact <= bound, {{"n", n}, {"p", p}, {"eps", eps}, {"exact", exact}, {"bound", bound}});
      }
    }
  }
  return r;
}

CheckResult Dominance(const SeedSpec& seed) {
  CheckResult r = NewResult("stochastic_dominance");
  r.worst = std::numeric_limits<double>::infinity();
  auto engine = seed.engine();
  std::uniform_int_distribution<std::size_t> n_dist(1, 200);
  std::uniform_real_distribution<double> u_dist(0.0, 1.0);
  for (std::size_t k = 0; k < 50; ++k) {
    const std::size_t n = n_dist(engine);
    double p = u_dist(engine), q = u_dist(engine);
    if (p > q) std::swap(p, q);
    if (!(p > 0.0 && p < q && q < 1.0)) continue;
    const DominanceResult d = StochasticDominanceCheck(n, p, q, 0, seed.child(k));
    r.worst = std::min(r.worst, static_cast<double>(d.worst_gap));
    Record(r, d.holds, {{"n", n}, {"p", p}, {"q", q}, {"worst_k", d.worst_k}});
  }
  return r;
}

CheckResult GaussianCrossing(const SeedSpec& seed, std::size_t jobs) {
  CheckResult r = NewResult("gaussian_crossing");
  r.worst = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (double rho : {0.5, 0.9, 0.99}) {
    for (double a : {-1.0, 0.0, 1.0}) {
      for (double b : {-1.0, 0.0, 1.0}) {
        const LemmaA4Result res = LemmaA4Check(rho, a, b, 200000, seed.child(k++), jobs);
        const double lhs = std::max(res.lhs_low, res.lhs_high);
        r.worst = std::min(r.worst, res.rhs - lhs);
        Record(r, res.holds_within_ci,
               {{"rho", rho}, {"a", a}, {"b", b}, {"lhs_low", res.lhs_low}, {"lhs_high", res.lhs_high},
                {"rhs", res.rhs}});
      }
    }
  }
  return r;
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::string CheckReport::ToJson() const {
  Json j;
  j["passed"] = passed();
  Json list = Json::array();
  for (const CheckResult& c : checks) {
    Json item;
    item["name"] = c.name;
    item["passed"] = c.passed();
    item["instances"] = c.instances;
    item["violations"] = c.violations;
    item["worst"] = c.worst;
    item["seconds"] = c.seconds;
    if (!c.first_failure.empty()) item["first_failure"] = Json::parse(c.first_failure);
    list.push_back(item);
  }
  j["checks"] = list;
  return j.dump(2);
}

CheckReport RunChecks(const CheckOptions& options) {
  const SeedSpec root(options.seed);
  CheckReport report;
  auto timed = [&report](auto&& run) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult result = run();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(result));
  };
  timed([&] { return ClosedForm(root.child(1)); });
  timed([&] { return ParsevalRoundTrip(root.child(2), options.inject_fault); });
  timed([&] { return SpectrumVsExhaustive(root.child(3)); });
  timed([&] { return LowDegreeConcentration(root.child(3)); });
  timed([&] { return EnsNhIdentity(root.child(3)); });
  timed([] { return Chernoff(); });
  timed([&] { return Dominance(root.child(4)); });
  timed([&] { return GaussianCrossing(root.child(5), options.jobs); });
  return report;
}

}  // namespace spikestab
