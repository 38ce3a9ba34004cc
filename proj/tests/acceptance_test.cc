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


// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
//
//   acceptance_test [--jobs N] [--only 1,7,8]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spikestab/bounds.h"
#include "spikestab/checks.h"
#include "spikestab/experiment.h"
#include "spikestab/sensitivity.h"

using namespace spikestab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const CheckResult& Find(const CheckReport& report, const std::string& name) {
  for (const CheckResult& c : report.checks) {
    if (c.name == name) return c;
  }
  throw std::logic_error("no check named " + name);
}

Verdict FromCheck(const CheckResult& c, double limit_seconds) {
  const bool fast = c.seconds < limit_seconds;
  return {c.passed() && fast,
          Fmt("%zu instances, %zu violations, %.2f s (limit %.0f s)", c.instances, c.violations, c.seconds,
              limit_seconds)};
}

EnsOptions Trials(std::size_t w, std::size_t i, std::size_t p, std::size_t jobs) {
  EnsOptions o;
  o.n_weights = w;
  o.n_inputs = i;
  o.n_perturbations = p;
  o.jobs = jobs;
  return o;
}

Verdict Calibration(std::size_t jobs) {
  struct Case {
    const char* name;
    std::size_t n;
    BooleanFunction f;
    double nu;
    double truth;
  };
  std::vector<Case> cases;
  for (double nu : {0.05, 0.1}) {
    cases.push_back({"dictator", 16, Dictator(0), nu, nu});
    cases.push_back({"parity", 8, Parity(), nu, 0.5 * (1.0 - std::pow(1.0 - 2.0 * nu, 8))});
  }
  bool pass = true;
  std::string detail;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    const FunctionFamily family(c.n, c.f);
    const auto model = PerturbationModel::IidFlip(c.nu);
    const SeedSpec seed = SeedSpec(kSeed, {6, k});
    const SensitivityEstimate one = EnsMonteCarlo(family, model, Trials(1, 1000, 100, jobs), seed);
    const double z = std::abs(one.estimate - c.truth) / one.std_error;
    int covered = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const SensitivityEstimate e = EnsMonteCarlo(family, model, Trials(1, 1000, 100, jobs), seed.child(r + 1));
      covered += std::abs(e.estimate - c.truth) <= 4.0 * e.std_error;
    }
    pass = pass && z <= 3.0 && covered >= 99;
    detail += Fmt("%s%s nu=%.2f: |z|=%.2f, 4se coverage %d/100", detail.empty() ? "" : "; ", c.name, c.nu, z,
                  covered);
  }
  return {pass, detail};
}

// Single neuron, static inputs, nu = 1/sqrt(n). The static form of the
// single-neuron bound is fitted at n = 100 (upper 3 se at every step) and
// checked at the larger n for every step t.
Verdict SingleNeuronTrend(std::size_t jobs) {
  const auto start = std::chrono::steady_clock::now();
  const NeuronParams params{1.0, 0.5, 10, Alphabet::kSigned};
  const std::vector<std::size_t> ns = {100, 1000, 10000};
  std::vector<SensitivityEstimate> est;
  for (std::size_t n : ns) {
    const double nu = 1.0 / std::sqrt(static_cast<double>(n));
    est.push_back(EnsMonteCarlo(NeuronFamily(n, params), PerturbationModel::IidFlip(nu), Trials(10, 100, 100, jobs),
                                SeedSpec(kSeed)));
  }
  const BoundParams unit{1.0, 1.0};
  auto shape = [&](std::size_t n, std::size_t t, bool stat) {
    return Thm1Bound(params.theta, t, 1.0 / std::sqrt(static_cast<double>(n)), n, unit, stat);
  };
  auto fit = [&](bool stat) {
    double C = 0.0;
    for (std::size_t t = 1; t <= params.latency; ++t) {
      C = std::max(C, (est[0].step_estimate(t) + 3.0 * est[0].step_std_error(t)) / shape(ns[0], t, stat));
    }
    return C;
  };
  // Largest ratio of measured ENS_t to the fitted bound over n > 100 and all t.
  auto worst = [&](bool stat, double C, std::size_t* at_n, std::size_t* at_t) {
    double w = 0.0;
    for (std::size_t k = 1; k < ns.size(); ++k) {
      for (std::size_t t = 1; t <= params.latency; ++t) {
        const double r = est[k].step_estimate(t) / (C * shape(ns[k], t, stat));
        if (r > w) {
          w = r;
          *at_n = ns[k];
          *at_t = t;
        }
      }
    }
    return w;
  };
  const double c_static = fit(true);
  std::size_t wn = 0, wt = 0, ln_n = 0, ln_t = 0;
  const double ratio_static = worst(true, c_static, &wn, &wt);
  const double c_log = fit(false);
  const double ratio_log = worst(false, c_log, &ln_n, &ln_t);

  bool monotone = true;
  for (std::size_t k = 1; k < ns.size(); ++k) {
    const double slack = 3.0 * std::hypot(est[k - 1].std_error, est[k].std_error);
    monotone = monotone && est[k].estimate <= est[k - 1].estimate + slack;
  }
  const double secs = Seconds(start);
  const bool below = ratio_static <= 1.0;
  std::string detail = Fmt("ENS = %.4f (se %.4f), %.4f (se %.4f), %.4f (se %.4f) at n = 100, 1000, 10000; ",
                           est[0].estimate, est[0].std_error, est[1].estimate, est[1].std_error, est[2].estimate,
                           est[2].std_error);
  detail += Fmt("(a) static bound, C = %.4f fitted at n=100: worst ENS_t/bound = %.3f at n=%zu t=%zu -> %s; ",
                c_static, ratio_static, wn, wt, below ? "below" : "EXCEEDED");
  detail += Fmt("[info] ln n form, C = %.5f: worst ratio %.3f at n=%zu t=%zu; ", c_log, ratio_log, ln_n, ln_t);
  detail += Fmt("(b) non-increasing within 3 se: %s; %.1f s (limit 300 s)", monotone ? "yes" : "NO", secs);
  return {below && monotone && secs < 300.0, detail};
}

// Five-layer vs one-layer argmax classifiers (n_L = 2) at matched n, with
// reduced trial counts (10 x 20 x 20).
Verdict DepthComparison(std::size_t jobs) {
  const NeuronParams params{1.0, 0.5, 10, Alphabet::kSigned};
  const std::vector<std::size_t> ns = {100, 1000};
  std::vector<SensitivityEstimate> deep, shallow;
  for (std::size_t n : ns) {
    const double nu = 1.0 / std::sqrt(static_cast<double>(n));
    const auto model = PerturbationModel::IidFlip(nu);
    std::vector<std::size_t> widths(5, n);
    widths.push_back(2);
    deep.push_back(EnsMonteCarlo(NetworkFamily(widths, params), model, Trials(10, 20, 20, jobs), SeedSpec(kSeed)));
    shallow.push_back(EnsMonteCarlo(NetworkFamily({n, 2}, params), model, Trials(10, 20, 20, jobs), SeedSpec(kSeed)));
  }
  bool exceeds = true;
  std::string detail;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double z = (deep[k].estimate - shallow[k].estimate) / std::hypot(deep[k].std_error, shallow[k].std_error);
    exceeds = exceeds && z > 3.0;
    detail += Fmt("n=%zu: L=5 %.4f vs L=1 %.4f (z=%.1f); ", ns[k], deep[k].estimate, shallow[k].estimate, z);
  }
  const BoundParams unit{1.0, 1.0};
  const auto nu0 = 1.0 / std::sqrt(static_cast<double>(ns[0]));
  const double C = (deep[0].estimate + 3.0 * deep[0].std_error) /
                   Thm2BoundTerms(params.theta, params.latency, 5, ns[0], 2, nu0, unit).main;
  bool below = true;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double nu = 1.0 / std::sqrt(static_cast<double>(ns[k]));
    const double bound = Thm2Bound(params.theta, params.latency, 5, ns[k], 2, nu, BoundParams{C, 1.0});
    below = below && deep[k].estimate <= bound;
    detail += Fmt("bound(C=%.3g, c=1) at n=%zu = %.4f, margin bound/ENS = %.2f; ", C, ns[k], bound,
                  bound / deep[k].estimate);
  }
  detail += Fmt("ties in L=5 flips: %ld/%ld and %ld/%ld", deep[0].ties, deep[0].flips, deep[1].ties, deep[1].flips);
  return {exceeds && below, detail};
}

std::string RunToString(const std::string& yaml, std::size_t jobs) {
  const ExperimentConfig config = ParseConfig(yaml, "<acceptance>");
  std::ostringstream csv;
  RunOptions options;
  options.jobs = jobs;
  RunExperiment(config, options, csv);
  return csv.str();
}

Verdict Determinism(std::size_t jobs) {
  const std::vector<std::string> configs = {
      "experiment: single_neuron_ens\nseed: 1\nmodel: {n: [100, 1000]}\n"
      "trials: {n_weights: 10, n_inputs: 20, n_perturbations: 20}\n",
      "experiment: deep_ens\nseed: 2\nmodel: {n: [60], L: 3, classes: 3}\n"
      "perturbation: {nu: [\"2/n\", \"0.1\"]}\ntrials: {n_weights: 4, n_inputs: 10, n_perturbations: 10}\n",
      "experiment: deep_ens\nseed: 3\nmodel: {n: [40], L: 2, encoding: dynamic}\n"
      "perturbation: {kind: fixed_hamming, h: [2], per_step: true}\n"
      "trials: {n_weights: 3, n_inputs: 10, n_perturbations: 10}\n",
      "experiment: spectrum\nseed: 4\nmodel: {n: [8, 10], L: 2}\ntrials: {n_weights: 6}\n",
      "experiment: nh_profile\nseed: 5\nmodel: {n: [10, 20]}\ntrials: {n_weights: 3, n_inputs: 10, n_perturbations: 10}\n",
      "experiment: bound_table\nmodel: {n: [100, 1000], L: 3}\nperturbation: {nu: [\"1/sqrt(n)\", \"2/n\"]}\n",
      "experiment: lemma_checks\nseed: 6\ntrials: {n_weights: 1, n_inputs: 10, n_perturbations: 1000}\n",
  };
  bool pass = true;
  std::size_t bytes = 0;
  std::string detail;
  for (const std::string& yaml : configs) {
    const std::string a = RunToString(yaml, 1);
    const std::string b = RunToString(yaml, std::max<std::size_t>(jobs, 8));
    const std::string c = RunToString(yaml, 1);
    bytes += a.size();
    if (a != b || a != c) {
      pass = false;
      detail += "mismatch for: " + yaml.substr(0, yaml.find('\n')) + "; ";
    }
  }

  // Manifests differ only in the wall-time field.
  const auto dir = std::filesystem::temp_directory_path() / "spikestab_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<nlohmann::json> manifests;
  std::vector<std::string> csvs;
  for (std::size_t j : {std::size_t{1}, std::size_t{8}}) {
    ExperimentConfig config = ParseConfig(configs[0], "<acceptance>");
    config.output = (dir / ("jobs" + std::to_string(j) + ".csv")).string();
    RunOptions options;
    options.jobs = j;
    const RunSummary s = RunExperiment(config, options);
    std::ifstream csv(s.csv_path), manifest(s.manifest_path);
    std::stringstream text;
    text << csv.rdbuf();
    csvs.push_back(text.str());
    nlohmann::json m = nlohmann::json::parse(manifest);
    m.erase("wall_time_seconds");
    m.erase("csv");
    manifests.push_back(m);
  }
  std::filesystem::remove_all(dir);
  const bool files_match = csvs[0] == csvs[1] && manifests[0] == manifests[1];
  pass = pass && files_match;
  detail += Fmt("%zu experiment configs (every kind) rerun at jobs 1, %zu, 1: %zu CSV bytes compared; "
                "written CSV and manifest (minus wall time) identical at jobs 1 and 8: %s",
                configs.size(), std::max<std::size_t>(jobs, 8), bytes, files_match ? "yes" : "NO");
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikestab acceptance suite"};
  std::size_t jobs = 8;
  std::vector<int> only;
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int id) { return selected.empty() || selected.count(id); };

  CheckReport checks;
  if (wanted(1) || wanted(2) || wanted(3) || wanted(4) || wanted(5) || wanted(9)) {
    CheckOptions options;
    options.seed = kSeed;
    options.jobs = jobs;
    checks = RunChecks(options);
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"closed-form equivalence",
       [&] { return FromCheck(Find(checks, "closed_form_equivalence"), 10.0); }},
      {"Parseval and round trip", [&] { return FromCheck(Find(checks, "parseval_round_trip"), 5.0); }},
      {"spectrum vs exhaustive NS", [&] { return FromCheck(Find(checks, "spectrum_vs_exhaustive_ns"), 120.0); }},
      {"factor-4 low-degree concentration (exact integer arithmetic; 100 classifiers incl. the 20 above)",
       [&] { return FromCheck(Find(checks, "low_degree_concentration"), 120.0); }},
      {"ENS / N_h identity", [&] { return FromCheck(Find(checks, "ens_nh_identity"), 120.0); }},
      {"dictator and parity calibration", [&] { return Calibration(jobs); }},
      {"single-neuron trend vs fitted bound", [&] { return SingleNeuronTrend(jobs); }},
      {"depth comparison vs fitted deep bound", [&] { return DepthComparison(jobs); }},
      {"tail, order and crossing lemmas",
       [&] {
         const CheckResult& a = Find(checks, "chernoff_tail");
         const CheckResult& b = Find(checks, "stochastic_dominance");
         const CheckResult& c = Find(checks, "gaussian_crossing");
         const double secs = a.seconds + b.seconds + c.seconds;
         return Verdict{a.passed() && b.passed() && c.passed() && secs < 60.0,
                        Fmt("chernoff %zu/%zu hold, dominance %zu/%zu hold, crossing %zu/%zu hold, %.2f s "
                            "(limit 60 s)",
                            a.instances - a.violations, a.instances, b.instances - b.violations, b.instances,
                            c.instances - c.violations, c.instances, secs)};
       }},
      {"determinism", [&] { return Determinism(jobs); }},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << "criterion " << (id < 10 ? " " : "") << id << ": " << (v.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << " | " << v.detail << Fmt(" | %.1f s", Seconds(start)) << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
