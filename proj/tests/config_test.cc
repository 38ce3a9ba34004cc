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


#include <sstream>
#include <string>

#include "doctest.h"
#include "spikestab/experiment.h"

using namespace spikestab;

namespace {

std::string ErrorOf(const std::string& yaml) {
  try {
    ParseConfig(yaml, "test.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ExperimentConfig c = ParseConfig("experiment: single_neuron_ens\n");
  CHECK(c.kind == ExperimentKind::kSingleNeuronEns);
  CHECK(c.model.n == std::vector<std::size_t>{100});
  CHECK(c.model.T == 10);
  CHECK(c.model.theta == 0.5);
  CHECK(c.trials.n_weights == 10);
  CHECK(c.trials.n_inputs == 100);
  CHECK(c.trials.n_perturbations == 100);
  REQUIRE(c.perturbation.nu.size() == 1);
  CHECK(c.perturbation.nu[0].Evaluate(100) == 0.1);
}

TEST_CASE("full config") {
  const ExperimentConfig c = ParseConfig(R"(experiment: deep_ens
seed: 99
model:
  n: [100, 1000]
  L: 5
  T: 8
  theta: 1.0
  beta: 0.5
  alphabet: heaviside
  classes: 3
  encoding: dynamic
perturbation:
  kind: fixed_hamming
  h: [1, 4]
  per_step: true
trials: {n_weights: 2, n_inputs: 3, n_perturbations: 4}
bounds: {C: 0.1, c: 2}
output: out/x.csv
)");
  CHECK(c.kind == ExperimentKind::kDeepEns);
  CHECK(c.seed == 99);
  CHECK(c.model.widths(100) == std::vector<std::size_t>{100, 100, 100, 100, 100, 3});
  CHECK(c.model.alphabet == Alphabet::kHeaviside);
  CHECK(c.model.encoding == Encoding::kDynamic);
  CHECK(c.perturbation.kind == PerturbationModel::Kind::kFixedHamming);
  CHECK(c.perturbation.h == std::vector<std::size_t>{1, 4});
  CHECK(c.perturbation.per_step);
  CHECK(c.trials.n_perturbations == 4);
  CHECK(c.bounds.C == 0.1);
  CHECK(c.output == "out/x.csv");
}

TEST_CASE("errors carry line and column") {
  CHECK(Contains(ErrorOf("experiment: deep_ens\nmodel:\n  n: [100]\n  depth: 3\n"), "test.yaml:4:3"));
  CHECK(Contains(ErrorOf("experiment: deep_ens\nmodel:\n  n: [100]\n  depth: 3\n"), "unknown key 'depth'"));
  CHECK(Contains(ErrorOf("experiment: deep_ens\nmodel:\n  theta: -1\n"), "test.yaml:3:10"));
  CHECK(Contains(ErrorOf("experiment: deep_ens\nmodel:\n  T: ten\n"), "test.yaml:3:6"));
  CHECK(Contains(ErrorOf("experiment: tea\n"), "test.yaml:1:13"));
  CHECK(Contains(ErrorOf("experiment: [\n"), "test.yaml:"));
  CHECK(Contains(ErrorOf("seed: 1\n"), "missing required key 'experiment'"));
  CHECK(Contains(ErrorOf("experiment: deep_ens\nextra: 1\n"), "test.yaml:2:1"));
}

TEST_CASE("semantic validation") {
  CHECK(Contains(ErrorOf("experiment: single_neuron_ens\nmodel: {n: [4]}\nperturbation: {nu: [\"2\"]}\n"),
                 "nu schedule"));
  CHECK(Contains(ErrorOf("experiment: single_neuron_ens\nperturbation: {kind: fixed_hamming}\n"), "'h' list"));
  CHECK(Contains(ErrorOf("experiment: single_neuron_ens\nmodel: {n: [4]}\nperturbation: {kind: fixed_hamming, h: [5]}\n"),
                 "exceeds n=4"));
  CHECK(Contains(ErrorOf("experiment: spectrum\nmodel: {n: [30]}\n"), "n <= 24"));
  CHECK(Contains(ErrorOf("experiment: spectrum\nmodel: {n: [8], classes: 3}\n"), "classes: 2"));
  CHECK(Contains(ErrorOf("experiment: bound_table\nmodel: {n: [1]}\n"), "n >= 2"));
  CHECK(Contains(ErrorOf("experiment: single_neuron_ens\nmodel: {n: []}\n"), "must not be empty"));
  CHECK(Contains(ErrorOf("experiment: single_neuron_ens\nperturbation: {nu: [\"1/\"]}\n"), "test.yaml:2"));
  CHECK_THROWS_AS(LoadConfig("/nonexistent/config.yaml"), IoError);
}

TEST_CASE("experiment kinds round-trip") {
  for (auto k : {ExperimentKind::kSingleNeuronEns, ExperimentKind::kDeepEns, ExperimentKind::kSpectrum,
                 ExperimentKind::kNhProfile, ExperimentKind::kBoundTable, ExperimentKind::kLemmaChecks}) {
    CHECK(ParseExperimentKind(ToString(k)) == k);
  }
}

TEST_CASE("single-cell run writes one row with the resolved rate") {
  ExperimentConfig c = ParseConfig("experiment: single_neuron_ens\nmodel: {n: [100]}\n");
  std::ostringstream csv;
  const RunSummary s = RunExperiment(c, RunOptions{}, csv);
  CHECK(s.rows == 1);
  std::istringstream lines(csv.str());
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK_FALSE(std::getline(lines, extra));
  std::ostringstream expected_header;
  for (std::size_t i = 0; i < CsvHeader(c.kind).size(); ++i) expected_header << (i ? "," : "") << CsvHeader(c.kind)[i];
  CHECK(header == expected_header.str());
  CHECK(Contains(row, ",0.10000000000000001,1/sqrt(n),"));
}

TEST_CASE("caps skip oversized cells unless lifted") {
  ExperimentConfig c = ParseConfig("experiment: deep_ens\nmodel: {n: [20, 3000], L: 2}\ntrials: {n_weights: 1, n_inputs: 2, n_perturbations: 2}\n");
  std::ostringstream csv;
  const RunSummary s = RunExperiment(c, RunOptions{}, csv);
  CHECK(s.rows == 1);
  REQUIRE(s.skipped.size() == 1);
  CHECK(Contains(s.skipped[0], "3000"));
}
