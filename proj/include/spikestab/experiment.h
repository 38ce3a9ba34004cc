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


#ifndef SPIKESTAB_EXPERIMENT_H_
#define SPIKESTAB_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikestab/bounds.h"
#include "spikestab/core.h"
#include "spikestab/neuron.h"
#include "spikestab/schedule.h"

namespace spikestab {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

// Desk-scale caps lifted by --full.
inline constexpr std::size_t kDefaultMaxNShallow = 10000;
inline constexpr std::size_t kDefaultMaxNDeep = 2000;

enum class ExperimentKind {
  kSingleNeuronEns,
  kDeepEns,
  kSpectrum,
  kNhProfile,
  kBoundTable,
  kLemmaChecks,
};

std::string ToString(ExperimentKind kind);
ExperimentKind ParseExperimentKind(const std::string& name);

// Invalid configuration; `what()` carries "source:line:column: message".
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelGrid {
  std::vector<std::size_t> n = {100};
  std::size_t L = 1;
  std::size_t T = 10;
  double theta = 0.5;
  double beta = 1.0;
  Alphabet alphabet = Alphabet::kSigned;
  std::size_t classes = 2;  // output width n_L of deep networks
  Encoding encoding = Encoding::kStatic;

  NeuronParams params() const { return NeuronParams{beta, theta, T, alphabet}; }
  // [n, n, ..., n, classes] with L - 1 hidden layers of width n.
  std::vector<std::size_t> widths(std::size_t n_in) const;
};

struct PerturbationGrid {
  PerturbationModel::Kind kind = PerturbationModel::Kind::kIidFlip;
  std::vector<Schedule> nu = {Schedule("1/sqrt(n)")};
  std::vector<std::size_t> h;
  bool per_step = false;
};

struct TrialCounts {
  std::size_t n_weights = 10;
  std::size_t n_inputs = 100;
  std::size_t n_perturbations = 100;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSingleNeuronEns;
  ModelGrid model;
  PerturbationGrid perturbation;
  TrialCounts trials;
  std::uint64_t seed = 0;
  BoundParams bounds;
  std::string output;           // CSV path; the manifest goes next to it
  std::string source_text;      // raw config text, hashed into the manifest
};

// Parses a YAML config. Unknown keys, wrong types and out-of-range values
// raise ConfigError with the offending line.
ExperimentConfig ParseConfig(const std::string& text, const std::string& source_name = "<config>");
ExperimentConfig LoadConfig(const std::string& path);

struct RunOptions {
  std::size_t jobs = 1;
  bool full = false;
  std::optional<std::uint64_t> seed_override;
};

struct RunSummary {
  std::size_t rows = 0;
  std::vector<std::string> skipped;
  std::string csv_path;
  std::string manifest_path;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  bool checks_passed = true;  // lemma_checks only
};

const std::vector<std::string>& CsvHeader(ExperimentKind kind);

// Runs the grid and streams rows to `csv` in grid order. The CSV depends only
// on the config and seed, never on `jobs`.
RunSummary RunExperiment(const ExperimentConfig& config, const RunOptions& options,
                         std::ostream& csv);
// Writes config.output and its manifest (<output>.manifest.json).
RunSummary RunExperiment(const ExperimentConfig& config, const RunOptions& options);

std::string ManifestJson(const ExperimentConfig& config, const RunSummary& summary);

// 64-bit FNV-1a.
std::uint64_t Fnv1a(const std::string& text);

}  // namespace spikestab

#endif  // SPIKESTAB_EXPERIMENT_H_
