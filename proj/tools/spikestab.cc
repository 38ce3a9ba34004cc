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


// spikestab command-line harness.
//
// Exit codes: 0 success, 1 property failure, 2 invalid configuration or
// arguments, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spikestab/bounds.h"
#include "spikestab/checks.h"
#include "spikestab/csv.h"
#include "spikestab/experiment.h"
#include "spikestab/fourier.h"
#include "spikestab/network.h"
#include "spikestab/network_io.h"
#include "spikestab/sensitivity.h"

namespace {

using namespace spikestab;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out;
  bool full = false;
};

struct ModelFlags {
  std::size_t n = 10;
  std::size_t L = 1;
  std::size_t T = 10;
  double theta = 0.5;
  double beta = 1.0;
  std::string alphabet = "signed";
  std::size_t classes = 2;
  std::string encoding = "static";
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "YAML experiment config");
  app->add_option("--seed", c.seed, "Master seed (overrides SPIKESTAB_SEED and the config)");
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output path");
  app->add_flag("--full", c.full, "Lift the desk-scale caps on n");
}

void AddModel(CLI::App* app, ModelFlags& m) {
  app->add_option("--n", m.n, "Input dimension")->check(CLI::PositiveNumber);
  app->add_option("--L", m.L, "Number of layers")->check(CLI::PositiveNumber);
  app->add_option("--T", m.T, "Latency (time steps)")->check(CLI::PositiveNumber);
  app->add_option("--theta", m.theta, "Firing threshold")->check(CLI::NonNegativeNumber);
  app->add_option("--beta", m.beta, "Leak factor")->check(CLI::Range(0.0, 1.0));
  app->add_option("--alphabet", m.alphabet, "signed|heaviside")
      ->check(CLI::IsMember({"signed", "heaviside"}));
  app->add_option("--classes", m.classes, "Output width n_L")->check(CLI::PositiveNumber);
  app->add_option("--encoding", m.encoding, "static|dynamic")->check(CLI::IsMember({"static", "dynamic"}));
}

// Seed precedence: --seed, then SPIKESTAB_SEED, then the config.
std::uint64_t ResolveSeed(const Common& c, std::uint64_t config_seed) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("SPIKESTAB_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("SPIKESTAB_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return config_seed;
}

// Fills model flags the user did not pass from the config's first grid point.
void ApplyConfigDefaults(const Common& c, CLI::App* app, ModelFlags& m, ExperimentConfig* out) {
  if (c.config.empty()) return;
  const ExperimentConfig config = LoadConfig(c.config);
  auto unset = [app](const char* name) { return app->count(name) == 0; };
  if (unset("--n")) m.n = config.model.n.front();
  if (unset("--L")) m.L = config.model.L;
  if (unset("--T")) m.T = config.model.T;
  if (unset("--theta")) m.theta = config.model.theta;
  if (unset("--beta")) m.beta = config.model.beta;
  if (unset("--alphabet")) m.alphabet = ToString(config.model.alphabet);
  if (unset("--classes")) m.classes = config.model.classes;
  if (unset("--encoding")) m.encoding = config.model.encoding == Encoding::kStatic ? "static" : "dynamic";
  if (out) *out = config;
}

ModelGrid ToGrid(const ModelFlags& m) {
  ModelGrid g;
  g.n = {m.n};
  g.L = m.L;
  g.T = m.T;
  g.theta = m.theta;
  g.beta = m.beta;
  g.alphabet = ParseAlphabet(m.alphabet);
  g.classes = m.classes;
  g.encoding = m.encoding == "static" ? Encoding::kStatic : Encoding::kDynamic;
  return g;
}

// Writes `text` to `path`, or to stdout when `path` is empty.
void Emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

HypercubePoint ParsePoint(const std::string& text) {
  std::vector<std::int8_t> coords;
  for (char ch : text) {
    if (ch == '+' || ch == '1') {
      coords.push_back(1);
    } else if (ch == '-' || ch == '0') {
      coords.push_back(-1);
    } else {
      throw std::invalid_argument("input points are strings over {+,-} or {1,0}; got '" + text + "'");
    }
  }
  return HypercubePoint(std::move(coords));
}

std::string PointString(const HypercubePoint& x) {
  std::string s;
  for (std::int8_t c : x.coords()) s += c > 0 ? '+' : '-';
  return s;
}

std::optional<BooleanFunction> NamedFunction(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "dictator") return Dictator();
  if (name == "parity") return Parity();
  if (name == "majority") return Majority();
  throw std::invalid_argument("unknown function '" + name + "' (expected dictator|parity|majority)");
}

// ---------------------------------------------------------------------------

int CmdSimulate(CLI::App* app, const Common& c, ModelFlags& m, const std::string& input,
                const std::string& load, const std::string& save) {
  ApplyConfigDefaults(c, app, m, nullptr);
  const std::uint64_t seed = ResolveSeed(c, 0);
  NetworkConfig net;
  if (!load.empty()) {
    net = LoadNetwork(load);
  } else {
    const ModelGrid g = ToGrid(m);
    net = InitRandom(g.widths(m.n), g.params(), SeedSpec(seed, {streams::kWeights, 0}));
  }
  if (!save.empty()) SaveNetwork(save, net, seed, "spikestab simulate");
  InputSequence x;
  if (!input.empty()) {
    x = InputSequence::Static(ParsePoint(input), net.params.latency);
  } else if (m.encoding == "dynamic") {
    std::vector<HypercubePoint> steps;
    for (std::size_t t = 0; t < net.params.latency; ++t) {
      steps.push_back(SampleUniformPoint(net.input_dim(), SeedSpec(seed, {streams::kData, 0, t})));
    }
    x = InputSequence::Dynamic(std::move(steps));
  } else {
    x = InputSequence::Static(SampleUniformPoint(net.input_dim(), SeedSpec(seed, {streams::kData, 0})),
                              net.params.latency);
  }
  const ForwardRecord record = Forward(net, x);
  const Classification cls = ArgmaxCounts(record.spike_counts);
  Json j;
  j["seed"] = seed;
  j["widths"] = net.widths;
  j["input"] = Json::array();
  for (const auto& p : x.points()) j["input"].push_back(PointString(p));
  Json layers = Json::array();
  for (std::size_t l = 1; l < record.layers.size(); ++l) {
    Json layer;
    layer["layer"] = l;
    Json spikes = Json::array();
    for (std::size_t t = 0; t < record.latency; ++t) {
      const auto row = record.layers[l].at(t);
      spikes.push_back(std::vector<int>(row.begin(), row.end()));
    }
    layer["spikes"] = spikes;
    layers.push_back(layer);
  }
  j["layers"] = layers;
  j["spike_counts"] = record.spike_counts;
  j["predicted_class"] = cls.predicted_class;
  j["tie"] = cls.tie;
  Emit(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int CmdEns(CLI::App* app, const Common& c, ModelFlags& m, const std::string& family,
           const std::string& model, const std::string& nu, std::size_t h, bool per_step,
           const TrialCounts& trials_flags) {
  ExperimentConfig config;
  ApplyConfigDefaults(c, app, m, &config);
  config.kind = family == "neuron" ? ExperimentKind::kSingleNeuronEns : ExperimentKind::kDeepEns;
  config.model = ToGrid(m);
  if (app->count("--weights")) config.trials.n_weights = trials_flags.n_weights;
  if (app->count("--inputs")) config.trials.n_inputs = trials_flags.n_inputs;
  if (app->count("--perturbations")) config.trials.n_perturbations = trials_flags.n_perturbations;
  if (c.config.empty()) config.trials = trials_flags;
  PerturbationGrid& p = config.perturbation;
  if (app->count("--model") || c.config.empty()) {
    p.kind = model == "fixed_hamming" ? PerturbationModel::Kind::kFixedHamming
                                      : PerturbationModel::Kind::kIidFlip;
  }
  if (app->count("--nu") || c.config.empty()) p.nu = {Schedule(nu)};
  if (app->count("--hamming") || p.h.empty()) p.h = {h};
  if (app->count("--per-step")) p.per_step = per_step;
  if (p.nu.size() > 1) p.nu.erase(p.nu.begin() + 1, p.nu.end());
  if (p.h.size() > 1) p.h.resize(1);
  const double nu_value = p.nu.front().Evaluate(static_cast<double>(m.n));
  if (p.kind == PerturbationModel::Kind::kIidFlip && !(nu_value >= 0.0 && nu_value <= 1.0)) {
    throw ConfigError("nu = " + FormatDouble(nu_value) + " lies outside [0, 1]");
  }
  if (p.kind == PerturbationModel::Kind::kFixedHamming && p.h.front() > m.n) {
    throw ConfigError("h exceeds n");
  }
  RunOptions options;
  options.jobs = c.jobs;
  options.full = c.full;
  options.seed_override = ResolveSeed(c, config.seed);
  std::ostringstream csv;
  const RunSummary summary = RunExperiment(config, options, csv);
  for (const auto& s : summary.skipped) std::cerr << "skipped: " << s << '\n';
  Emit(c.out, csv.str());
  return kExitOk;
}

int CmdSpectrum(CLI::App* app, const Common& c, ModelFlags& m, const std::string& function,
                const std::vector<double>& nus, const std::string& binary) {
  ApplyConfigDefaults(c, app, m, nullptr);
  const std::uint64_t seed = ResolveSeed(c, 0);
  TruthTable table;
  if (auto f = NamedFunction(function)) {
    table = TruthTable::FromFunction(m.n, *f);
  } else {
    const ModelGrid g = ToGrid(m);
    table = TruthTableOf(InitRandom(g.widths(m.n), g.params(), SeedSpec(seed, {streams::kWeights, 0})));
  }
  const SpectrumTable spectrum = WalshHadamard(table);
  if (!binary.empty()) {
    std::ofstream out(binary, std::ios::binary);
    if (!out) throw IoError("cannot write '" + binary + "'");
    WriteSpectrumBinary(out, spectrum);
  }
  std::ostringstream csv;
  WriteSpectrumCsv(csv, spectrum);
  Emit(c.out, csv.str());
  if (!c.out.empty()) {
    const DegreeProfile profile = DegreeProfileOf(spectrum);
    Json j;
    j["n"] = m.n;
    j["parseval_sum"] = ParsevalSum(spectrum);
    j["degree_weights"] = profile.weights;
    Json ns = Json::array();
    for (double nu : nus) {
      const ConcentrationCheck cc = CheckConcentration(spectrum, nu);
      ns.push_back({{"nu", nu}, {"ns", ExactNs(profile, nu)}, {"tail_degree", cc.degree},
                    {"tail", cc.tail}, {"four_ns", cc.bound}, {"concentrated", cc.holds}});
    }
    j["noise_sensitivity"] = ns;
    std::cout << j.dump(2) << '\n';
  }
  return kExitOk;
}

int CmdNh(CLI::App* app, const Common& c, ModelFlags& m, const std::string& function,
          const std::string& point, std::vector<std::size_t> hs) {
  ApplyConfigDefaults(c, app, m, nullptr);
  const std::uint64_t seed = ResolveSeed(c, 0);
  BooleanFunction f;
  std::optional<TruthTable> table;
  if (auto named = NamedFunction(function)) {
    f = *named;
  } else {
    const ModelGrid g = ToGrid(m);
    auto net = std::make_shared<NetworkConfig>(
        InitRandom(g.widths(m.n), g.params(), SeedSpec(seed, {streams::kWeights, 0})));
    f = [net](const HypercubePoint& x) { return BinaryLabel(*net, x); };
  }
  std::ostringstream csv;
  if (!point.empty()) {
    const HypercubePoint x = ParsePoint(point);
    if (hs.empty()) {
      for (std::size_t h = 0; h <= x.size(); ++h) hs.push_back(h);
    }
    csv << "h,n_h\n";
    for (std::size_t h : hs) csv << h << ',' << NhExact(f, x, h) << '\n';
  } else {
    const NhProfile profile = NhProfileExact(TruthTable::FromFunction(m.n, f));
    csv << "h,mean_nh\n";
    for (std::size_t h = 0; h <= profile.n; ++h) {
      csv << h << ',' << FormatDouble(profile.values[h]) << '\n';
    }
  }
  Emit(c.out, csv.str());
  return kExitOk;
}

int CmdBounds(const Common& c, const std::string& which, const ModelFlags& m, std::size_t t,
              const std::string& nu_text, double C, double c_exp, bool is_static, double p, double eps) {
  BoundParams params{C, c_exp};
  const double nu = Schedule(nu_text).Evaluate(static_cast<double>(m.n));
  double value = 0.0;
  if (which == "thm1") {
    value = Thm1Bound(m.theta, t, nu, m.n, params, is_static);
  } else if (which == "thm2") {
    value = Thm2Bound(m.theta, m.T, m.L, m.n, m.classes, nu, params);
  } else if (which == "cor") {
    value = CorBound(m.theta, m.T, m.L, m.n, nu, params);
  } else {
    value = ChernoffTail(m.n, p, eps);
  }
  Json j;
  j["bound"] = which;
  j["n"] = m.n;
  if (which == "chernoff") {
    j["p"] = p;
    j["eps"] = eps;
  } else {
    j["nu"] = nu;
    j["theta"] = m.theta;
  }
  j["value"] = value;
  Emit(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int CmdCheck(const Common& c, bool inject_fault) {
  CheckOptions options;
  options.seed = ResolveSeed(c, options.seed);
  options.jobs = c.jobs;
  options.inject_fault = inject_fault;
  const CheckReport report = RunChecks(options);
  Emit(c.out, report.ToJson() + "\n");
  if (!c.out.empty()) {
    for (const auto& check : report.checks) {
      std::cout << (check.passed() ? "PASS " : "FAIL ") << check.name << " (" << check.instances
                << " instances, " << check.violations << " violations)\n";
    }
  }
  return report.passed() ? kExitOk : kExitPropertyFailure;
}

int CmdExperiment(const Common& c) {
  if (c.config.empty()) throw ConfigError("experiment needs --config PATH");
  ExperimentConfig config = LoadConfig(c.config);
  if (!c.out.empty()) config.output = c.out;
  RunOptions options;
  options.jobs = c.jobs;
  options.full = c.full;
  options.seed_override = ResolveSeed(c, config.seed);
  const RunSummary summary = RunExperiment(config, options);
  for (const auto& s : summary.skipped) std::cerr << "skipped: " << s << '\n';
  std::cout << "wrote " << summary.rows << " rows to " << summary.csv_path << " (manifest "
            << summary.manifest_path << ")\n";
  return summary.checks_passed ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikestab: noise sensitivity of spiking neural network classifiers"};
  app.set_version_flag("--version", std::string(spikestab::kVersion));
  app.require_subcommand(1);

  Common common;
  ModelFlags model;

  auto* simulate = app.add_subcommand("simulate", "Run one network on one input and print its spikes");
  AddCommon(simulate, common);
  AddModel(simulate, model);
  std::string input, load, save;
  simulate->add_option("--input", input, "Static input as a string over {+,-}");
  simulate->add_option("--load", load, "Load a saved network instead of drawing one");
  simulate->add_option("--save", save, "Save the network (binary plus JSON descriptor)");

  auto* ens = app.add_subcommand("ens", "Monte Carlo expected noise sensitivity (one CSV row)");
  AddCommon(ens, common);
  AddModel(ens, model);
  std::string family = "neuron", pert = "iid_flip", nu = "1/sqrt(n)";
  std::size_t h = 1;
  bool per_step = false;
  TrialCounts trials;
  ens->add_option("--family", family, "neuron|network")->check(CLI::IsMember({"neuron", "network"}));
  ens->add_option("--model", pert, "iid_flip|fixed_hamming")
      ->check(CLI::IsMember({"iid_flip", "fixed_hamming"}));
  ens->add_option("--nu", nu, "Flip rate or schedule in n, e.g. 0.05 or 1/sqrt(n)");
  ens->add_option("--hamming", h, "Flip count for fixed_hamming");
  ens->add_flag("--per-step", per_step, "Perturb every time step independently");
  ens->add_option("--weights", trials.n_weights, "Weight draws")->check(CLI::PositiveNumber);
  ens->add_option("--inputs", trials.n_inputs, "Data points per draw")->check(CLI::PositiveNumber);
  ens->add_option("--perturbations", trials.n_perturbations, "Perturbations per point")
      ->check(CLI::PositiveNumber);

  auto* spectrum = app.add_subcommand("spectrum", "Exact Fourier-Walsh spectrum of a small classifier");
  AddCommon(spectrum, common);
  AddModel(spectrum, model);
  std::string function;
  std::vector<double> nus = {0.05, 0.1, 0.25};
  std::string binary;
  spectrum->add_option("--function", function, "dictator|parity|majority instead of a network");
  spectrum->add_option("--nu", nus, "Rates for the NS summary")->check(CLI::Range(1e-12, 0.5));
  spectrum->add_option("--binary", binary, "Also dump the coefficients in binary form");

  auto* nh = app.add_subcommand("nh", "Exact N_h counts for a small classifier");
  AddCommon(nh, common);
  AddModel(nh, model);
  std::string point;
  std::vector<std::size_t> hs;
  nh->add_option("--function", function, "dictator|parity|majority instead of a network");
  nh->add_option("--point", point, "Count around this point only (string over {+,-})");
  nh->add_option("--hamming", hs, "Distances to count (default all)");

  auto* bounds = app.add_subcommand("bounds", "Evaluate a stability bound");
  AddCommon(bounds, common);
  AddModel(bounds, model);
  std::string which = "thm1", bound_nu = "1/sqrt(n)";
  std::size_t t = 1;
  double C = 1.0, c_exp = 1.0, p = 0.3, eps = 1.0;
  bool is_static = false;
  bounds->add_option("--bound", which, "thm1|thm2|cor|chernoff")
      ->check(CLI::IsMember({"thm1", "thm2", "cor", "chernoff"}));
  bounds->add_option("--t", t, "Time step for thm1")->check(CLI::PositiveNumber);
  bounds->add_option("--nu", bound_nu, "Rate or schedule in n");
  bounds->add_option("--C", C, "Scale constant")->check(CLI::PositiveNumber);
  bounds->add_option("--c", c_exp, "Exponent constant")->check(CLI::PositiveNumber);
  bounds->add_flag("--static", is_static, "Static-input variant of thm1 (no log factor)");
  bounds->add_option("--p", p, "Success probability for chernoff")->check(CLI::Range(0.0, 1.0));
  bounds->add_option("--eps", eps, "Relative deviation for chernoff")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Run the property suite");
  AddCommon(check, common);
  bool inject_fault = false;
  check->add_flag("--inject-fault", inject_fault, "Self-test: corrupt one truth-table entry");

  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment grid");
  AddCommon(experiment, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return CmdSimulate(simulate, common, model, input, load, save);
    if (*ens) return CmdEns(ens, common, model, family, pert, nu, h, per_step, trials);
    if (*spectrum) return CmdSpectrum(spectrum, common, model, function, nus, binary);
    if (*nh) return CmdNh(nh, common, model, function, point, hs);
    if (*bounds) return CmdBounds(common, which, model, t, bound_nu, C, c_exp, is_static, p, eps);
    if (*check) return CmdCheck(common, inject_fault);
    if (*experiment) return CmdExperiment(common);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
