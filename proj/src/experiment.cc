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


#include "spikestab/experiment.h"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spikestab/csv.h"
#include "spikestab/fourier.h"
#include "spikestab/sensitivity.h"

namespace spikestab {

namespace {

const std::map<std::string, ExperimentKind>& KindNames() {
  static const std::map<std::string, ExperimentKind> names = {
      {"single_neuron_ens", ExperimentKind::kSingleNeuronEns},
      {"deep_ens", ExperimentKind::kDeepEns},
      {"spectrum", ExperimentKind::kSpectrum},
      {"nh_profile", ExperimentKind::kNhProfile},
      {"bound_table", ExperimentKind::kBoundTable},
      {"lemma_checks", ExperimentKind::kLemmaChecks},
  };
  return names;
}

// ---------------------------------------------------------------------------
// Config parsing

class ConfigReader {
 public:
  explicit ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const YAML::Node& node, const std::string& what) const {
    std::ostringstream msg;
    msg << source_;
    if (node.IsDefined()) {
      const YAML::Mark mark = node.Mark();
      if (mark.line >= 0) msg << ':' << mark.line + 1 << ':' << mark.column + 1;
    }
    msg << ": " << what;
    throw ConfigError(msg.str());
  }

  void RequireMap(const YAML::Node& node, const std::string& name) const {
    if (!node.IsMap()) Fail(node, "'" + name + "' must be a mapping");
  }

  void CheckKeys(const YAML::Node& node, const std::set<std::string>& allowed,
                 const std::string& section) const {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        Fail(kv.first, "unknown key '" + key + "' in " + section + " (allowed: " + list + ")");
      }
    }
  }

  template <typename T>
  T Scalar(const YAML::Node& node, const std::string& name) const {
    if (!node.IsScalar()) Fail(node, "'" + name + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      Fail(node, "'" + name + "' has the wrong type (got '" + node.Scalar() + "')");
    }
  }

  std::size_t Count(const YAML::Node& node, const std::string& name, std::size_t min) const {
    const long long v = Scalar<long long>(node, name);
    if (v < static_cast<long long>(min)) {
      Fail(node, "'" + name + "' must be >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<YAML::Node> Items(const YAML::Node& node) const {
    std::vector<YAML::Node> items;
    if (node.IsSequence()) {
      for (const auto& item : node) items.push_back(item);
      if (items.empty()) Fail(node, "list must not be empty");
    } else {
      items.push_back(node);
    }
    return items;
  }

 private:
  std::string source_;
};

void ParseModel(const ConfigReader& r, const YAML::Node& node, ModelGrid& model) {
  r.RequireMap(node, "model");
  r.CheckKeys(node, {"n", "L", "T", "theta", "beta", "alphabet", "classes", "encoding"}, "model");
  if (node["n"]) {
    model.n.clear();
    for (const auto& item : r.Items(node["n"])) model.n.push_back(r.Count(item, "n", 1));
  }
  if (node["L"]) model.L = r.Count(node["L"], "L", 1);
  if (node["T"]) model.T = r.Count(node["T"], "T", 1);
  if (node["theta"]) {
    model.theta = r.Scalar<double>(node["theta"], "theta");
    if (!(model.theta >= 0.0)) r.Fail(node["theta"], "'theta' must be >= 0");
  }
  if (node["beta"]) {
    model.beta = r.Scalar<double>(node["beta"], "beta");
    if (!(model.beta >= 0.0 && model.beta <= 1.0)) r.Fail(node["beta"], "'beta' must lie in [0, 1]");
  }
  if (node["alphabet"]) {
    try {
      model.alphabet = ParseAlphabet(r.Scalar<std::string>(node["alphabet"], "alphabet"));
    } catch (const std::invalid_argument& e) {
      r.Fail(node["alphabet"], e.what());
    }
  }
  if (node["classes"]) model.classes = r.Count(node["classes"], "classes", 1);
  if (node["encoding"]) {
    const std::string e = r.Scalar<std::string>(node["encoding"], "encoding");
    if (e == "static") {
      model.encoding = Encoding::kStatic;
    } else if (e == "dynamic") {
      model.encoding = Encoding::kDynamic;
    } else {
      r.Fail(node["encoding"], "unknown encoding '" + e + "' (expected static|dynamic)");
    }
  }
}

void ParsePerturbation(const ConfigReader& r, const YAML::Node& node, const ModelGrid& model,
                       PerturbationGrid& grid) {
  r.RequireMap(node, "perturbation");
  r.CheckKeys(node, {"kind", "nu", "h", "per_step"}, "perturbation");
  if (node["kind"]) {
    const std::string k = r.Scalar<std::string>(node["kind"], "kind");
    if (k == "iid_flip") {
      grid.kind = PerturbationModel::Kind::kIidFlip;
    } else if (k == "fixed_hamming") {
      grid.kind = PerturbationModel::Kind::kFixedHamming;
    } else {
      r.Fail(node["kind"], "unknown perturbation kind '" + k + "' (expected iid_flip|fixed_hamming)");
    }
  }
  if (node["nu"]) {
    grid.nu.clear();
    for (const auto& item : r.Items(node["nu"])) {
      const std::string text = r.Scalar<std::string>(item, "nu");
      try {
        Schedule schedule(text);
        for (std::size_t n : model.n) {
          const double v = schedule.Evaluate(static_cast<double>(n));
          if (!(v >= 0.0 && v <= 1.0)) {
            r.Fail(item, "nu schedule \"" + text + "\" gives " + FormatDouble(v) + " at n=" +
                             std::to_string(n) + ", outside [0, 1]");
          }
        }
        grid.nu.push_back(std::move(schedule));
      } catch (const ScheduleError& e) {
        r.Fail(item, e.what());
      }
    }
  }
  if (node["h"]) {
    grid.h.clear();
    for (const auto& item : r.Items(node["h"])) {
      const std::size_t h = r.Count(item, "h", 0);
      for (std::size_t n : model.n) {
        if (h > n) r.Fail(item, "h=" + std::to_string(h) + " exceeds n=" + std::to_string(n));
      }
      grid.h.push_back(h);
    }
  }
  if (node["per_step"]) grid.per_step = r.Scalar<bool>(node["per_step"], "per_step");
  if (grid.kind == PerturbationModel::Kind::kFixedHamming && grid.h.empty()) {
    r.Fail(node, "fixed_hamming perturbations need an 'h' list");
  }
}

}  // namespace

std::string ToString(ExperimentKind kind) {
  for (const auto& [name, k] : KindNames()) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind ParseExperimentKind(const std::string& name) {
  const auto it = KindNames().find(name);
  if (it == KindNames().end()) {
    std::string list;
    for (const auto& kv : KindNames()) list += (list.empty() ? "" : ", ") + kv.first;
    throw std::invalid_argument("unknown experiment kind '" + name + "' (expected one of " + list + ")");
  }
  return it->second;
}

std::vector<std::size_t> ModelGrid::widths(std::size_t n_in) const {
  std::vector<std::size_t> w(L, n_in);
  w.push_back(classes);
  return w;
}

ExperimentConfig ParseConfig(const std::string& text, const std::string& source_name) {
  ConfigReader r(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream msg;
    msg << source_name << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(msg.str());
  }
  if (!root.IsMap()) throw ConfigError(source_name + ": config must be a YAML mapping");
  r.CheckKeys(root, {"experiment", "seed", "model", "perturbation", "trials", "bounds", "output"},
              "config");

  ExperimentConfig config;
  config.source_text = text;
  if (!root["experiment"]) throw ConfigError(source_name + ": missing required key 'experiment'");
  try {
    config.kind = ParseExperimentKind(r.Scalar<std::string>(root["experiment"], "experiment"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.Fail(root["experiment"], e.what());
  }
  if (root["seed"]) config.seed = r.Scalar<std::uint64_t>(root["seed"], "seed");
  if (root["model"]) ParseModel(r, root["model"], config.model);
  if (root["perturbation"]) ParsePerturbation(r, root["perturbation"], config.model, config.perturbation);
  if (root["trials"]) {
    const YAML::Node t = root["trials"];
    r.RequireMap(t, "trials");
    r.CheckKeys(t, {"n_weights", "n_inputs", "n_perturbations"}, "trials");
    if (t["n_weights"]) config.trials.n_weights = r.Count(t["n_weights"], "n_weights", 1);
    if (t["n_inputs"]) config.trials.n_inputs = r.Count(t["n_inputs"], "n_inputs", 1);
    if (t["n_perturbations"]) {
      config.trials.n_perturbations = r.Count(t["n_perturbations"], "n_perturbations", 1);
    }
  }
  if (root["bounds"]) {
    const YAML::Node b = root["bounds"];
    r.RequireMap(b, "bounds");
    r.CheckKeys(b, {"C", "c"}, "bounds");
    if (b["C"]) config.bounds.C = r.Scalar<double>(b["C"], "C");
    if (b["c"]) config.bounds.c = r.Scalar<double>(b["c"], "c");
    try {
      config.bounds.Validate();
    } catch (const std::invalid_argument& e) {
      r.Fail(b, e.what());
    }
  }
  if (root["output"]) config.output = r.Scalar<std::string>(root["output"], "output");

  const bool needs_table = config.kind == ExperimentKind::kSpectrum;
  for (std::size_t n : config.model.n) {
    if (needs_table && n > kMaxSpectrumDim) {
      r.Fail(root["model"]["n"], "spectrum experiments need n <= " + std::to_string(kMaxSpectrumDim));
    }
    if (config.kind == ExperimentKind::kBoundTable && n < 2) {
      r.Fail(root["model"]["n"], "bound tables need n >= 2");
    }
  }
  if ((config.kind == ExperimentKind::kSpectrum || config.kind == ExperimentKind::kNhProfile) &&
      config.model.classes != 2) {
    r.Fail(root["model"], "spectrum and nh_profile experiments need a binary classifier (classes: 2)");
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), path);
}

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Grid execution

const std::vector<std::string>& CsvHeader(ExperimentKind kind) {
  static const std::vector<std::string> ens = {
      "kind", "n", "L", "T", "theta", "beta", "alphabet", "classes", "encoding", "model",
      "per_step", "nu_or_h", "nu_schedule", "n_weights", "n_inputs", "n_perturbations", "trials",
      "flips", "ties", "estimate", "std_error", "wilson_low", "wilson_high", "estimate_excl_ties",
      "step_estimates", "step_std_errors", "bound_C", "bound_c", "bound", "seed"};
  static const std::vector<std::string> spectrum = {
      "kind", "n", "L", "T", "theta", "beta", "alphabet", "classes", "draws", "degree",
      "mean_weight", "se_weight", "mean_tail", "se_tail", "seed"};
  static const std::vector<std::string> nh = {
      "kind", "n", "L", "T", "theta", "beta", "alphabet", "classes", "method", "draws", "h",
      "mean_nh", "se_nh", "seed"};
  static const std::vector<std::string> bound = {
      "kind", "bound", "n", "L", "T", "t", "theta", "classes", "nu", "nu_schedule", "C", "c",
      "static", "value"};
  static const std::vector<std::string> lemma = {
      "kind", "check", "instance", "parameters", "value", "bound", "holds", "seed"};
  switch (kind) {
    case ExperimentKind::kSingleNeuronEns:
    case ExperimentKind::kDeepEns: return ens;
    case ExperimentKind::kSpectrum: return spectrum;
    case ExperimentKind::kNhProfile: return nh;
    case ExperimentKind::kBoundTable: return bound;
    case ExperimentKind::kLemmaChecks: return lemma;
  }
  return ens;
}

namespace {

std::string Num(double v) { return FormatDouble(v); }
std::string Int(std::uint64_t v) { return std::to_string(v); }

struct Cell {
  std::size_t n;
  PerturbationModel model;
  std::string schedule;  // empty for fixed_hamming
};

std::vector<Cell> EnsCells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  const auto& p = config.perturbation;
  for (std::size_t n : config.model.n) {
    if (p.kind == PerturbationModel::Kind::kIidFlip) {
      for (const Schedule& s : p.nu) {
        cells.push_back({n, PerturbationModel::IidFlip(s.Evaluate(static_cast<double>(n)), p.per_step),
                         s.text()});
      }
    } else {
      for (std::size_t h : p.h) cells.push_back({n, PerturbationModel::FixedHamming(h, p.per_step), ""});
    }
  }
  return cells;
}

std::vector<std::string> ModelFields(const ExperimentConfig& config, std::size_t n, std::size_t L,
                                     std::size_t classes) {
  const ModelGrid& m = config.model;
  return {ToString(config.kind), Int(n), Int(L), Int(m.T), Num(m.theta), Num(m.beta),
          ToString(m.alphabet), Int(classes)};
}

std::string JoinNumbers(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(Num(v));
  return JoinCsv(parts, ';');
}

void RunEns(const ExperimentConfig& config, const RunOptions& options, std::uint64_t seed,
            std::ostream& csv, RunSummary& summary) {
  const ModelGrid& m = config.model;
  const bool deep = config.kind == ExperimentKind::kDeepEns;
  const std::size_t L = deep ? m.L : 1;
  const std::size_t classes = deep ? m.classes : 1;
  const std::size_t cap = L >= 2 ? kDefaultMaxNDeep : kDefaultMaxNShallow;
  EnsOptions eo;
  eo.n_weights = config.trials.n_weights;
  eo.n_inputs = config.trials.n_inputs;
  eo.n_perturbations = config.trials.n_perturbations;
  eo.encoding = m.encoding;
  eo.jobs = options.jobs;
  for (const Cell& cell : EnsCells(config)) {
    if (!options.full && cell.n > cap) {
      summary.skipped.push_back("n=" + std::to_string(cell.n) + " " + cell.model.Describe() + "=" +
                                Num(cell.model.Parameter()) + ": exceeds the desk-scale cap n <= " +
                                std::to_string(cap) + " (use --full)");
      continue;
    }
    std::unique_ptr<ClassifierFamily> family;
    if (deep) {
      family = std::make_unique<NetworkFamily>(m.widths(cell.n), m.params());
    } else {
      family = std::make_unique<NeuronFamily>(cell.n, m.params());
    }
    const SensitivityEstimate est = EnsMonteCarlo(*family, cell.model, eo, SeedSpec(seed));
    std::vector<double> steps, step_se;
    for (std::size_t t = 1; t <= est.step_flips.size(); ++t) {
      steps.push_back(est.step_estimate(t));
      step_se.push_back(est.step_std_error(t));
    }
    std::string bound;
    if (cell.model.kind == PerturbationModel::Kind::kIidFlip && cell.n >= 2) {
      if (!deep) {
        bound = Num(Thm1Bound(m.theta, m.T, cell.model.nu, cell.n, config.bounds,
                              m.encoding == Encoding::kStatic));
      } else if (cell.model.nu > 0.0) {
        bound = Num(Thm2Bound(m.theta, m.T, L, cell.n, classes, cell.model.nu, config.bounds));
      }
    }
    std::vector<std::string> row = ModelFields(config, cell.n, L, classes);
    const std::vector<std::string> rest = {
        m.encoding == Encoding::kStatic ? "static" : "dynamic",
        cell.model.Describe(),
        cell.model.per_step ? "true" : "false",
        Num(cell.model.Parameter()),
        cell.schedule,
        Int(eo.n_weights),
        Int(eo.n_inputs),
        Int(eo.n_perturbations),
        Int(static_cast<std::uint64_t>(est.trials)),
        Int(static_cast<std::uint64_t>(est.flips)),
        Int(static_cast<std::uint64_t>(est.ties)),
        Num(est.estimate),
        Num(est.std_error),
        Num(est.wilson_low),
        Num(est.wilson_high),
        Num(est.estimate_excluding_ties()),
        JoinNumbers(steps),
        JoinNumbers(step_se),
        Num(config.bounds.C),
        Num(config.bounds.c),
        bound,
        Int(seed)};
    row.insert(row.end(), rest.begin(), rest.end());
    WriteCsvLine(csv, row);
    ++summary.rows;
  }
}

TableSampler NetworkTableSampler(const ModelGrid& m, std::size_t n) {
  const auto widths = m.widths(n);
  const NeuronParams params = m.params();
  return [widths, params](const SeedSpec& s) { return TruthTableOf(InitRandom(widths, params, s)); };
}

void RunSpectrum(const ExperimentConfig& config, const RunOptions& options, std::uint64_t seed,
                 std::ostream& csv, RunSummary& summary) {
  const ModelGrid& m = config.model;
  for (std::size_t n : m.n) {
    const ExpectedDegreeProfile profile = ExpectedDegreeProfileOf(
        NetworkTableSampler(m, n), config.trials.n_weights, SeedSpec(seed), options.jobs);
    for (std::size_t k = 0; k <= n; ++k) {
      std::vector<std::string> row = ModelFields(config, n, m.L, m.classes);
      const std::vector<std::string> rest = {
          Int(config.trials.n_weights), Int(k),          Num(profile.mean_weight[k]),
          Num(profile.se_weight[k]),    Num(profile.mean_tail[k]), Num(profile.se_tail[k]),
          Int(seed)};
      row.insert(row.end(), rest.begin(), rest.end());
      WriteCsvLine(csv, row);
      ++summary.rows;
    }
  }
}

void RunNh(const ExperimentConfig& config, const RunOptions& options, std::uint64_t seed,
           std::ostream& csv, RunSummary& summary) {
  const ModelGrid& m = config.model;
  for (std::size_t n : m.n) {
    NhProfile profile;
    std::string method;
    std::vector<std::size_t> hs;
    if (n <= 16) {
      profile = ExpectedNhProfile(NetworkTableSampler(m, n), config.trials.n_weights, SeedSpec(seed),
                                  options.jobs);
      method = "exact";
      for (std::size_t h = 0; h <= n; ++h) hs.push_back(h);
    } else {
      if (config.perturbation.h.empty()) {
        summary.skipped.push_back("n=" + std::to_string(n) +
                                  ": Monte Carlo N_h profiles need a perturbation.h list");
        continue;
      }
      EnsOptions eo;
      eo.n_weights = config.trials.n_weights;
      eo.n_inputs = config.trials.n_inputs;
      eo.n_perturbations = config.trials.n_perturbations;
      eo.jobs = options.jobs;
      NetworkFamily family(m.widths(n), m.params());
      hs = config.perturbation.h;
      profile = NhProfileMonteCarlo(family, hs, eo, SeedSpec(seed));
      method = "monte_carlo";
    }
    for (std::size_t h : hs) {
      std::vector<std::string> row = ModelFields(config, n, m.L, m.classes);
      const std::vector<std::string> rest = {method, Int(config.trials.n_weights), Int(h),
                                             Num(profile.values[h]), Num(profile.std_errors[h]),
                                             Int(seed)};
      row.insert(row.end(), rest.begin(), rest.end());
      WriteCsvLine(csv, row);
      ++summary.rows;
    }
  }
}

void RunBoundTable(const ExperimentConfig& config, std::ostream& csv, RunSummary& summary) {
  const ModelGrid& m = config.model;
  const bool is_static = m.encoding == Encoding::kStatic;
  for (std::size_t n : m.n) {
    for (const Schedule& s : config.perturbation.nu) {
      const double nu = s.Evaluate(static_cast<double>(n));
      auto emit = [&](const std::string& name, std::size_t t, double value, bool static_flag) {
        WriteCsvLine(csv, {"bound_table", name, Int(n), Int(m.L), Int(m.T), Int(t), Num(m.theta),
                           Int(m.classes), Num(nu), s.text(), Num(config.bounds.C),
                           Num(config.bounds.c), static_flag ? "true" : "false", Num(value)});
        ++summary.rows;
      };
      for (std::size_t t = 1; t <= m.T; ++t) {
        emit("thm1", t, Thm1Bound(m.theta, t, nu, n, config.bounds, is_static), is_static);
      }
      if (nu > 0.0) {
        emit("thm2", m.T, Thm2Bound(m.theta, m.T, m.L, n, m.classes, nu, config.bounds), false);
      }
      try {
        emit("cor", m.T, CorBound(m.theta, m.T, m.L, n, nu, config.bounds), false);
      } catch (const PreconditionError& e) {
        summary.skipped.push_back("cor n=" + std::to_string(n) + " nu=" + Num(nu) + ": " + e.what());
      }
    }
  }
}

void RunLemmaChecks(const ExperimentConfig& config, const RunOptions& options, std::uint64_t seed,
                    std::ostream& csv, RunSummary& summary) {
  auto emit = [&](const std::string& check, std::size_t instance, const std::string& params,
                  double value, double bound, bool holds) {
    WriteCsvLine(csv, {"lemma_checks", check, Int(instance), params, Num(value), Num(bound),
                       holds ? "true" : "false", Int(seed)});
    ++summary.rows;
    if (!holds) summary.checks_passed = false;
  };
  // Chernoff upper tail against exact binomial tails.
  std::size_t instance = 0;
  for (std::size_t n = 1; n <= 200; ++n) {
    for (double p : {0.1, 0.3, 0.5}) {
      for (double eps : {0.5, 1.0, 2.0}) {
        const double exact = static_cast<double>(BinomialUpperTail(n, p, eps));
        const double bound = ChernoffTail(n, p, eps);
        emit("chernoff", instance++, "n=" + Int(n) + ";p=" + Num(p) + ";eps=" + Num(eps), exact,
             bound, exact <= bound);
      }
    }
  }
  // Binomial stochastic order on random triples.
  auto engine = SeedSpec(seed, {streams::kAuxiliary, 1}).engine();
  std::uniform_int_distribution<std::size_t> n_dist(1, 200);
  std::uniform_real_distribution<double> u_dist(0.0, 1.0);
  for (std::size_t k = 0; k < 50; ++k) {
    const std::size_t n = n_dist(engine);
    double p = u_dist(engine), q = u_dist(engine);
    if (p > q) std::swap(p, q);
    if (!(p > 0.0 && p < q && q < 1.0)) {
      p = 0.25;
      q = 0.75;
    }
    const DominanceResult d = StochasticDominanceCheck(n, p, q, 0, SeedSpec(seed, {streams::kAuxiliary, 2, k}));
    emit("stochastic_dominance", k, "n=" + Int(n) + ";p=" + Num(p) + ";q=" + Num(q),
         static_cast<double>(d.worst_gap), 0.0, d.holds);
  }
  // Correlated-Gaussian crossing bound on the (rho, a, b) grid.
  const std::size_t samples =
      config.trials.n_weights * config.trials.n_inputs * config.trials.n_perturbations;
  instance = 0;
  for (double rho : {0.5, 0.9, 0.99}) {
    for (double a : {-1.0, 0.0, 1.0}) {
      for (double b : {-1.0, 0.0, 1.0}) {
        const LemmaA4Result r = LemmaA4Check(rho, a, b, samples,
                                             SeedSpec(seed, {streams::kAuxiliary, 3, instance}),
                                             options.jobs);
        emit("lemma_a4", instance++,
             "rho=" + Num(rho) + ";a=" + Num(a) + ";b=" + Num(b) + ";samples=" + Int(samples),
             std::max(r.lhs_low, r.lhs_high), r.rhs, r.holds_within_ci);
      }
    }
  }
}

}  // namespace

RunSummary RunExperiment(const ExperimentConfig& config, const RunOptions& options,
                         std::ostream& csv) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.seed = options.seed_override.value_or(config.seed);
  WriteCsvLine(csv, CsvHeader(config.kind));
  switch (config.kind) {
    case ExperimentKind::kSingleNeuronEns:
    case ExperimentKind::kDeepEns: RunEns(config, options, summary.seed, csv, summary); break;
    case ExperimentKind::kSpectrum: RunSpectrum(config, options, summary.seed, csv, summary); break;
    case ExperimentKind::kNhProfile: RunNh(config, options, summary.seed, csv, summary); break;
    case ExperimentKind::kBoundTable: RunBoundTable(config, csv, summary); break;
    case ExperimentKind::kLemmaChecks: RunLemmaChecks(config, options, summary.seed, csv, summary); break;
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

RunSummary RunExperiment(const ExperimentConfig& config, const RunOptions& options) {
  if (config.output.empty()) throw IoError("no output path given (set 'output' or pass --out)");
  const std::filesystem::path csv_path(config.output);
  std::error_code ec;
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path(), ec);
  std::ostringstream buffer;
  RunSummary summary = RunExperiment(config, options, buffer);
  summary.csv_path = csv_path.string();
  summary.manifest_path = summary.csv_path + ".manifest.json";
  {
    std::ofstream out(summary.csv_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + summary.csv_path + "'");
    out << buffer.str();
    if (!out) throw IoError("failed writing '" + summary.csv_path + "'");
  }
  {
    std::ofstream out(summary.manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + summary.manifest_path + "'");
    out << ManifestJson(config, summary) << '\n';
    if (!out) throw IoError("failed writing '" + summary.manifest_path + "'");
  }
  return summary;
}

std::string ManifestJson(const ExperimentConfig& config, const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["tool"] = "spikestab";
  j["version"] = kVersion;
  j["csv_schema_version"] = kCsvSchemaVersion;
  j["experiment"] = ToString(config.kind);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(Fnv1a(config.source_text)));
  j["config_hash"] = std::string("fnv1a64:") + hash;
  j["seed"] = summary.seed;
  j["csv"] = summary.csv_path;
  j["header"] = CsvHeader(config.kind);
  j["rows"] = summary.rows;
  j["skipped"] = summary.skipped;
  nlohmann::ordered_json resolved = nlohmann::ordered_json::array();
  for (std::size_t n : config.model.n) {
    for (const Schedule& s : config.perturbation.nu) {
      resolved.push_back({{"n", n}, {"schedule", s.text()}, {"nu", s.Evaluate(static_cast<double>(n))}});
    }
  }
  j["resolved_nu"] = resolved;
  j["wall_time_seconds"] = summary.wall_seconds;
  return j.dump(2);
}

}  // namespace spikestab
