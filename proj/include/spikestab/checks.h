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


#ifndef SPIKESTAB_CHECKS_H_
#define SPIKESTAB_CHECKS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spikestab {

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst = 0.0;         // largest error or smallest margin, per check
  std::string first_failure;  // JSON object describing the first violation
  double seconds = 0.0;
  bool passed() const { return violations == 0; }
};

struct CheckReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string ToJson() const;
};

struct CheckOptions {
  std::uint64_t seed = 20240601;
  std::size_t jobs = 1;
  // Negative control: corrupts one truth-table entry between the transform
  // and the round-trip comparison, which must then be reported.
  bool inject_fault = false;
};

// Runs the property suite: closed-form equivalence, Parseval and round trip,
// spectrum vs exhaustive NS, low-degree concentration, the N_h identity,
// Chernoff tails, binomial stochastic order and the Gaussian crossing bound.
CheckReport RunChecks(const CheckOptions& options = {});

}  // namespace spikestab

#endif  // SPIKESTAB_CHECKS_H_
