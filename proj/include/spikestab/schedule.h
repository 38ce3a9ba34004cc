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


#ifndef SPIKESTAB_SCHEDULE_H_
#define SPIKESTAB_SCHEDULE_H_

#include <memory>
#include <stdexcept>
#include <string>

namespace spikestab {

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A perturbation rate written as an arithmetic expression in the input
// dimension n, e.g. "1/sqrt(n)", "2/n" or "1/(sqrt(n) log n)".
//
// Grammar: numbers, the variable n, + - * / ^, parentheses and the functions
// sqrt, log (natural), ln, exp. A function may take a bare operand ("log n")
// and juxtaposition multiplies ("2 n", "sqrt(n) log n").
class Schedule {
 public:
  explicit Schedule(std::string text);
  static Schedule Constant(double value);

  double Evaluate(double n) const;
  const std::string& text() const { return text_; }
  bool is_constant() const { return constant_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
  bool constant_ = false;
};

}  // namespace spikestab

#endif  // SPIKESTAB_SCHEDULE_H_
