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


#include "spikestab/schedule.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "spikestab/csv.h"

namespace spikestab {

struct Schedule::Node {
  enum class Op { kNumber, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSqrt, kLog, kExp };
  Op op = Op::kNumber;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double Eval(double n) const {
    switch (op) {
      case Op::kNumber: return value;
      case Op::kVar: return n;
      case Op::kAdd: return lhs->Eval(n) + rhs->Eval(n);
      case Op::kSub: return lhs->Eval(n) - rhs->Eval(n);
      case Op::kMul: return lhs->Eval(n) * rhs->Eval(n);
      case Op::kDiv: return lhs->Eval(n) / rhs->Eval(n);
      case Op::kPow: return std::pow(lhs->Eval(n), rhs->Eval(n));
      case Op::kNeg: return -lhs->Eval(n);
      case Op::kSqrt: return std::sqrt(lhs->Eval(n));
      case Op::kLog: return std::log(lhs->Eval(n));
      case Op::kExp: return std::exp(lhs->Eval(n));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Schedule::Node>;
using Op = Schedule::Node::Op;

NodePtr Make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto node = std::make_shared<Schedule::Node>();
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  node->value = value;
  return node;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr Parse() {
    NodePtr root = Expr();
    Skip();
    if (pos_ != text_.size()) Fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

  bool uses_variable() const { return uses_variable_; }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ScheduleError("bad nu schedule \"" + text_ + "\" at column " + std::to_string(pos_ + 1) +
                        ": " + what);
  }

  void Skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(char c) {
    Skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Juxtaposition multiplies only by a name or a parenthesis, so "2 3" and
  // "2..3" are errors rather than products.
  bool StartsImplicitFactor() {
    Skip();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '(' || std::isalpha(static_cast<unsigned char>(c));
  }

  NodePtr Expr() {
    NodePtr node = Term();
    while (true) {
      if (Accept('+')) {
        node = Make(Op::kAdd, node, Term());
      } else if (Accept('-')) {
        node = Make(Op::kSub, node, Term());
      } else {
        return node;
      }
    }
  }

  NodePtr Term() {
    NodePtr node = Unary();
    while (true) {
      if (Accept('*')) {
        node = Make(Op::kMul, node, Unary());
      } else if (Accept('/')) {
        node = Make(Op::kDiv, node, Unary());
      } else if (StartsImplicitFactor()) {
        node = Make(Op::kMul, node, Power());
      } else {
        return node;
      }
    }
  }

  NodePtr Unary() {
    if (Accept('-')) return Make(Op::kNeg, Unary());
    if (Accept('+')) return Unary();
    return Power();
  }

  NodePtr Power() {
    NodePtr base = Primary();
    if (Accept('^')) return Make(Op::kPow, base, Unary());
    return base;
  }

  NodePtr Primary() {
    Skip();
    if (pos_ >= text_.size()) Fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = Expr();
      if (!Accept(')')) Fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) Fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return Make(Op::kNumber, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "n") {
        uses_variable_ = true;
        return Make(Op::kVar);
      }
      Op op;
      if (name == "sqrt") {
        op = Op::kSqrt;
      } else if (name == "log" || name == "ln") {
        op = Op::kLog;
      } else if (name == "exp") {
        op = Op::kExp;
      } else {
        pos_ = start;
        Fail("unknown name '" + name + "' (expected n, sqrt, log, ln or exp)");
      }
      return Make(op, Power());
    }
    Fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  bool uses_variable_ = false;
};

}  // namespace

Schedule::Schedule(std::string text) : text_(std::move(text)) {
  Parser parser(text_);
  root_ = parser.Parse();
  constant_ = !parser.uses_variable();
}

Schedule Schedule::Constant(double value) { return Schedule(FormatDouble(value)); }

double Schedule::Evaluate(double n) const { return root_->Eval(n); }

}  // namespace spikestab
