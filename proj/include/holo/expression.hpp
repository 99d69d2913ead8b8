#pragma once

// Closed-form expressions used by configuration files: numbers, named
// variables, + - * / ^ and the functions sqrt, exp, log, sin, cos, tanh.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holo/jet.hpp"

namespace holo {

class Expression {
 public:
  struct Node;

  // Throws Error(Config) on syntax errors or unknown names.
  static Expression parse(std::string_view text, const std::vector<std::string>& variables);

  double evaluate(std::span<const double> args) const;
  Jet evaluate(std::span<const Jet> args) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace holo
