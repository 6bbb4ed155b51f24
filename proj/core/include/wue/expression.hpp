#pragma once

// Small arithmetic expression language over chart coordinates, used for
// user-supplied coefficient fields ("custom:<expr>").
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt atan.  Constants: pi, e.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wue/jet.hpp"

namespace wue {

class Expression {
 public:
  /// Parses `text`; identifiers resolve to `variables` (by position) or to
  /// the aliases q0, q1, ...  Throws ConfigError with the offending position.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  RJet evaluate(std::span<const RJet> x) const;
  double evaluate(std::span<const double> x) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace wue
