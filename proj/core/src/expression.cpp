#include "wue/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wue/error.hpp"

namespace wue {

struct Expression::Node {
  enum class Kind { number, variable, add, sub, mul, div, pow, neg, call };
  Kind kind;
  double value = 0.0;
  int var = -1;
  std::string func;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "atan"};

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + std::string(s_) + "' at position " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (accept('+')) n = make(Kind::add, n, term());
      else if (accept('-')) n = make(Kind::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (accept('*')) n = make(Kind::mul, n, unary());
      else if (accept('/')) n = make(Kind::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(std::string(s_.substr(pos_)), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        bool known = false;
        for (const char* f : kFunctions) known = known || name == f;
        if (!known) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::call;
        n->func = name;
        n->a = arg;
        return n;
      }
      auto n = std::make_shared<Expression::Node>();
      if (name == "pi" || name == "e") {
        n->kind = Kind::number;
        n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
        return n;
      }
      n->kind = Kind::variable;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name || name == "q" + std::to_string(i)) n->var = static_cast<int>(i);
      if (n->var < 0) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

template <class T>
T constant_of(std::span<const T> x, double v) {
  if constexpr (std::is_same_v<T, double>) {
    (void)x;
    return v;
  } else {
    return T::constant(x[0].space(), v, x[0].order());
  }
}

double as_integer(const Expression::Node& n, bool& ok) {
  ok = n.kind == Kind::number && std::abs(n.value) <= 64 && n.value == std::round(n.value);
  return n.value;
}

template <class T>
T eval(const Expression::Node& n, std::span<const T> x) {
  using std::cos, std::exp, std::log, std::sin, std::sqrt, std::tan, std::atan;
  switch (n.kind) {
    case Kind::number:
      return constant_of(x, n.value);
    case Kind::variable:
      return x[static_cast<std::size_t>(n.var)];
    case Kind::add:
      return eval(*n.a, x) + eval(*n.b, x);
    case Kind::sub:
      return eval(*n.a, x) - eval(*n.b, x);
    case Kind::mul:
      return eval(*n.a, x) * eval(*n.b, x);
    case Kind::div:
      return eval(*n.a, x) / eval(*n.b, x);
    case Kind::neg:
      return -eval(*n.a, x);
    case Kind::pow: {
      bool integral = false;
      const double k = as_integer(*n.b, integral);
      const T base = eval(*n.a, x);
      if (integral) {
        if constexpr (std::is_same_v<T, double>) return std::pow(base, k);
        else return pow(base, static_cast<int>(k));
      }
      if (n.b->kind == Kind::number) {
        if constexpr (std::is_same_v<T, double>) return std::pow(base, n.b->value);
        else return pow(base, n.b->value);
      }
      return exp(eval(*n.b, x) * log(base));
    }
    case Kind::call: {
      const T a = eval(*n.a, x);
      if (n.func == "sin") return sin(a);
      if (n.func == "cos") return cos(a);
      if (n.func == "tan") return tan(a);
      if (n.func == "exp") return exp(a);
      if (n.func == "log") return log(a);
      if (n.func == "sqrt") return sqrt(a);
      return atan(a);
    }
  }
  throw std::logic_error("expression: corrupt node");
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(e.text_, variables).parse();
  return e;
}

RJet Expression::evaluate(std::span<const RJet> x) const {
  try {
    return eval(*root_, x);
  } catch (const std::domain_error& err) {
    throw DomainError("expression '" + text_ + "': " + err.what());
  }
}

double Expression::evaluate(std::span<const double> x) const { return eval(*root_, x); }

}  // namespace wue
