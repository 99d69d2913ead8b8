#include "holo/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <variant>

#include "holo/core.hpp"

namespace holo {

enum class Func { Sqrt, Exp, Log, Sin, Cos, Tanh };

struct Expression::Node {
  struct Number { double value; };
  struct Variable { std::size_t index; };
  struct Unary { Func func; std::shared_ptr<const Node> arg; };
  struct Negate { std::shared_ptr<const Node> arg; };
  struct Binary { char op; std::shared_ptr<const Node> lhs, rhs; };
  struct Power { std::shared_ptr<const Node> base; double exponent; };

  std::variant<Number, Variable, Unary, Negate, Binary, Power> data;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

template <class T>
T power(const T& base, double exponent) {
  const double rounded = std::round(exponent);
  if (rounded == exponent && std::abs(exponent) <= 16) {
    const int k = static_cast<int>(std::abs(rounded));
    T r(1.0);
    for (int i = 0; i < k; ++i) r = r * base;
    return exponent < 0 ? T(1.0) / r : r;
  }
  using std::pow;
  return pow(base, exponent);
}

template <class T>
T apply(Func f, const T& x) {
  using std::cos, std::exp, std::log, std::sin, std::sqrt, std::tanh;
  switch (f) {
    case Func::Sqrt: return sqrt(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tanh: return tanh(x);
  }
  return x;
}

template <class T>
T eval(const Expression::Node& node, std::span<const T> args) {
  using N = Expression::Node;
  return std::visit(
      [&](const auto& n) -> T {
        using K = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<K, N::Number>) {
          return T(n.value);
        } else if constexpr (std::is_same_v<K, N::Variable>) {
          return args[n.index];
        } else if constexpr (std::is_same_v<K, N::Unary>) {
          return apply(n.func, eval(*n.arg, args));
        } else if constexpr (std::is_same_v<K, N::Negate>) {
          return -eval(*n.arg, args);
        } else if constexpr (std::is_same_v<K, N::Binary>) {
          const T a = eval(*n.lhs, args);
          const T b = eval(*n.rhs, args);
          switch (n.op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: return a / b;
          }
        } else {
          return power(eval(*n.base, args), n.exponent);
        }
      },
      node.data);
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables) : text_(text), vars_(variables) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Config,
                "expression '" + std::string(text_) + "': " + msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Expression::Node n) { return std::make_shared<const Expression::Node>(std::move(n)); }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make({Expression::Node::Binary{'+', lhs, term()}});
      else if (accept('-')) lhs = make({Expression::Node::Binary{'-', lhs, term()}});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make({Expression::Node::Binary{'*', lhs, unary()}});
      else if (accept('/')) lhs = make({Expression::Node::Binary{'/', lhs, unary()}});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make({Expression::Node::Negate{unary()}});
    if (accept('+')) return unary();
    return pow();
  }

  NodePtr pow() {
    NodePtr base = primary();
    if (accept('^')) {
      skip();
      bool negative = false;
      if (accept('-')) negative = true;
      NodePtr e = primary();
      const auto* num = std::get_if<Expression::Node::Number>(&e->data);
      if (num == nullptr) fail("exponent must be a numeric constant");
      return make({Expression::Node::Power{base, negative ? -num->value : num->value}});
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.data() + pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make({Expression::Node::Number{value}});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    static const std::pair<const char*, Func> funcs[] = {{"sqrt", Func::Sqrt}, {"exp", Func::Exp},
                                                         {"log", Func::Log},   {"sin", Func::Sin},
                                                         {"cos", Func::Cos},   {"tanh", Func::Tanh}};
    for (const auto& [fname, f] : funcs) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make({Expression::Node::Unary{f, arg}});
      }
    }
    if (name == "pi") return make({Expression::Node::Number{3.14159265358979323846}});
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make({Expression::Node::Variable{i}});
    fail("unknown name '" + name + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, const std::vector<std::string>& variables) {
  Expression e;
  e.root_ = Parser(text, variables).parse();
  e.text_ = std::string(text);
  return e;
}

double Expression::evaluate(std::span<const double> args) const { return eval<double>(*root_, args); }

Jet Expression::evaluate(std::span<const Jet> args) const { return eval<Jet>(*root_, args); }

}  // namespace holo
