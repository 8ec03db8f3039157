#pragma once

// A small expression language over distributions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident '(' args ')' [ '(' args ')' ] | '(' expr ')'
//   args    := [ arg (',' arg)* ],   arg := [ ident '=' ] expr
//
// '^' binds tighter than unary minus and is right-associative, so -X^2 is
// -(X^2) and 2^3^2 is 2^(3^2). The optional second argument list applies
// p / d / q / r to points: q(D)(0.5) is the same as q(D, 0.5).
//
// Number literals evaluate to Dirac distributions, so 1 + 2 * 3 is Dirac(7).

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "distkit/arith.hpp"
#include "distkit/conv.hpp"
#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/options.hpp"
#include "distkit/transform.hpp"

namespace distkit::expr {

enum class NodeKind { Number, Constructor, Binary, Neg, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Arg {
  std::string name;  // empty for positional
  NodePtr value;
};

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  std::string name;               // constructor or call name
  char op = 0;                    // '+', '-', '*', '/', '^'
  std::vector<NodePtr> children;  // Binary: lhs, rhs; Neg: operand
  std::vector<Arg> args;          // Constructor, Call
  std::optional<std::vector<Arg>> apply;  // second argument list of p/d/q/r
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Structural equality; source positions are ignored.
bool operator==(const Node& a, const Node& b);

inline bool same_args(const std::vector<Arg>& a, const std::vector<Arg>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !(*a[i].value == *b[i].value)) return false;
  }
  return true;
}

inline bool operator==(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number:
      return a.number == b.number;
    case NodeKind::Constructor:
      return a.name == b.name && same_args(a.args, b.args);
    case NodeKind::Binary:
      return a.op == b.op && *a.children[0] == *b.children[0] && *a.children[1] == *b.children[1];
    case NodeKind::Neg:
      return *a.children[0] == *b.children[0];
    case NodeKind::Call:
      if (a.name != b.name || !same_args(a.args, b.args)) return false;
      if (a.apply.has_value() != b.apply.has_value()) return false;
      return !a.apply || same_args(*a.apply, *b.apply);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Signatures

struct Signature {
  const char* name;
  std::vector<std::vector<const char*>> aliases;  // accepted names per slot
  std::vector<std::optional<double>> defaults;
};

inline const std::vector<Signature>& constructors() {
  static const std::vector<Signature> table = {
      {"Norm", {{"mean"}, {"sd"}}, {0.0, 1.0}},
      {"Pois", {{"lambda"}}, {1.0}},
      {"Binom", {{"size"}, {"prob"}}, {1.0, 0.5}},
      {"Exp", {{"rate"}}, {1.0}},
      {"Gammad", {{"shape"}, {"rate"}}, {1.0, 1.0}},
      {"Unif", {{"Min", "min"}, {"Max", "max"}}, {0.0, 1.0}},
      {"Chisq", {{"df"}, {"ncp"}}, {1.0, 0.0}},
      {"Dirac", {{"location"}}, {0.0}},
  };
  return table;
}

// Calls take a distribution first; defaults of nullopt mark required slots.
inline const std::vector<Signature>& calls() {
  static const std::vector<Signature> table = {
      {"convpow", {{"D"}, {"N"}}, {std::nullopt, std::nullopt}},
      {"exp", {{"D", "x"}}, {std::nullopt}},
      {"log", {{"D", "x"}}, {std::nullopt}},
      {"square", {{"D", "x"}}, {std::nullopt}},
      {"affine", {{"D"}, {"a"}, {"b"}}, {std::nullopt, 1.0, 0.0}},
  };
  return table;
}

inline bool is_point_fn(std::string_view name) {
  return name == "p" || name == "d" || name == "q" || name == "r";
}

inline const Signature* find_signature(const std::vector<Signature>& table, std::string_view name) {
  for (const auto& s : table) {
    if (name == s.name) return &s;
  }
  return nullptr;
}

// Arguments placed into slots: named first, positional left to right into
// the remaining ones.
inline std::vector<const Arg*> bind_args(const Signature& sig, const std::vector<Arg>& args,
                                         std::size_t line, std::size_t column) {
  const std::size_t n = sig.aliases.size();
  std::vector<const Arg*> slots(n, nullptr);
  for (const auto& a : args) {
    if (a.name.empty()) continue;
    std::size_t k = n;
    for (std::size_t i = 0; i < n; ++i) {
      for (const char* alias : sig.aliases[i]) {
        if (a.name == alias) k = i;
      }
    }
    if (k == n) throw ArityError(std::string(sig.name) + ": unknown argument '" + a.name + "'", a.value->line, a.value->column);
    if (slots[k] != nullptr) throw ArityError(std::string(sig.name) + ": argument '" + a.name + "' given twice", a.value->line, a.value->column);
    slots[k] = &a;
  }
  std::size_t next = 0;
  for (const auto& a : args) {
    if (!a.name.empty()) continue;
    while (next < n && slots[next] != nullptr) ++next;
    if (next == n) {
      throw ArityError(std::string(sig.name) + " takes at most " + std::to_string(n) + " arguments", a.value->line, a.value->column);
    }
    slots[next++] = &a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i] == nullptr && !sig.defaults[i]) {
      throw ArityError(std::string(sig.name) + ": missing argument '" + sig.aliases[i][0] + "'", line, column);
    }
  }
  return slots;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  std::size_t line;
  std::size_t column;
};

inline std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    const std::size_t start = i;
    const std::size_t start_col = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      const std::string_view text = src.substr(start, i - start);
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw SyntaxError("malformed number '" + std::string(text) + "'", line, start_col);
      }
      out.push_back({Tok::Number, std::string(text), v, line, start_col});
      col += i - start;
      continue;
    }
    if (is_ident_start(c)) {
      while (i < src.size() && is_ident(src[i])) ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), 0.0, line, start_col});
      col += i - start;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Equals; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back({k, std::string(1, c), 0.0, line, col});
    ++col;
    ++i;
  }
  out.push_back({Tok::End, "", 0.0, line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  NodePtr parse_all() {
    NodePtr n = expression();
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()));
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& peek2() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().column);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + ", found " + describe(peek()));
    take();
  }

  static NodePtr binary(char op, NodePtr lhs, NodePtr rhs, const Token& at) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->children = {std::move(lhs), std::move(rhs)};
    n->line = at.line;
    n->column = at.column;
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& t = take();
      lhs = binary(t.text[0], lhs, term(), t);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& t = take();
      lhs = binary(t.text[0], lhs, unary(), t);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Minus) {
      const Token& t = take();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Neg;
      n->children = {unary()};
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek().kind == Tok::Caret) {
      const Token& t = take();
      return binary('^', base, unary(), t);
    }
    return base;
  }

  std::vector<Arg> arglist() {
    std::vector<Arg> args;
    expect(Tok::LParen, "'('");
    if (peek().kind == Tok::RParen) {
      take();
      return args;
    }
    while (true) {
      Arg a;
      if (peek().kind == Tok::Ident && peek2().kind == Tok::Equals) {
        a.name = take().text;
        take();
      }
      a.value = expression();
      args.push_back(std::move(a));
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      expect(Tok::RParen, "',' or ')'");
      return args;
    }
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Number;
      n->number = t.value;
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    if (t.kind == Tok::LParen) {
      take();
      NodePtr inner = expression();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      const Token id = take();
      const bool ctor = find_signature(constructors(), id.text) != nullptr;
      const bool call = find_signature(calls(), id.text) != nullptr || is_point_fn(id.text);
      if (!ctor && !call) {
        throw UnknownConstructor("unknown constructor or function '" + id.text + "'", id.line, id.column);
      }
      if (peek().kind != Tok::LParen) fail("expected '(' after '" + id.text + "'");
      auto n = std::make_shared<Node>();
      n->kind = ctor ? NodeKind::Constructor : NodeKind::Call;
      n->name = id.text;
      n->line = id.line;
      n->column = id.column;
      n->args = arglist();
      if (ctor) {
        bind_args(*find_signature(constructors(), id.text), n->args, id.line, id.column);
      } else if (const Signature* s = find_signature(calls(), id.text)) {
        bind_args(*s, n->args, id.line, id.column);
      } else {
        if (n->args.empty()) throw ArityError(id.text + " requires a distribution argument", id.line, id.column);
        if (peek().kind == Tok::LParen) {
          if (n->args.size() > 1) fail("points given twice to '" + id.text + "'");
          n->apply = arglist();
        }
      }
      return n;
    }
    fail("expected a number, a name or '(', found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void print_args(const std::vector<Arg>& args, std::string& out);

inline void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number:
      out += format_number(n.number);
      return;
    case NodeKind::Constructor:
      out += n.name;
      print_args(n.args, out);
      return;
    case NodeKind::Binary:
      out += '(';
      print_node(*n.children[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(*n.children[1], out);
      out += ')';
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(*n.children[0], out);
      out += ')';
      return;
    case NodeKind::Call:
      out += n.name;
      print_args(n.args, out);
      if (n.apply) print_args(*n.apply, out);
      return;
  }
}

inline void print_args(const std::vector<Arg>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    if (!args[i].name.empty()) out += args[i].name + "=";
    print_node(*args[i].value, out);
  }
  out += ')';
}

}  // namespace detail

inline NodePtr parse(std::string_view src) { return detail::Parser(src).parse_all(); }

/// Canonical text: every operator application parenthesized, numbers in
/// shortest round-trip form. parse(print(a)) == a.
inline std::string print(const Node& n) {
  std::string out;
  detail::print_node(n, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

using Value = std::variant<Distribution, std::vector<double>>;

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const Options& o) : o_(o) {}

  Value eval(const Node& n) {
    try {
      return eval_inner(n);
    } catch (const EvalError&) {
      throw;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw EvalError(e.what(), n.line, n.column);
    }
  }

 private:
  Distribution dist(const Node& n) {
    Value v = eval(n);
    if (auto* d = std::get_if<Distribution>(&v)) return *d;
    throw EvalError("expected a distribution, got a numeric array", n.line, n.column);
  }

  double scalar(const Node& n) {
    const Distribution d = dist(n);
    if (!d.is_dirac()) throw EvalError("expected a number, got a " + d.kind_name() + " distribution", n.line, n.column);
    return d.get_if<ExactDistribution>()->dirac_location();
  }

  std::vector<double> points(const std::vector<Arg>& args, std::size_t from) {
    std::vector<double> xs;
    for (std::size_t i = from; i < args.size(); ++i) {
      if (!args[i].name.empty()) {
        throw EvalError("points are positional", args[i].value->line, args[i].value->column);
      }
      Value v = eval(*args[i].value);
      if (auto* a = std::get_if<std::vector<double>>(&v)) {
        xs.insert(xs.end(), a->begin(), a->end());
      } else {
        xs.push_back(scalar(*args[i].value));
      }
    }
    return xs;
  }

  Value eval_inner(const Node& n) {
    switch (n.kind) {
      case NodeKind::Number:
        return Distribution(Dirac{n.number});
      case NodeKind::Neg:
        return negate(dist(*n.children[0]));
      case NodeKind::Binary: {
        const Distribution a = dist(*n.children[0]);
        const Distribution b = dist(*n.children[1]);
        switch (n.op) {
          case '+': return convolve(a, b, o_);
          case '-': return subtract(a, b, o_);
          case '*': return multiply(a, b, o_);
          case '/': return divide(a, b, o_);
          case '^': return power(a, b, o_);
        }
        throw EvalError("unknown operator", n.line, n.column);
      }
      case NodeKind::Constructor:
        return construct(n);
      case NodeKind::Call:
        return call(n);
    }
    throw EvalError("malformed expression", n.line, n.column);
  }

  Distribution construct(const Node& n) {
    const Signature& sig = *find_signature(constructors(), n.name);
    const auto slots = bind_args(sig, n.args, n.line, n.column);
    std::vector<double> v(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      v[i] = slots[i] ? scalar(*slots[i]->value) : *sig.defaults[i];
    }
    if (n.name == "Norm") return Distribution(Normal{v[0], v[1]});
    if (n.name == "Pois") return Distribution(Poisson{v[0]});
    if (n.name == "Binom") {
      if (v[0] != std::trunc(v[0]) || v[0] < 0.0 || v[0] > 2147483647.0) {
        throw DomainError("Binom size must be a non-negative integer");
      }
      return Distribution(Binomial{static_cast<int>(v[0]), v[1]});
    }
    if (n.name == "Exp") return Distribution(Exponential{v[0]});
    if (n.name == "Gammad") return Distribution(Gamma{v[0], v[1]});
    if (n.name == "Unif") return Distribution(Uniform{v[0], v[1]});
    if (n.name == "Chisq") return Distribution(ChiSq{v[0], v[1]});
    return Distribution(Dirac{v[0]});
  }

  Value call(const Node& n) {
    if (is_point_fn(n.name)) {
      const Distribution d = dist(*n.args[0].value);
      const std::vector<double> xs = n.apply ? points(*n.apply, 0) : points(n.args, 1);
      if (n.name == "p") return cdf(d, xs);
      if (n.name == "d") return pdf(d, xs);
      if (n.name == "q") return quantile(d, xs);
      if (xs.size() != 1 || xs[0] < 0.0 || xs[0] != std::trunc(xs[0])) {
        throw DomainError("r takes one non-negative integer count");
      }
      Rng rng(o_.rng_seed);
      return sample(d, static_cast<std::size_t>(xs[0]), rng);
    }
    const Signature& sig = *find_signature(calls(), n.name);
    const auto slots = bind_args(sig, n.args, n.line, n.column);
    const Distribution d = dist(*slots[0]->value);
    if (n.name == "convpow") {
      const double k = scalar(*slots[1]->value);
      if (k != std::trunc(k) || k < 1.0) throw DomainError("convpow requires an integer N >= 1");
      return convpow(d, static_cast<long long>(k), o_);
    }
    if (n.name == "exp") return exp_transform(d, o_);
    if (n.name == "log") return log_transform(d, o_);
    if (n.name == "square") return square(d, o_);
    const double a = slots[1] ? scalar(*slots[1]->value) : 1.0;
    const double b = slots[2] ? scalar(*slots[2]->value) : 0.0;
    return affine(d, a, b);
  }

  const Options& o_;
};

}  // namespace detail

inline Value eval(const Node& ast, const Options& o = {}) {
  o.validate();
  return detail::Evaluator(o).eval(ast);
}

inline Value eval(std::string_view src, const Options& o = {}) { return eval(*parse(src), o); }

}  // namespace distkit::expr
