#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "distkit/expr.hpp"

using namespace distkit;
using namespace distkit::expr;

namespace {

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Number;
  n->number = v;
  return n;
}

std::shared_ptr<Node> make(NodeKind k, std::string name, std::vector<Arg> args) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

NodePtr binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->children = {std::move(a), std::move(b)};
  return n;
}

// Random well-formed trees; arities always fit the signature tables.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  NodePtr tree(int depth) {
    const int pick = depth <= 0 ? pick_in(0, 1) : pick_in(0, 6);
    switch (pick) {
      case 0:
        return number(num());
      case 1:
        return ctor();
      case 2:
      case 3: {
        static const char ops[] = {'+', '-', '*', '/', '^'};
        return binary(ops[pick_in(0, 4)], tree(depth - 1), tree(depth - 1));
      }
      case 4: {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Neg;
        n->children = {tree(depth - 1)};
        return n;
      }
      case 5:
        return call(depth);
      default: {
        auto n = make(NodeKind::Call, pick_in(0, 1) ? "q" : "p", {{"", tree(depth - 1)}});
        n->apply = std::vector<Arg>{{"", number(num())}, {"", number(num())}};
        return n;
      }
    }
  }

 private:
  int pick_in(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

  double num() {
    static const double pool[] = {0, 1, 2, 0.5, 0.1, 1e-10, 2.5e20, 3.75, 1.0 / 3.0, 123456789.0};
    return pool[pick_in(0, 9)];
  }

  NodePtr ctor() {
    const auto& table = constructors();
    const Signature& s = table[static_cast<std::size_t>(pick_in(0, static_cast<int>(table.size()) - 1))];
    std::vector<Arg> args;
    const int k = pick_in(0, static_cast<int>(s.aliases.size()));
    for (int i = 0; i < k; ++i) {
      std::string name = pick_in(0, 1) ? std::string(s.aliases[static_cast<std::size_t>(i)][0]) : "";
      args.push_back({name, number(num())});
    }
    return make(NodeKind::Constructor, s.name, std::move(args));
  }

  NodePtr call(int depth) {
    switch (pick_in(0, 3)) {
      case 0:
        return make(NodeKind::Call, "convpow", {{"", tree(depth - 1)}, {"N", number(3)}});
      case 1:
        return make(NodeKind::Call, "exp", {{"", tree(depth - 1)}});
      case 2:
        return make(NodeKind::Call, "square", {{"x", tree(depth - 1)}});
      default:
        return make(NodeKind::Call, "affine", {{"", tree(depth - 1)}, {"b", number(num())}});
    }
  }

  std::mt19937_64 rng_;
};

Distribution as_dist(const Value& v) { return std::get<Distribution>(v); }

}  // namespace

TEST_CASE("parse: sums, products and defaults") {
  const NodePtr a = parse("Norm(1,2)+Norm(-2,1)");
  REQUIRE(a->kind == NodeKind::Binary);
  CHECK(a->op == '+');
  CHECK(a->children[0]->kind == NodeKind::Constructor);
  CHECK(a->children[0]->name == "Norm");
  CHECK(a->children[0]->args.size() == 2);
  CHECK(a->children[1]->args[0].value->kind == NodeKind::Neg);

  const NodePtr b = parse("Norm()*Pois(lambda=1)");
  REQUIRE(b->op == '*');
  CHECK(b->children[0]->args.empty());
  CHECK(b->children[1]->args[0].name == "lambda");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("convpow(Unif(0,1),3");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 20);
  }
  try {
    parse("1 + Foo(2)");
    FAIL("no error");
  } catch (const UnknownConstructor& e) {
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse("Norm(1,2,3)"), ArityError);
  CHECK_THROWS_AS(parse("Norm(mean=1, mean=2)"), ArityError);
  CHECK_THROWS_AS(parse("Pois(rate=1)"), ArityError);
  CHECK_THROWS_AS(parse("convpow(Unif())"), ArityError);
  CHECK_THROWS_AS(parse("Norm(0,1"), SyntaxError);
  CHECK_THROWS_AS(parse("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse("2 $ 3"), SyntaxError);
  try {
    parse("Norm(0,1) +\n  * 2");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("precedence and associativity") {
  const auto seven = as_dist(eval("1+2*3"));
  REQUIRE(seven.is_dirac());
  CHECK(seven.exact()->dirac_location() == 7.0);
  CHECK(as_dist(eval("2^3^2")).exact()->dirac_location() == 512.0);
  CHECK(as_dist(eval("-2^2")).exact()->dirac_location() == -4.0);
  CHECK(as_dist(eval("8/4/2")).exact()->dirac_location() == 1.0);
  CHECK(as_dist(eval("1-2-3")).exact()->dirac_location() == -4.0);
  CHECK(as_dist(eval("(1+2)*3")).exact()->dirac_location() == 9.0);
  CHECK(*parse("1+2*3") == *parse("1+(2*3)"));
  CHECK(*parse("-2^2") == *parse("-(2^2)"));
}

TEST_CASE("printed trees parse back to themselves") {
  Generator g(99);
  for (int i = 0; i < 500; ++i) {
    const NodePtr t = g.tree(4);
    const std::string text = print(*t);
    const NodePtr back = parse(text);
    INFO(text);
    CHECK(*back == *t);
    CHECK(print(*back) == text);
  }
}

TEST_CASE("evaluation") {
  const auto s = as_dist(eval("Norm(1,2)+Norm(-2,1)"));
  const auto& n = std::get<Normal>(s.exact()->family());
  CHECK(n.mean == -1.0);
  CHECK(n.sd == std::sqrt(5.0));

  const auto two = as_dist(eval("2*Norm(0,1)"));
  REQUIRE(two.exact() != nullptr);
  CHECK(*two.exact()->canonical() == Family(Normal{0, 2}));

  const auto named = as_dist(eval("Norm(sd=2, mean=1)"));
  CHECK(*named.exact()->canonical() == Family(Normal{1, 2}));
  const auto mixed = as_dist(eval("Unif(Max=3, 1)"));
  CHECK(*mixed.exact()->canonical() == Family(Uniform{1, 3}));

  const auto q = std::get<std::vector<double>>(eval("q(Norm(1,2)+convpow(Unif(0,1),3)+Pois(1))(0.3333333333)"));
  REQUIRE(q.size() == 1);
  CHECK(std::abs(q[0] - 2.490786) < 1e-3);

  const auto p = std::get<std::vector<double>>(eval("p(Norm(0,1), 0, 1)"));
  REQUIRE(p.size() == 2);
  CHECK(p[0] == Catch::Approx(0.5).margin(1e-15));

  const auto r1 = std::get<std::vector<double>>(eval("r(Norm())(5)"));
  const auto r2 = std::get<std::vector<double>>(eval("r(Norm())(5)"));
  CHECK(r1.size() == 5);
  CHECK(r1 == r2);
}

TEST_CASE("evaluation errors point at the failing node") {
  try {
    eval("1 + log(Norm(0,1))");
    FAIL("no error");
  } catch (const EvalError& e) {
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(eval("Norm(0,-1)"), EvalError);
  CHECK_THROWS_AS(eval("Norm(Pois(1))"), EvalError);
  CHECK_THROWS_AS(eval("convpow(Unif(), 2.5)"), EvalError);
  CHECK_THROWS_AS(eval("Norm() / 0"), EvalError);
}
