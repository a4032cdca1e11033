#include "fbp/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "fbp/error.hpp"

namespace fbp {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(Point p) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Const : Node {
  double v;
  explicit Const(double v) : v(v) {}
  double eval(Point) const override { return v; }
};

struct Var : Node {
  char c;
  explicit Var(char c) : c(c) {}
  double eval(Point p) const override { return c == 'x' ? p.x : c == 'y' ? p.y : norm(p); }
};

struct Binary : Node {
  char op;
  NodePtr a, b;
  Binary(char op, NodePtr a, NodePtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
  double eval(Point p) const override {
    const double x = a->eval(p);
    const double y = b->eval(p);
    switch (op) {
      case '+':
        return x + y;
      case '-':
        return x - y;
      case '*':
        return x * y;
      case '/':
        return x / y;
      default:
        return std::pow(x, y);
    }
  }
};

struct Call : Node {
  std::string name;
  std::vector<NodePtr> args;
  Call(std::string n, std::vector<NodePtr> a) : name(std::move(n)), args(std::move(a)) {}
  double eval(Point p) const override {
    const double x = args[0]->eval(p);
    if (name == "sin") return std::sin(x);
    if (name == "cos") return std::cos(x);
    if (name == "sqrt") return std::sqrt(x);
    if (name == "exp") return std::exp(x);
    if (name == "log") return std::log(x);
    if (name == "abs") return std::abs(x);
    const double y = args[1]->eval(p);
    if (name == "atan2") return std::atan2(x, y);
    if (name == "min") return std::min(x, y);
    return std::max(x, y);
  }
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ConfigInvalid,
                "expression \"" + s_ + "\" at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr a = term();
    while (true) {
      if (eat('+')) {
        a = std::make_shared<Binary>('+', a, term());
      } else if (eat('-')) {
        a = std::make_shared<Binary>('-', a, term());
      } else {
        return a;
      }
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    while (true) {
      if (eat('*')) {
        a = std::make_shared<Binary>('*', a, unary());
      } else if (eat('/')) {
        a = std::make_shared<Binary>('/', a, unary());
      } else {
        return a;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return std::make_shared<Binary>('-', std::make_shared<Const>(0.0), unary());
    return power();
  }

  NodePtr power() {
    NodePtr a = primary();
    if (eat('^')) return std::make_shared<Binary>('^', a, unary());
    return a;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (eat('|')) {
      NodePtr e = expr();
      if (!eat('|')) fail("missing closing '|'");
      return std::make_shared<Call>("abs", std::vector<NodePtr>{e});
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return std::make_shared<Const>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      const std::string id = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (id == "x" || id == "y" || id == "r") return std::make_shared<Var>(id[0]);
      if (id == "pi") return std::make_shared<Const>(std::numbers::pi);
      int arity = 0;
      for (const char* f : {"sin", "cos", "sqrt", "exp", "log", "abs"}) arity = id == f ? 1 : arity;
      for (const char* f : {"atan2", "min", "max"}) arity = id == f ? 2 : arity;
      if (arity == 0) fail("unknown name '" + id + "'");
      if (!eat('(')) fail("expected '(' after " + id);
      std::vector<NodePtr> args{expr()};
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("missing ')' after arguments of " + id);
      if (static_cast<int>(args.size()) != arity) {
        fail(id + " takes " + std::to_string(arity) + " argument(s)");
      }
      return std::make_shared<Call>(id, std::move(args));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(Point)> compile_expression(const std::string& text) {
  NodePtr root = Parser(text).parse();
  return [root](Point p) { return root->eval(p); };
}

}  // namespace fbp
