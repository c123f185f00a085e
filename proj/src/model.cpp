#include "mbhd/model.hpp"

#include <cctype>
#include <cstdlib>

#include "mbhd/error.hpp"

namespace mbhd {

struct BoolExpr::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Neg } op = Op::Const;
  double value = 0.0;
  int var = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const BoolExpr::Node>;
using Op = BoolExpr::Node::Op;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse_all() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  int max_var = 0;
  Mask vars = 0;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "expression parse error at offset " + std::to_string(pos_) + ": " + what);
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

  static NodePtr make(Op op, NodePtr l, NodePtr r = nullptr) {
    auto n = std::make_shared<BoolExpr::Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+'))
        n = make(Op::Add, n, term());
      else if (accept('-'))
        n = make(Op::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    auto n = unary();
    while (accept('*')) n = make(Op::Mul, n, unary());
    return n;
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    return atom();
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (c == 'x' || c == 'X') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index after 'x'");
      const int idx = std::atoi(s_.substr(start, pos_ - start).c_str());
      if (idx < 1 || idx > kMaxDimension) fail("variable index out of range");
      auto n = std::make_shared<BoolExpr::Node>();
      n->op = Op::Var;
      n->var = idx;
      max_var = std::max(max_var, idx);
      vars |= Mask{1} << (idx - 1);
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<BoolExpr::Node>();
      n->op = Op::Const;
      n->value = v;
      return n;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const BoolExpr::Node& n, Mask x) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return static_cast<double>((x >> (n.var - 1)) & 1u);
    case Op::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::Neg: return -eval_node(*n.lhs, x);
  }
  return 0.0;
}

}  // namespace

BoolExpr BoolExpr::parse(const std::string& text) {
  Parser p(text);
  BoolExpr e;
  e.root_ = p.parse_all();
  e.source_ = text;
  e.max_var_ = p.max_var;
  e.vars_ = SubsetId{p.vars};
  return e;
}

double BoolExpr::evaluate(Mask x) const { return eval_node(*root_, x); }

Model::Model(int d, Kind kind) : d_(d), kind_(std::move(kind)) {
  if (d_ < 1 || d_ > kMaxDimension) throw Error(ErrorCode::DimensionTooLarge, "model arity must be in [1, 30]");
  if (auto* t = std::get_if<TruthTable>(&kind_)) {
    if (t->values.size() != (std::size_t{1} << d_))
      throw Error(ErrorCode::ArityMismatch, "truth table length must be 2^d");
  } else if (auto* l = std::get_if<LinearThreshold>(&kind_)) {
    if (l->w.size() != static_cast<std::size_t>(d_))
      throw Error(ErrorCode::ArityMismatch, "weight vector length must equal d");
  } else if (auto* e = std::get_if<BoolExpr>(&kind_)) {
    if (e->max_variable() > d_)
      throw Error(ErrorCode::ArityMismatch, "expression references x" +
                                                std::to_string(e->max_variable()) + " but d = " +
                                                std::to_string(d_));
  }
}

Model Model::truth_table(std::vector<double> values) {
  const auto n = values.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::ArityMismatch, "truth table length must be a power of two >= 2");
  const int d = std::countr_zero(n);
  return Model(d, TruthTable{std::move(values)});
}

Model Model::linear_threshold(std::vector<double> w, double b) {
  const int d = static_cast<int>(w.size());
  return Model(d, LinearThreshold{std::move(w), b});
}

Model Model::bool_expr(const std::string& expr, std::optional<int> d) {
  auto e = BoolExpr::parse(expr);
  const int arity = d.value_or(std::max(1, e.max_variable()));
  return Model(arity, std::move(e));
}

std::string_view Model::kind_name() const noexcept {
  switch (kind_.index()) {
    case 0: return "truth_table";
    case 1: return "linear_threshold";
    default: return "bool_expr";
  }
}

double Model::operator()(Mask x) const {
  if (x >> d_) throw Error(ErrorCode::ArityMismatch, "configuration has bits beyond the model arity");
  return std::visit(
      [x](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, TruthTable>) {
          return k.values[x];
        } else if constexpr (std::is_same_v<T, LinearThreshold>) {
          double s = k.b;
          for (std::size_t i = 0; i < k.w.size(); ++i)
            if ((x >> i) & 1u) s += k.w[i];
          return s >= 0.0 ? 1.0 : -1.0;
        } else {
          return k.evaluate(x);
        }
      },
      kind_);
}

double Model::eval(std::span<const std::uint8_t> bits) const {
  if (bits.size() != static_cast<std::size_t>(d_))
    throw Error(ErrorCode::ArityMismatch, "input length " + std::to_string(bits.size()) +
                                              " does not match model arity " + std::to_string(d_));
  return (*this)(config_from_bits(bits));
}

void require_arity(const Model& m, int d) {
  if (m.arity() != d)
    throw Error(ErrorCode::ArityMismatch, "model arity " + std::to_string(m.arity()) +
                                              " does not match input dimension " + std::to_string(d));
}

Model truth_table_of(const Model& m) {
  return Model::tabulate(m.arity(), [&m](Mask x) { return m(x); });
}

Model benchmark_perceptron() {
  std::vector<double> w = {3, -7, -2, -1, 5, -1, 3, 8, 1, -9};
  for (double& v : w) v *= 0.1;
  return Model::linear_threshold(std::move(w), 0.12);
}

Model mushroom_rule_model() { return Model::bool_expr(kMushroomRuleExpr, 5); }

}  // namespace mbhd
