#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mbhd/subset.hpp"

namespace mbhd {

struct TruthTable {
  std::vector<double> values;  // indexed by configuration mask
};

/// sign(w^T x + b) with sign(0) := +1.
struct LinearThreshold {
  std::vector<double> w;
  double b = 0.0;
};

/// Arithmetic expression over x1..xd: + - * parentheses, unary minus, real
/// constants. Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary ('*' unary)*
///   unary  := '-' unary | atom
///   atom   := number | 'x' index | '(' expr ')'
class BoolExpr {
 public:
  struct Node;

  static BoolExpr parse(const std::string& text);

  double evaluate(Mask x) const;
  /// Largest variable index referenced (0 for constants).
  int max_variable() const noexcept { return max_var_; }
  /// Variables actually referenced.
  SubsetId variables() const noexcept { return vars_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  int max_var_ = 0;
  SubsetId vars_;
};

/// Real-valued function on {0,1}^d. Immutable; evaluation is pure.
class Model {
 public:
  using Kind = std::variant<TruthTable, LinearThreshold, BoolExpr>;

  Model(int d, Kind kind);

  static Model truth_table(std::vector<double> values);
  static Model linear_threshold(std::vector<double> w, double b);
  /// d defaults to the largest referenced variable.
  static Model bool_expr(const std::string& expr, std::optional<int> d = std::nullopt);
  /// Wraps an arbitrary callable by tabulating it over all 2^d configurations.
  template <class F>
  static Model tabulate(int d, F&& f) {
    std::vector<double> v(std::size_t{1} << d);
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = f(static_cast<Mask>(x));
    return truth_table(std::move(v));
  }

  int arity() const noexcept { return d_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string_view kind_name() const noexcept;

  double operator()(Mask x) const;
  /// Checks the vector length against the arity.
  double eval(std::span<const std::uint8_t> bits) const;

 private:
  int d_;
  Kind kind_;
};

/// Throws ArityMismatch unless the model takes exactly d inputs.
void require_arity(const Model& m, int d);

/// Evaluates m over every configuration.
Model truth_table_of(const Model& m);

/// d = 10 perceptron with zero-sum weights 0.1 * (3 -7 -2 -1 5 -1 3 8 1 -9), b = 0.12.
Model benchmark_perceptron();

/// Five-rule mushroom classifier x1 x2 (x3 + (1 - x3) x4) + (1 - x1)(1 - x5).
Model mushroom_rule_model();
inline constexpr const char* kMushroomRuleExpr = "x1*x2*(x3 + (1-x3)*x4) + (1-x1)*(1-x5)";

}  // namespace mbhd
