#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "srmag/common.hpp"
#include "srmag/rational.hpp"

namespace srmag {

enum class EvalMode { Float64, ExactRational };

/// Immutable symbolic scalar expression over the chart coordinates (x, y, z).
///
/// Trees are shared (structural DAG via shared_ptr); all operations build new
/// trees. Construction applies light local simplification only (0+e -> e,
/// 1*e -> e, 0*e -> 0, constant folding); no canonical form is guaranteed,
/// equality is decided by evaluation.
class Expr {
 public:
  enum class Kind : std::uint8_t {
    Variable,
    Constant,
    Sum,
    Product,
    Power,
    Negate,
    Sin,
    Cos,
    Exp
  };

  Expr();  // constant 0
  static Expr variable(int axis);
  static Expr constant(Rational value);
  static Expr constant(long num, long den = 1);

  Kind kind() const { return node_->kind; }
  int axis() const { return node_->aux; }       // Kind::Variable
  int exponent() const { return node_->aux; }   // Kind::Power
  const Rational& value() const { return node_->value; }  // Kind::Constant
  const std::vector<Expr>& children() const { return node_->kids; }

  bool is_zero() const;
  bool is_one() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  /// True iff the tree contains no sin/cos/exp node; such expressions admit
  /// exact rational evaluation (negative integer powers included).
  bool is_polynomial() const { return node_->polynomial; }

  std::size_t tree_size() const;

 private:
  struct Node {
    Kind kind;
    int aux = 0;
    Rational value;
    std::vector<Expr> kids;
    bool polynomial = true;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node&& n);
  std::shared_ptr<const Node> node_;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, int);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr sum(std::vector<Expr>);
  friend Expr product(std::vector<Expr>);
  friend bool structural_equal(const Expr&, const Expr&);
};

// Smart constructors (the only way trees are built).
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// num/den; den must not be a literal zero. Non-constant denominators become
/// num * den^-1.
Expr divide(const Expr& num, const Expr& den);

/// Parses the expression grammar: decimal/rational literals, x y z,
/// + - * / ^ (integer exponents), parentheses, sin/cos/exp.
/// Throws SyntaxError with a byte offset.
Expr parse_expr(std::string_view text);

/// Emits the same grammar; parse(to_string(e)) is structurally equal to e.
std::string to_string(const Expr& e);

/// Exact partial derivative along axis 0..3 (axis 3 = the lifted fiber
/// coordinate, on which chart expressions never depend).
Expr differentiate(const Expr& e, int axis);

/// Iterated derivative with a loud failure beyond max_order.
Expr nth_derivative(const Expr& e, int axis, int order,
                    int max_order = kDerivativeBudget);

double evaluate(const Expr& e, const Vec3& p);

/// Exact rational evaluation; requires is_polynomial() and throws
/// DomainError otherwise. NumericError if a value exceeds the digit bound or
/// a negative power hits a zero base.
Rational evaluate_exact(const Expr& e, const RVec3& p,
                        int digit_limit = kRationalDigitLimit);

bool structural_equal(const Expr& a, const Expr& b);

/// Probabilistic identity test: exact at 5 random rational points when both
/// sides are polynomial, else |a-b| <= 1e-12 relative at 20 float points.
bool probably_equal(const Expr& a, const Expr& b,
                    std::uint64_t seed = 0x5eed5eedULL);
inline bool probably_zero(const Expr& e,
                          std::uint64_t seed = 0x5eed5eedULL) {
  return probably_equal(e, Expr(), seed);
}

/// Expression flattened to a postfix program for fast float evaluation in
/// inner integration loops. Thread-safe for concurrent eval() calls.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);
  double eval(const double* vars) const;
  double eval(const Vec3& p) const { return eval(p.data()); }

 private:
  enum class Op : std::uint8_t { Const, Var, Add, Mul, Neg, Pow, Sin, Cos, Exp };
  struct Ins {
    Op op;
    std::int32_t arg = 0;
    double imm = 0.0;
  };
  void compile(const Expr& e);
  std::vector<Ins> prog_;
  std::size_t stack_need_ = 1;
};

}  // namespace srmag
