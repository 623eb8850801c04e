#include "srmag/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace srmag {

namespace {

const char* kAxisNames = "xyzw";

bool rational_is(const Rational& r, long v) { return mpq_cmp_si(r.get_mpq_t(), v, 1) == 0; }

}  // namespace

Expr Expr::make(Node&& n) {
  bool poly = true;
  if (n.kind == Kind::Sin || n.kind == Kind::Cos || n.kind == Kind::Exp)
    poly = false;
  for (const Expr& k : n.kids) poly = poly && k.is_polynomial();
  n.polynomial = poly;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr::Expr() {
  Node n;
  n.kind = Kind::Constant;
  n.value = 0;
  node_ = std::make_shared<const Node>(std::move(n));
}

Expr Expr::variable(int axis) {
  if (axis < 0 || axis > 2) throw DomainError("variable axis out of range");
  Node n;
  n.kind = Kind::Variable;
  n.aux = axis;
  return make(std::move(n));
}

Expr Expr::constant(Rational value) {
  Node n;
  n.kind = Kind::Constant;
  n.value = std::move(value);
  return make(std::move(n));
}

Expr Expr::constant(long num, long den) { return constant(make_rational(num, den)); }

bool Expr::is_zero() const {
  return kind() == Kind::Constant && rational_is(value(), 0);
}
bool Expr::is_one() const {
  return kind() == Kind::Constant && rational_is(value(), 1);
}

std::size_t Expr::tree_size() const {
  std::size_t s = 1;
  for (const Expr& k : children()) s += k.tree_size();
  return s;
}

// ---------------------------------------------------------------------------
// Smart constructors

Expr sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational c = 0;
  for (Expr& t : terms) {
    if (t.kind() == Expr::Kind::Sum) {
      for (const Expr& k : t.children()) {
        if (k.is_constant())
          c += k.value();
        else
          flat.push_back(k);
      }
    } else if (t.is_constant()) {
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (!rational_is(c, 0) || flat.empty()) {
    c.canonicalize();
    flat.push_back(Expr::constant(c));
  }
  if (flat.size() == 1) return flat.front();
  // constants last keeps "x - 3" shaped trees printable in grammar order
  std::stable_partition(flat.begin(), flat.end(),
                        [](const Expr& e) { return !e.is_constant(); });
  Expr::Node n;
  n.kind = Expr::Kind::Sum;
  n.kids = std::move(flat);
  return Expr::make(std::move(n));
}

Expr product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational c = 1;
  bool negate = false;
  for (Expr& f : factors) {
    if (f.kind() == Expr::Kind::Negate) {
      negate = !negate;
      f = f.children().front();
    }
    if (f.kind() == Expr::Kind::Product) {
      for (const Expr& k : f.children()) {
        if (k.is_constant())
          c *= k.value();
        else
          flat.push_back(k);
      }
    } else if (f.is_constant()) {
      c *= f.value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (negate) c = -c;
  c.canonicalize();
  if (rational_is(c, 0)) return Expr::constant(0);
  if (flat.empty()) return Expr::constant(c);
  std::vector<Expr> kids;
  if (!rational_is(c, 1)) kids.push_back(Expr::constant(c));
  for (Expr& f : flat) kids.push_back(std::move(f));
  if (kids.size() == 1) return kids.front();
  Expr::Node n;
  n.kind = Expr::Kind::Product;
  n.kids = std::move(kids);
  return Expr::make(std::move(n));
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 1) return base;
  if (exponent == 0) return Expr::constant(1);  // convention: 0^0 = 1
  if (base.is_constant()) {
    const Rational& b = base.value();
    if (rational_is(b, 0)) {
      if (exponent < 0) throw DomainError("zero base with negative exponent");
      return Expr::constant(0);
    }
    Rational r = 1;
    Rational m = exponent > 0 ? b : Rational(1) / b;
    for (int i = 0; i < std::abs(exponent); ++i) r *= m;
    r.canonicalize();
    return Expr::constant(r);
  }
  if (base.kind() == Expr::Kind::Power) {
    long k = static_cast<long>(base.exponent()) * exponent;
    if (k >= INT32_MIN && k <= INT32_MAX)
      return pow(base.children().front(), static_cast<int>(k));
  }
  Expr::Node n;
  n.kind = Expr::Kind::Power;
  n.aux = exponent;
  n.kids = {base};
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(Rational(-a.value()));
  if (a.kind() == Expr::Kind::Negate) return a.children().front();
  Expr::Node n;
  n.kind = Expr::Kind::Negate;
  n.kids = {a};
  return Expr::make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return sum({a, b});
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return product({a, b});
}

Expr divide(const Expr& num, const Expr& den) {
  if (den.is_zero()) throw DomainError("division by a literal zero");
  if (den.is_constant()) {
    Rational inv = Rational(1) / den.value();
    inv.canonicalize();
    return num * Expr::constant(inv);
  }
  return num * pow(den, -1);
}

Expr sin(const Expr& e) {
  Expr::Node n;
  n.kind = Expr::Kind::Sin;
  n.kids = {e};
  return Expr::make(std::move(n));
}
Expr cos(const Expr& e) {
  Expr::Node n;
  n.kind = Expr::Kind::Cos;
  n.kids = {e};
  return Expr::make(std::move(n));
}
Expr exp(const Expr& e) {
  Expr::Node n;
  n.kind = Expr::Kind::Exp;
  n.kids = {e};
  return Expr::make(std::move(n));
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, int axis) {
  if (axis < 0 || axis > 3) throw DomainError("derivative axis out of range");
  switch (e.kind()) {
    case Expr::Kind::Variable:
      return Expr::constant(e.axis() == axis ? 1 : 0);
    case Expr::Kind::Constant:
      return Expr::constant(0);
    case Expr::Kind::Sum: {
      std::vector<Expr> parts;
      parts.reserve(e.children().size());
      for (const Expr& k : e.children()) parts.push_back(differentiate(k, axis));
      return sum(std::move(parts));
    }
    case Expr::Kind::Product: {
      const auto& kids = e.children();
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr d = differentiate(kids[i], axis);
        if (d.is_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(kids.size());
        for (std::size_t j = 0; j < kids.size(); ++j)
          factors.push_back(j == i ? d : kids[j]);
        parts.push_back(product(std::move(factors)));
      }
      return sum(std::move(parts));
    }
    case Expr::Kind::Power: {
      const Expr& b = e.children().front();
      Expr d = differentiate(b, axis);
      if (d.is_zero()) return Expr::constant(0);
      return Expr::constant(e.exponent()) * pow(b, e.exponent() - 1) * d;
    }
    case Expr::Kind::Negate:
      return -differentiate(e.children().front(), axis);
    case Expr::Kind::Sin:
      return cos(e.children().front()) * differentiate(e.children().front(), axis);
    case Expr::Kind::Cos:
      return -(sin(e.children().front()) *
               differentiate(e.children().front(), axis));
    case Expr::Kind::Exp:
      return e * differentiate(e.children().front(), axis);
  }
  throw DomainError("unreachable expression kind");
}

Expr nth_derivative(const Expr& e, int axis, int order, int max_order) {
  if (order < 0) throw DomainError("negative derivative order");
  if (order > max_order)
    throw DomainError("derivative order " + std::to_string(order) +
                      " exceeds budget " + std::to_string(max_order));
  Expr r = e;
  for (int i = 0; i < order; ++i) r = differentiate(r, axis);
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const Vec3& p) {
  switch (e.kind()) {
    case Expr::Kind::Variable:
      return p[static_cast<std::size_t>(e.axis())];
    case Expr::Kind::Constant:
      return to_double(e.value());
    case Expr::Kind::Sum: {
      double s = 0;
      for (const Expr& k : e.children()) s += evaluate(k, p);
      return s;
    }
    case Expr::Kind::Product: {
      double s = 1;
      for (const Expr& k : e.children()) s *= evaluate(k, p);
      return s;
    }
    case Expr::Kind::Power: {
      double b = evaluate(e.children().front(), p);
      double r = 1;
      double m = e.exponent() > 0 ? b : 1.0 / b;
      for (int i = std::abs(e.exponent()); i > 0; --i) r *= m;
      return r;
    }
    case Expr::Kind::Negate:
      return -evaluate(e.children().front(), p);
    case Expr::Kind::Sin:
      return std::sin(evaluate(e.children().front(), p));
    case Expr::Kind::Cos:
      return std::cos(evaluate(e.children().front(), p));
    case Expr::Kind::Exp:
      return std::exp(evaluate(e.children().front(), p));
  }
  return 0;
}

Rational evaluate_exact(const Expr& e, const RVec3& p, int digit_limit) {
  switch (e.kind()) {
    case Expr::Kind::Variable:
      return p[static_cast<std::size_t>(e.axis())];
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Sum: {
      Rational s = 0;
      for (const Expr& k : e.children()) s += evaluate_exact(k, p, digit_limit);
      s.canonicalize();
      check_rational_size(s, digit_limit);
      return s;
    }
    case Expr::Kind::Product: {
      Rational s = 1;
      for (const Expr& k : e.children()) s *= evaluate_exact(k, p, digit_limit);
      s.canonicalize();
      check_rational_size(s, digit_limit);
      return s;
    }
    case Expr::Kind::Power: {
      Rational b = evaluate_exact(e.children().front(), p, digit_limit);
      if (e.exponent() < 0 && rational_is(b, 0))
        throw NumericError("pole: zero base with negative exponent");
      Rational m = e.exponent() > 0 ? b : Rational(Rational(1) / b);
      Rational r = 1;
      for (int i = std::abs(e.exponent()); i > 0; --i) r *= m;
      r.canonicalize();
      check_rational_size(r, digit_limit);
      return r;
    }
    case Expr::Kind::Negate:
      return Rational(-evaluate_exact(e.children().front(), p, digit_limit));
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
    case Expr::Kind::Exp:
      throw DomainError(
          "exact rational evaluation requires a sin/cos/exp-free expression");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Structural equality and probabilistic identity

bool structural_equal(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Variable:
      if (a.axis() != b.axis()) return false;
      break;
    case Expr::Kind::Constant:
      if (a.value() != b.value()) return false;
      break;
    case Expr::Kind::Power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!structural_equal(a.children()[i], b.children()[i])) return false;
  return true;
}

bool probably_equal(const Expr& a, const Expr& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (a.is_polynomial() && b.is_polynomial()) {
    int done = 0, guard = 0;
    while (done < 5) {
      if (++guard > 200)
        throw NumericError("identity test: could not find pole-free samples");
      RVec3 p = random_rational_point(rng);
      try {
        if (evaluate_exact(a, p) != evaluate_exact(b, p)) return false;
      } catch (const NumericError&) {
        continue;  // pole; resample
      }
      ++done;
    }
    return true;
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Vec3 p = {u(rng), u(rng), u(rng)};
    double va = evaluate(a, p), vb = evaluate(b, p);
    if (!std::isfinite(va) || !std::isfinite(vb)) { --i; continue; }
    double scale = std::max({1.0, std::abs(va), std::abs(vb)});
    if (std::abs(va - vb) > 1e-12 * scale) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    skip_ws();
    bool lead_neg = eat('-');
    Expr acc = parse_term();
    if (lead_neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc = acc + parse_term();
      else if (eat('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }

  Expr parse_term() {
    Expr acc = parse_unary();
    for (;;) {
      if (eat('*'))
        acc = acc * parse_unary();
      else if (eat('/'))
        acc = divide(acc, parse_unary());
      else
        return acc;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (eat('^')) {
      int e = parse_int_exponent();
      return pow(base, e);
    }
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    bool paren = eat('(');
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail("non-integer exponent");
    long v = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (v > 64) fail("exponent too large");
    if (paren && !eat(')')) fail("expected ')' after exponent");
    return static_cast<int>(neg ? -v : v);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    bool any_digit = pos_ > start;
    mpz_class int_part = 0;
    if (any_digit) int_part = mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
    mpz_class num = int_part, den = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      any_digit = any_digit || pos_ > fstart;
      for (std::size_t i = fstart; i < pos_; ++i) {
        num = num * 10 + (text_[i] - '0');
        den *= 10;
      }
    }
    if (!any_digit) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      bool eneg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        eneg = text_[pos_++] == '-';
      std::size_t estart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (estart == pos_) { pos_ = save; }  // not an exponent; leave for caller
      else {
        long ev = std::strtol(std::string(text_.substr(estart, pos_ - estart)).c_str(), nullptr, 10);
        if (ev > 4096) fail("decimal exponent too large");
        mpz_class scale = 1;
        for (long i = 0; i < ev; ++i) scale *= 10;
        if (eneg) den *= scale; else num *= scale;
      }
    }
    Rational r(num, den);
    r.canonicalize();
    return Expr::constant(std::move(r));
  }

  Expr parse_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x") return Expr::variable(0);
    if (name == "y") return Expr::variable(1);
    if (name == "z") return Expr::variable(2);
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!eat('(')) fail("expected '(' after function name");
      Expr arg = parse_sum();
      if (!eat(')')) fail("expected ')' after function argument");
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      return exp(arg);
    }
    pos_ = start;
    fail("unknown name '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Printer. Emits the parse grammar; the parser's constant folding of unary
// minus on literals makes print -> parse structurally exact.

namespace {

enum Prec { kSum = 0, kTerm = 1, kUnary = 2, kPower = 3, kAtom = 4 };

// Precedence level at which the printed form of e re-parses as one unit.
int intrinsic_prec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Sum:
      return kSum;
    case Expr::Kind::Product:
      return kTerm;
    case Expr::Kind::Negate:
      return kUnary;
    case Expr::Kind::Power:
      return kPower;
    case Expr::Kind::Constant: {
      bool frac = e.value().get_den() != 1;
      bool neg = sgn(e.value()) < 0;
      if (frac) return kTerm;  // "3/4" parses as a division term
      if (neg) return kUnary;  // "-3" parses as unary minus (then folds)
      return kAtom;
    }
    default:
      return kAtom;  // variable, sin/cos/exp
  }
}

void print(const Expr& e, std::string& out, int min_prec);

void print_body(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Variable:
      out += kAxisNames[e.axis()];
      return;
    case Expr::Kind::Constant:
      out += to_string(e.value());
      return;
    case Expr::Kind::Sum: {
      bool first = true;
      for (const Expr& k : e.children()) {
        if (!first) {
          if (k.kind() == Expr::Kind::Negate) {
            out += " - ";
            print(k.children().front(), out, kTerm);
            first = false;
            continue;
          }
          if (k.is_constant() && sgn(k.value()) < 0) {
            out += " - ";
            print(Expr::constant(Rational(-k.value())), out, kTerm);
            first = false;
            continue;
          }
          out += " + ";
        }
        print(k, out, kTerm);
        first = false;
      }
      return;
    }
    case Expr::Kind::Product: {
      bool first = true;
      for (const Expr& k : e.children()) {
        if (!first) out += '*';
        print(k, out, first ? kTerm : kUnary);
        first = false;
      }
      return;
    }
    case Expr::Kind::Power: {
      print(e.children().front(), out, kAtom);
      out += '^';
      if (e.exponent() < 0)
        out += "(-" + std::to_string(-e.exponent()) + ")";
      else
        out += std::to_string(e.exponent());
      return;
    }
    case Expr::Kind::Negate:
      out += '-';
      print(e.children().front(), out, kPower);
      return;
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
    case Expr::Kind::Exp:
      out += e.kind() == Expr::Kind::Sin   ? "sin("
             : e.kind() == Expr::Kind::Cos ? "cos("
                                           : "exp(";
      print(e.children().front(), out, kSum);
      out += ')';
      return;
  }
}

void print(const Expr& e, std::string& out, int min_prec) {
  if (intrinsic_prec(e) < min_prec) {
    out += '(';
    print_body(e, out);
    out += ')';
  } else {
    print_body(e, out);
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, kSum);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledExpr::CompiledExpr(const Expr& e) {
  compile(e);
  std::size_t depth = 0, peak = 1;
  for (const Ins& ins : prog_) {
    switch (ins.op) {
      case Op::Const:
      case Op::Var:
        ++depth;
        break;
      case Op::Add:
      case Op::Mul:
        depth -= static_cast<std::size_t>(ins.arg) - 1;
        break;
      default:
        break;
    }
    peak = std::max(peak, depth);
  }
  stack_need_ = peak + 1;
}

void CompiledExpr::compile(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Variable:
      prog_.push_back({Op::Var, e.axis(), 0.0});
      return;
    case Expr::Kind::Constant:
      prog_.push_back({Op::Const, 0, to_double(e.value())});
      return;
    case Expr::Kind::Sum:
      for (const Expr& k : e.children()) compile(k);
      prog_.push_back({Op::Add, static_cast<std::int32_t>(e.children().size()), 0.0});
      return;
    case Expr::Kind::Product:
      for (const Expr& k : e.children()) compile(k);
      prog_.push_back({Op::Mul, static_cast<std::int32_t>(e.children().size()), 0.0});
      return;
    case Expr::Kind::Power:
      compile(e.children().front());
      prog_.push_back({Op::Pow, e.exponent(), 0.0});
      return;
    case Expr::Kind::Negate:
      compile(e.children().front());
      prog_.push_back({Op::Neg, 0, 0.0});
      return;
    case Expr::Kind::Sin:
      compile(e.children().front());
      prog_.push_back({Op::Sin, 0, 0.0});
      return;
    case Expr::Kind::Cos:
      compile(e.children().front());
      prog_.push_back({Op::Cos, 0, 0.0});
      return;
    case Expr::Kind::Exp:
      compile(e.children().front());
      prog_.push_back({Op::Exp, 0, 0.0});
      return;
  }
}

double CompiledExpr::eval(const double* vars) const {
  thread_local std::vector<double> scratch;
  if (scratch.size() < stack_need_) scratch.resize(stack_need_);
  double* sp = scratch.data();
  for (const Ins& ins : prog_) {
    switch (ins.op) {
      case Op::Const:
        *sp++ = ins.imm;
        break;
      case Op::Var:
        *sp++ = vars[ins.arg];
        break;
      case Op::Add: {
        double s = 0;
        for (int i = 0; i < ins.arg; ++i) s += *--sp;
        *sp++ = s;
        break;
      }
      case Op::Mul: {
        double s = 1;
        for (int i = 0; i < ins.arg; ++i) s *= *--sp;
        *sp++ = s;
        break;
      }
      case Op::Pow: {
        double b = *--sp;
        double m = ins.arg > 0 ? b : 1.0 / b;
        double r = 1;
        for (int i = std::abs(ins.arg); i > 0; --i) r *= m;
        *sp++ = r;
        break;
      }
      case Op::Neg:
        sp[-1] = -sp[-1];
        break;
      case Op::Sin:
        sp[-1] = std::sin(sp[-1]);
        break;
      case Op::Cos:
        sp[-1] = std::cos(sp[-1]);
        break;
      case Op::Exp:
        sp[-1] = std::exp(sp[-1]);
        break;
    }
  }
  return sp[-1];
}

}  // namespace srmag
