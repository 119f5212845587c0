#include "lightcone/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lightcone/error.hpp"

namespace lightcone {

namespace {

using Kind = Expression::Kind;
using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr double kTinyDenominator = 1e-300;

NodePtr make_node(Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

NodePtr make_var(int slot) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Kind::Var;
  n->var = slot;
  return n;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* function_name(Kind k) {
  switch (k) {
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    case Kind::Sqrt: return "sqrt";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Tanh: return "tanh";
    default: return nullptr;
  }
}

const char* kind_label(Kind k) {
  switch (k) {
    case Kind::Const: return "Const";
    case Kind::Var: return "Var";
    case Kind::Add: return "Add";
    case Kind::Sub: return "Sub";
    case Kind::Mul: return "Mul";
    case Kind::Div: return "Div";
    case Kind::Neg: return "Neg";
    case Kind::IntPow: return "IntPow";
    case Kind::Pow: return "Pow";
    case Kind::Exp: return "Exp";
    case Kind::Log: return "Log";
    case Kind::Sqrt: return "Sqrt";
    case Kind::Sin: return "Sin";
    case Kind::Cos: return "Cos";
    case Kind::Tanh: return "Tanh";
  }
  return "?";
}

void describe_node(const Expression::Node& n, int first, std::ostringstream& os) {
  switch (n.kind) {
    case Kind::Const: os << "Const " << format_number(n.value); return;
    case Kind::Var: os << "Var " << (n.var + first); return;
    case Kind::IntPow:
      os << "IntPow(";
      describe_node(*n.args[0], first, os);
      os << ", " << n.exponent << ")";
      return;
    default: break;
  }
  os << kind_label(n.kind) << "(";
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) os << ", ";
    describe_node(*n.args[i], first, os);
  }
  os << ")";
}

void infix_node(const Expression::Node& n, int first, std::ostringstream& os) {
  auto binary = [&](const char* op) {
    os << "(";
    infix_node(*n.args[0], first, os);
    os << " " << op << " ";
    infix_node(*n.args[1], first, os);
    os << ")";
  };
  switch (n.kind) {
    case Kind::Const: os << format_number(n.value); return;
    case Kind::Var: os << "x" << (n.var + first); return;
    case Kind::Add: binary("+"); return;
    case Kind::Sub: binary("-"); return;
    case Kind::Mul: binary("*"); return;
    case Kind::Div: binary("/"); return;
    case Kind::Pow: binary("^"); return;
    case Kind::Neg:
      os << "(-";
      infix_node(*n.args[0], first, os);
      os << ")";
      return;
    case Kind::IntPow:
      os << "(";
      infix_node(*n.args[0], first, os);
      os << "^" << n.exponent << ")";
      return;
    default:
      os << function_name(n.kind) << "(";
      infix_node(*n.args[0], first, os);
      os << ")";
      return;
  }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, int arity, int first) : text_(text), arity_(arity), first_(first) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_node(Kind::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make_node(Kind::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = power();
    for (;;) {
      if (accept('*'))
        lhs = make_node(Kind::Mul, {lhs, power()});
      else if (accept('/'))
        lhs = make_node(Kind::Div, {lhs, power()});
      else
        return lhs;
    }
  }

  // Value of a variable-free arithmetic subtree.
  static bool fold(const Expression::Node& n, double* v) {
    double a = 0.0, b = 0.0;
    switch (n.kind) {
      case Kind::Const:
        *v = n.value;
        return true;
      case Kind::Neg:
        if (!fold(*n.args[0], &a)) return false;
        *v = -a;
        return true;
      case Kind::IntPow:
        if (!fold(*n.args[0], &a)) return false;
        *v = std::pow(a, static_cast<double>(n.exponent));
        return true;
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div:
        if (!fold(*n.args[0], &a) || !fold(*n.args[1], &b)) return false;
        *v = n.kind == Kind::Add ? a + b : n.kind == Kind::Sub ? a - b : n.kind == Kind::Mul ? a * b : a / b;
        return true;
      default:
        return false;
    }
  }

  static bool integral_exponent(const Expression::Node& n, long* k) {
    double v;
    if (!fold(n, &v)) return false;
    if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 1 << 30) return false;
    *k = static_cast<long>(v);
    return true;
  }

  NodePtr power() {
    NodePtr base = unary();
    if (!accept('^')) return base;
    NodePtr exponent = power();
    long k = 0;
    if (integral_exponent(*exponent, &k)) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::IntPow;
      n->exponent = k;
      n->args = {base};
      return n;
    }
    return make_node(Kind::Pow, {base, exponent});
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
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
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const char* b = text_.data() + start;
    const char* e = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
      pos_ = start;
      fail("malformed number");
    }
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    static const std::pair<const char*, Kind> functions[] = {
        {"exp", Kind::Exp}, {"log", Kind::Log}, {"sqrt", Kind::Sqrt},
        {"sin", Kind::Sin}, {"cos", Kind::Cos}, {"tanh", Kind::Tanh}};
    for (const auto& [fname, kind] : functions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make_node(kind, {arg});
      }
    }
    if (name == "pi") return make_const(M_PI);
    if (name == "e") return make_const(M_E);
    if (name == "xn") return make_var(arity_ - 1);

    if (name.size() >= 2 && name[0] == 'x') {
      std::string_view digits = std::string_view(name).substr(name[1] == '_' ? 2 : 1);
      bool all_digits = !digits.empty();
      for (char d : digits) all_digits = all_digits && std::isdigit(static_cast<unsigned char>(d));
      if (all_digits) {
        long idx = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
        if (ec != std::errc() || idx < first_ || idx > first_ + arity_ - 1) {
          throw VariableOutOfRange("variable '" + name + "' at position " + std::to_string(start) +
                                   " is outside x" + std::to_string(first_) + "..x" +
                                   std::to_string(first_ + arity_ - 1));
        }
        return make_var(static_cast<int>(idx - first_));
      }
    }
    throw UnknownIdentifier(start, name);
  }

  std::string_view text_;
  int arity_;
  int first_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

template <class T>
double value_of(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return v.value();
  }
}

template <class T>
class Evaluator {
 public:
  Evaluator(std::span<const T> inputs, int first) : inputs_(inputs), first_(first) {}

  T eval(const Expression::Node& n) const {
    switch (n.kind) {
      case Kind::Const: return constant(n.value);
      case Kind::Var: return inputs_[static_cast<std::size_t>(n.var)];
      case Kind::Add: return eval(*n.args[0]) + eval(*n.args[1]);
      case Kind::Sub: return eval(*n.args[0]) - eval(*n.args[1]);
      case Kind::Mul: return eval(*n.args[0]) * eval(*n.args[1]);
      case Kind::Div: {
        T num = eval(*n.args[0]);
        T den = eval(*n.args[1]);
        if (std::fabs(value_of(den)) < kTinyDenominator) domain_error(n, "division by zero");
        return num / den;
      }
      case Kind::Neg: return -eval(*n.args[0]);
      case Kind::IntPow: {
        T base = eval(*n.args[0]);
        if (n.exponent < 0 && std::fabs(value_of(base)) < kTinyDenominator)
          domain_error(n, "negative power of zero");
        return int_power(base, n.exponent);
      }
      case Kind::Pow: {
        T base = eval(*n.args[0]);
        T exponent = eval(*n.args[1]);
        if (!(value_of(base) > 0.0)) domain_error(n, "non-integer power of a nonpositive base");
        using std::exp;
        using std::log;
        return exp(exponent * log(base));
      }
      case Kind::Exp: {
        using std::exp;
        return exp(eval(*n.args[0]));
      }
      case Kind::Log: {
        T u = eval(*n.args[0]);
        if (!(value_of(u) > 0.0)) domain_error(n, "log of a nonpositive value");
        using std::log;
        return log(u);
      }
      case Kind::Sqrt: {
        T u = eval(*n.args[0]);
        const double x = value_of(u);
        if (x < 0.0 || (x == 0.0 && has_derivatives(u))) domain_error(n, "sqrt outside its domain");
        using std::sqrt;
        return sqrt(u);
      }
      case Kind::Sin: {
        using std::sin;
        return sin(eval(*n.args[0]));
      }
      case Kind::Cos: {
        using std::cos;
        return cos(eval(*n.args[0]));
      }
      case Kind::Tanh: {
        using std::tanh;
        return tanh(eval(*n.args[0]));
      }
    }
    return constant(0.0);
  }

 private:
  T constant(double v) const {
    if constexpr (std::is_same_v<T, double>) {
      return v;
    } else {
      const int arity = inputs_.empty() ? 0 : inputs_[0].arity();
      int order = Jet3::kMaxOrder;
      for (const Jet3& in : inputs_) order = std::min(order, in.order());
      return Jet3::constant(arity, v, order);
    }
  }

  static bool has_derivatives(const T& u) {
    if constexpr (std::is_same_v<T, double>) {
      return false;
    } else {
      return u.order() > 0;
    }
  }

  static T int_power(const T& base, long k) {
    if constexpr (std::is_same_v<T, double>) {
      if (k < 0) return 1.0 / int_power(base, -k);
      double result = 1.0, b = base;
      while (k > 0) {
        if (k & 1) result *= b;
        k >>= 1;
        if (k > 0) b *= b;
      }
      return result;
    } else {
      return ipow(base, k);
    }
  }

  [[noreturn]] void domain_error(const Expression::Node& n, const char* what) const {
    std::ostringstream sub;
    infix_node(n, first_, sub);
    std::ostringstream msg;
    msg << what << " in '" << sub.str() << "' at (";
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (i) msg << ", ";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", value_of(inputs_[i]));
      msg << buf;
    }
    msg << ")";
    throw DomainError(msg.str());
  }

  std::span<const T> inputs_;
  int first_;
};

}  // namespace

Expression Expression::parse(std::string_view text, int arity, int first_index) {
  if (arity < 1) throw std::invalid_argument("expression arity must be positive");
  Parser p(text, arity, first_index);
  return Expression(p.parse(), arity, first_index);
}

Expression Expression::constant(double value, int arity, int first_index) {
  return Expression(make_const(value), arity, first_index);
}

Expression Expression::variable(int slot, int arity, int first_index) {
  if (slot < 0 || slot >= arity) throw VariableOutOfRange("variable slot out of range");
  return Expression(make_var(slot), arity, first_index);
}

namespace {

bool has_variable(const Expression::Node& n) {
  if (n.kind == Kind::Var) return true;
  for (const auto& a : n.args)
    if (has_variable(*a)) return true;
  return false;
}

}  // namespace

bool Expression::is_constant(double* value) const {
  if (has_variable(*root_)) return false;
  double v;
  try {
    v = evaluate(std::vector<double>(static_cast<std::size_t>(arity_), 0.0));
  } catch (const DomainError&) {
    return false;
  }
  if (value) *value = v;
  return true;
}

std::string Expression::describe() const {
  std::ostringstream os;
  describe_node(*root_, first_index_, os);
  return os.str();
}

std::string Expression::to_string() const {
  std::ostringstream os;
  infix_node(*root_, first_index_, os);
  return os.str();
}

double Expression::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != arity_) throw std::invalid_argument("point has wrong dimension");
  return Evaluator<double>(point, first_index_).eval(*root_);
}

Jet3 Expression::evaluate(std::span<const Jet3> inputs) const {
  if (static_cast<int>(inputs.size()) != arity_) throw std::invalid_argument("wrong number of jet inputs");
  return Evaluator<Jet3>(inputs, first_index_).eval(*root_);
}

namespace {

void check_compatible(const Expression& a, const Expression& b) {
  if (a.arity() != b.arity() || a.first_index() != b.first_index())
    throw std::invalid_argument("combining expressions over different variables");
}

}  // namespace

Expression operator+(const Expression& a, const Expression& b) {
  check_compatible(a, b);
  return Expression(make_node(Kind::Add, {a.root_, b.root_}), a.arity_, a.first_index_);
}

Expression operator-(const Expression& a, const Expression& b) {
  check_compatible(a, b);
  return Expression(make_node(Kind::Sub, {a.root_, b.root_}), a.arity_, a.first_index_);
}

Expression operator*(const Expression& a, const Expression& b) {
  check_compatible(a, b);
  return Expression(make_node(Kind::Mul, {a.root_, b.root_}), a.arity_, a.first_index_);
}

Expression operator/(const Expression& a, const Expression& b) {
  check_compatible(a, b);
  return Expression(make_node(Kind::Div, {a.root_, b.root_}), a.arity_, a.first_index_);
}

Expression operator-(const Expression& a) {
  return Expression(make_node(Kind::Neg, {a.root_}), a.arity_, a.first_index_);
}

Jet3 eval_jet3(const Expression& e, std::span<const double> point, int order) {
  if (static_cast<int>(point.size()) != e.arity()) throw std::invalid_argument("point has wrong dimension");
  const std::vector<Jet3> seeds = seed_variables(point, order);
  return e.evaluate(std::span<const Jet3>(seeds));
}

}  // namespace lightcone
