#include "qfb/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qfb/error.hpp"

namespace qfb {

namespace {

using K = ExprNode::Kind;

class Parser {
 public:
  Parser(const std::string& src, Domain d, const std::vector<std::string>& params)
      : s_(src), domain_(d), params_(params) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (i_ < s_.size()) throw ParseError(i_, std::string("unexpected '") + s_[i_] + "'");
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  std::shared_ptr<ExprNode> node(K kind, std::size_t pos, Expr a = nullptr, Expr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->pos = pos;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      skip();
      std::size_t p = i_;
      if (eat('+')) e = node(K::Add, p, e, term());
      else if (eat('-')) e = node(K::Sub, p, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      skip();
      std::size_t p = i_;
      if (eat('*')) e = node(K::Mul, p, e, unary());
      else if (eat('/')) e = node(K::Div, p, e, unary());
      else return e;
    }
  }

  Expr unary() {
    skip();
    std::size_t p = i_;
    if (eat('-')) return node(K::Neg, p, unary());
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip();
    std::size_t p = i_;
    if (!eat('^')) return base;
    long n = exponent();
    if (n < 0 && domain_ == Domain::N) throw ParseError(p, "negative exponent");
    auto r = node(K::Pow, p, base);
    r->exponent = n;
    return r;
  }

  long exponent() {
    skip();
    bool paren = eat('(');
    bool neg = eat('-');
    skip();
    std::size_t p = i_;
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
      throw ParseError(p, "expected integer exponent");
    long n = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      n = n * 10 + (s_[i_++] - '0');
      if (n > 1000000) throw ParseError(p, "exponent too large");
    }
    if (paren && !eat(')')) throw ParseError(i_, "expected ')'");
    return neg ? -n : n;
  }

  Expr primary() {
    skip();
    std::size_t p = i_;
    if (i_ >= s_.size()) throw ParseError(p, "unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr e = expr();
      if (!eat(')')) throw ParseError(i_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      auto n = node(K::Number, p);
      n->value = BigRat(BigInt(s_.substr(b, i_ - b)));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string name = s_.substr(b, i_ - b);
      if (!known(name)) throw ParseError(p, "undeclared symbol '" + name + "'");
      auto n = node(K::Symbol, p);
      n->name = name;
      return n;
    }
    throw ParseError(p, std::string("unexpected '") + c + "'");
  }

  bool known(const std::string& name) const {
    if (name == "q") return true;
    if (domain_ == Domain::N && (name == "E" || name == "qn")) return true;
    if (domain_ == Domain::K && (name == "S" || name == "qk")) return true;
    for (const auto& p : params_)
      if (p == name) return true;
    return false;
  }

  const std::string& s_;
  Domain domain_;
  const std::vector<std::string>& params_;
  std::size_t i_ = 0;
};

int precedence(const Expr& e) {
  switch (e->kind) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg: return 3;
    case K::Pow: return 4;
    default: return 5;
  }
}

std::string wrapped(const Expr& e, int minPrec) {
  std::string s = exprString(e);
  return precedence(e) < minPrec ? "(" + s + ")" : s;
}

bool isScalar(const OreOp& L) { return L.isZero() || (L.minExp() == 0 && L.maxExp() == 0); }

}  // namespace

Expr parseExpr(const std::string& src, Domain domain, const std::vector<std::string>& params) {
  return Parser(src, domain, params).run();
}

std::string exprString(const Expr& e) {
  switch (e->kind) {
    case K::Number: return e->value.get_str();
    case K::Symbol: return e->name;
    case K::Add: return exprString(e->lhs) + " + " + wrapped(e->rhs, 2);
    case K::Sub: return exprString(e->lhs) + " - " + wrapped(e->rhs, 2);
    case K::Mul: return wrapped(e->lhs, 2) + "*" + wrapped(e->rhs, 3);
    case K::Div: return wrapped(e->lhs, 2) + "/" + wrapped(e->rhs, 3);
    case K::Neg: return "-" + wrapped(e->lhs, 3);
    case K::Pow: {
      std::string x = e->exponent < 0 ? "(" + std::to_string(e->exponent) + ")" : std::to_string(e->exponent);
      return wrapped(e->lhs, 5) + "^" + x;
    }
  }
  return {};
}

Expr exprNumber(const BigRat& v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = K::Number;
  n->value = v;
  return n;
}

Expr exprSymbol(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = K::Symbol;
  n->name = name;
  return n;
}

Expr exprBinary(ExprNode::Kind kind, Expr a, Expr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

Expr exprPow(Expr a, long e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = K::Pow;
  n->lhs = std::move(a);
  n->exponent = e;
  return n;
}

OreOp evalOperator(const Expr& e, const VarTablePtr& vars, const std::string& S) {
  switch (e->kind) {
    case K::Number: return OreOp::scalar(RatFn::constant(vars, e->value));
    case K::Symbol: {
      if (e->name == S) return OreOp::shift(vars, 1);
      if (e->name == vars->shiftName()) return OreOp::scalar(RatFn::shiftVar(vars));
      auto slot = vars->indexOf(e->name);
      if (!slot) throw ParseError(e->pos, "symbol '" + e->name + "' not in variable table");
      return OreOp::scalar(RatFn::var(vars, *slot));
    }
    case K::Add: return evalOperator(e->lhs, vars, S) + evalOperator(e->rhs, vars, S);
    case K::Sub: return evalOperator(e->lhs, vars, S) - evalOperator(e->rhs, vars, S);
    case K::Mul: return evalOperator(e->lhs, vars, S) * evalOperator(e->rhs, vars, S);
    case K::Neg: return -evalOperator(e->lhs, vars, S);
    case K::Div: {
      OreOp d = evalOperator(e->rhs, vars, S);
      if (!isScalar(d)) throw ParseError(e->pos, "division by a non-scalar operator");
      if (d.isZero()) throw Error(ErrorCode::DivisionByZero, "division by zero in expression");
      return evalOperator(e->lhs, vars, S) * OreOp::scalar(d.coeff(0).inverse());
    }
    case K::Pow: {
      OreOp b = evalOperator(e->lhs, vars, S);
      long n = e->exponent;
      if (n < 0) {
        if (isScalar(b)) {
          if (b.isZero()) throw Error(ErrorCode::DivisionByZero, "zero to a negative power");
          b = OreOp::scalar(b.coeff(0).inverse());
        } else if (b.coeffs().size() == 1 && b.leading().isOne()) {
          b = OreOp::shift(vars, -b.maxExp());
        } else {
          throw ParseError(e->pos, "negative power of a non-invertible operator");
        }
        n = -n;
      }
      OreOp r = OreOp::scalar(RatFn::constant(vars, 1));
      for (long i = 0; i < n; ++i) r = r * b;
      return r;
    }
  }
  throw ParseError(e->pos, "bad expression node");
}

OreOp parseOreOp(const std::string& src, const VarTablePtr& vars, const std::string& S) {
  Domain d = S == "E" ? Domain::N : Domain::K;
  return evalOperator(parseExpr(src, d, vars->params()), vars, S);
}

RatFn parseRatFn(const std::string& src, const VarTablePtr& vars) {
  VarTablePtr ops = vars->hasShift() ? vars : vars->withShift("qk", ShiftKind::geometric(1));
  OreOp L = evalOperator(parseExpr(src, Domain::K, vars->params()), ops, "S");
  if (!isScalar(L)) throw ParseError(0, "expected a scalar, found an operator");
  return L.coeff(0).retag(vars);
}

// ---------------------------------------------------------------------------

namespace {

std::string indexPower(long vexp, long qexp, const std::string& idx) {
  if (vexp == 0) {
    if (qexp == 0) return "";
    if (qexp == 1) return "q";
    return qexp < 0 ? "q^(" + std::to_string(qexp) + ")" : "q^" + std::to_string(qexp);
  }
  std::string s = vexp == 1 ? idx : vexp == -1 ? "-" + idx : std::to_string(vexp) + idx;
  if (qexp > 0) s += "+" + std::to_string(qexp);
  if (qexp < 0) s += std::to_string(qexp);
  if (vexp == 1 && qexp == 0) return "q^" + s;
  return "q^(" + s + ")";
}

// Terms of num / monomial den, with possibly negative exponents.
std::string laurentString(const MPoly& num, const Monomial& den, const VarTablePtr& vars, const std::string& idx) {
  if (num.isZero()) return "0";
  bool geo = vars->hasShift() && vars->shiftKind().isGeometric();
  long e = geo ? vars->shiftKind().e : 0;
  std::size_t vs = vars->hasShift() ? vars->shiftSlot() : kMaxVars;
  std::ostringstream os;
  bool first = true;
  for (const auto& t : num.terms()) {
    BigRat c = t.c;
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (c < 0) c = -c;
    first = false;
    std::vector<std::string> f;
    for (std::size_t s = 1; s < vars->arity(); ++s) {
      if (s == vs) continue;
      long x = static_cast<long>(t.m.e[s]) - static_cast<long>(den.e[s]);
      if (x == 0) continue;
      f.push_back(vars->name(s) + (x == 1 ? "" : x < 0 ? "^(" + std::to_string(x) + ")" : "^" + std::to_string(x)));
    }
    long qx = static_cast<long>(t.m.e[0]) - static_cast<long>(den.e[0]);
    long vx = vs < kMaxVars ? static_cast<long>(t.m.e[vs]) - static_cast<long>(den.e[vs]) : 0;
    if (geo) {
      std::string p = indexPower(vx * e, qx, idx);
      if (!p.empty()) f.push_back(p);
    } else {
      std::string p = indexPower(0, qx, idx);
      if (!p.empty()) f.push_back(p);
      if (vx != 0) f.push_back(idx + (vx == 1 ? "" : "^" + std::to_string(vx)));
    }
    if (c != 1 || f.empty()) f.insert(f.begin(), c.get_str());
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "*" : "") << f[i];
  }
  return os.str();
}

}  // namespace

std::string displayRatFn(const RatFn& f, const std::string& idx) {
  const VarTablePtr& vars = f.vars();
  if (f.den().isMonomial()) {
    const auto& d = f.den().lead();
    MPoly n = f.num().scaled(1 / d.c);
    return laurentString(n, d.m, vars, idx);
  }
  std::string n = laurentString(f.num(), Monomial::unit(), vars, idx);
  std::string d = laurentString(f.den(), Monomial::unit(), vars, idx);
  return (f.num().size() > 1 ? "(" + n + ")" : n) + "/(" + d + ")";
}

std::string displayOp(const OreOp& L, const std::string& S, const std::string& idx, bool ascending) {
  if (L.isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  std::vector<std::pair<int, RatFn>> cs(L.coeffs().begin(), L.coeffs().end());
  if (!ascending) std::reverse(cs.begin(), cs.end());
  for (auto it = cs.begin(); it != cs.end(); ++it) {
    int i = it->first;
    std::string sh = i == 0 ? "" : i == 1 ? S : i > 1 ? S + "^" + std::to_string(i) : S + "^(" + std::to_string(i) + ")";
    RatFn c = it->second;
    bool single = c.num().isMonomial() && c.den().isMonomial();
    std::string body = displayRatFn(c, idx);
    // a leading minus reads better pulled out of the group
    bool neg = body[0] == '-' && (single || (!first && c.den().isMonomial()));
    if (neg) {
      c = -c;
      body = displayRatFn(c, idx);
    }
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    if (c.isOne() && !sh.empty()) os << sh;
    else if (sh.empty()) os << (single || os.tellp() == 0 ? body : "(" + body + ")");
    else os << (single ? body : "(" + body + ")") << "*" << sh;
  }
  return os.str();
}

}  // namespace qfb
