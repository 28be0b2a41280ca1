#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qfb/ore.hpp"

namespace qfb {

// Operator expressions. The n-domain uses atoms E and qn, the k-domain S and qk;
// both share q, declared parameters and integer literals.
enum class Domain { N, K };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Symbol, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Number;
  BigRat value;       // Number
  std::string name;   // Symbol
  Expr lhs, rhs;      // binary nodes; Neg and Pow use lhs
  long exponent = 0;  // Pow
  std::size_t pos = 0;
};

using OperatorExpr = Expr;

Expr parseExpr(const std::string& src, Domain domain, const std::vector<std::string>& params);
inline OperatorExpr parseOperator(const std::string& src, const std::vector<std::string>& params) {
  return parseExpr(src, Domain::N, params);
}
std::string exprString(const Expr& e);

// Build helpers for programmatic expressions.
Expr exprNumber(const BigRat& v);
Expr exprSymbol(const std::string& name);
Expr exprBinary(ExprNode::Kind kind, Expr a, Expr b);
Expr exprPow(Expr a, long n);

// Direct evaluation as an operator over `vars`; `shiftSymbol` names the shift
// (E or S) and vars->shiftName() the shift variable (qn or qk).
OreOp evalOperator(const Expr& e, const VarTablePtr& vars, const std::string& shiftSymbol);
OreOp parseOreOp(const std::string& src, const VarTablePtr& vars, const std::string& shiftSymbol = "S");
RatFn parseRatFn(const std::string& src, const VarTablePtr& vars);

// Display forms in index notation: q^(2k+4) for q^4*qk^2.
std::string displayRatFn(const RatFn& f, const std::string& index = "k");
// Terms in decreasing shift order, or increasing when `ascending`.
std::string displayOp(const OreOp& L, const std::string& shiftSymbol = "S", const std::string& index = "k",
                      bool ascending = false);

}  // namespace qfb
