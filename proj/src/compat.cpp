#include "qfb/compat.hpp"

#include <algorithm>
#include <functional>

#include "qfb/error.hpp"

namespace qfb {

namespace {

long floorDiv(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
long mod(long a, long b) { return a - b * floorDiv(a, b); }

// f at global index m t + r + off, as a function of m.
RatFn famAt(const std::vector<RatFn>& fam, long r, long off) {
  long t = static_cast<long>(fam.size());
  return substituteShift(fam[mod(r + off, t)], floorDiv(r + off, t));
}

using Poly = std::vector<RatFn>;  // ascending coefficients in Y

Poly mulLinear(const Poly& p, const RatFn& root) {
  Poly out(p.size() + 1, RatFn(root.vars()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    out[i] -= p[i] * root;
  }
  return out;
}

// Divide by (Y - x); returns the value at x and leaves the quotient in p.
RatFn syntheticDivide(Poly& p, const RatFn& x) {
  std::size_t d = p.size() - 1;
  Poly q(d, RatFn(x.vars()));
  RatFn acc = p[d];
  for (std::size_t i = d; i-- > 0;) {
    q[i] = acc;
    acc = p[i] + x * acc;
  }
  p = std::move(q);
  return acc;
}

struct Matching {
  std::vector<int> delta;
  int maxDelta = 0;
};

std::optional<Matching> matchRoots(const FactorialBasis& basis, int cap) {
  int t = basis.sections();
  std::vector<RatFn> rho, tau;
  VarTablePtr m = basis.mvars();
  RatFn gamma = basis.beta().gamma.retag(m), nu = basis.beta().nu.retag(m);
  for (int r = 0; r < t; ++r) {
    rho.push_back(basis.root(r));
    tau.push_back((rho.back() - nu) / gamma);
  }
  std::vector<std::vector<int>> cand(t);
  for (int s = 0; s < t; ++s)
    for (int d = 0; d <= cap; ++d)
      if (tau[s] == famAt(rho, s, -d)) cand[s].push_back(d);
  for (const auto& c : cand)
    if (c.empty()) return std::nullopt;
  std::optional<Matching> best;
  int bestSum = 0;
  std::vector<int> pick(t, 0);
  std::function<void(int)> go = [&](int s) {
    if (s == t) {
      std::vector<bool> hit(t, false);
      int mx = 0, sum = 0;
      for (int r = 0; r < t; ++r) {
        long img = mod(r - pick[r], t);
        if (hit[img]) return;
        hit[img] = true;
        mx = std::max(mx, pick[r]);
        sum += pick[r];
      }
      if (!best || mx < best->maxDelta || (mx == best->maxDelta && sum < bestSum)) {
        best = Matching{pick, mx};
        bestSum = sum;
      }
      return;
    }
    for (int d : cand[s]) {
      pick[s] = d;
      go(s + 1);
    }
  };
  go(0);
  return best;
}

Compatibility shiftTable(const FactorialBasis& basis, const Matching& mt, int A) {
  int t = basis.sections();
  VarTablePtr m = basis.mvars();
  RatFn gamma = basis.beta().gamma.retag(m), nu = basis.beta().nu.retag(m);
  std::vector<RatFn> rho, tau;
  for (int r = 0; r < t; ++r) {
    rho.push_back(basis.root(r));
    tau.push_back((rho.back() - nu) / gamma);
  }
  const auto& a = basis.a();
  Compatibility c{A, 0, t, m, {}};
  RatFn one = RatFn::constant(m, 1);
  // roots tau(j) with j - delta(j) < 0 never meet a basis root
  std::vector<RatFn> small;
  for (long j = 0; j < mt.maxDelta; ++j) {
    int s = static_cast<int>(j % t);
    if (j - mt.delta[s] < 0) small.push_back(evalAtPower(tau[s], j / t).retag(m));
  }
  for (int r = 0; r < t; ++r) {
    RatFn K = one;
    if (basis.beta().isGeometric()) {
      long g = basis.beta().exponent();
      K = RatFn::qPow(m, g * r) * RatFn::shiftVar(m).pow(g * t);
    }
    for (int l = 1; l <= A; ++l) K *= famAt(a, r, -l);
    Poly R{K};
    for (const auto& x : small) R = mulLinear(R, x);
    for (int s = 1; s <= A; ++s) {
      int res = static_cast<int>(mod(r - s, t));
      if (s <= A - mt.delta[res]) R = mulLinear(R, famAt(tau, r, -s));
    }
    if (static_cast<int>(R.size()) != A + 1)
      throw Error(ErrorCode::NotCompatible, "root count mismatch in shift compatibility");
    std::vector<RatFn> row;
    RatFn scale = one;
    for (int i = 0; i < A; ++i) {
      row.push_back(syntheticDivide(R, famAt(rho, r, -A + i)) / scale);
      scale *= famAt(a, r, -A + i);
    }
    row.push_back(R[0] / scale);
    c.alpha.push_back(std::move(row));
  }
  return c;
}

}  // namespace

RatFn Compatibility::at(int r, int i) const {
  if (i < -A || i > B) return RatFn(mvars);
  return alpha.at(r).at(i + A);
}

RatFn Compatibility::valueAt(long k, int i) const { return evalAtPower(at(static_cast<int>(k % t), i), k / t); }

VarTablePtr nTable(const std::vector<std::string>& params, bool geometric) {
  if (geometric) return VarTable::make(params, "qn", ShiftKind::geometric(1));
  return VarTable::make(params, "n", ShiftKind::arithmetic());
}

Compatibility compatMulBeta(const FactorialBasis& basis) {
  Compatibility c{0, 1, basis.sections(), basis.mvars(), {}};
  for (int r = 0; r < basis.sections(); ++r) {
    RatFn ia = basis.a()[r].inverse();
    c.alpha.push_back({-basis.b()[r] * ia, ia});
  }
  return c;
}

Compatibility compatShift(const FactorialBasis& basis, std::optional<int> A, int cap) {
  if (!basis.prefactors().empty())
    throw Error(ErrorCode::NotCompatible, basis.label() + " carries a prefactor; shift compatibility unavailable");
  auto mt = matchRoots(basis, A ? std::max(*A, 0) : cap);
  if (!mt) throw Error(ErrorCode::NotCompatible, "shifted roots of " + basis.label() + " are not basis roots");
  if (A && *A < mt->maxDelta)
    throw Error(ErrorCode::NotCompatible, "shift needs A >= " + std::to_string(mt->maxDelta));
  int lo = A ? *A : mt->maxDelta, hi = A ? *A : cap;
  std::string why;
  for (int a = lo; a <= hi; ++a) {
    Compatibility c = shiftTable(basis, *mt, a);
    CompatReport rep = compatVerify(basis, Atom::Shift, c, 25);
    if (rep.ok) return c;
    why = rep.detail;
  }
  throw Error(ErrorCode::NotCompatible, "no verified shift compatibility for " + basis.label() + ": " + why);
}

OreOp atomOperator(const FactorialBasis& basis, Atom atom) {
  VarTablePtr n = nTable(basis.base()->params(), basis.beta().isGeometric());
  if (atom == Atom::Shift) return OreOp::shift(n, 1);
  if (basis.beta().isGeometric()) return OreOp::scalar(RatFn::shiftVar(n).pow(basis.beta().exponent()));
  return OreOp::scalar(RatFn::shiftVar(n));
}

CompatReport compatVerify(const FactorialBasis& basis, Atom atom, const Compatibility& comp, long kMax) {
  return compatVerify(basis, atomOperator(basis, atom), comp, kMax);
}

CompatReport compatVerify(const FactorialBasis& basis, const OreOp& Ln, const Compatibility& comp, long kMax) {
  CompatReport rep;
  if (comp.t != basis.sections() && comp.t % basis.sections() != 0) {
    rep.ok = false;
    rep.detail = "section count does not refine the basis";
    return rep;
  }
  VarTablePtr base = basis.base();
  for (long k = 0; k <= kMax; ++k) {
    std::vector<std::pair<long, RatFn>> rhs;
    for (int i = -comp.A; i <= comp.B; ++i) {
      if (k + i < 0) continue;
      RatFn c = comp.at(static_cast<int>(k % comp.t), i);
      if (c.isZero()) continue;
      try {
        rhs.emplace_back(k + i, evalAtPower(c, k / comp.t));
      } catch (const SingularEvaluation&) {
        rep = {false, k, -1, "coefficient alpha_" + std::to_string(i) + " singular at k = " + std::to_string(k)};
        return rep;
      }
    }
    long nMax = k + comp.A + comp.B + 2;
    for (long n = 0; n <= nMax; ++n) {
      RatFn lhs(base), r(base);
      for (const auto& [i, c] : Ln.coeffs()) lhs += evalAtPower(c, n).retag(base) * basis.element(k, n + i);
      for (const auto& [j, c] : rhs) r += c * basis.element(j, n);
      if (lhs != r) {
        rep = {false, k, n, "identity fails at k = " + std::to_string(k) + ", n = " + std::to_string(n)};
        return rep;
      }
    }
  }
  return rep;
}

Compatibility sectionRefine(const Compatibility& comp, int lambda) {
  if (lambda < 1) throw Error(ErrorCode::InvalidArgument, "refinement factor must be positive");
  if (lambda == 1) return comp;
  Compatibility c{comp.A, comp.B, comp.t * lambda, comp.mvars, {}};
  for (int rp = 0; rp < c.t; ++rp) {
    int r = rp % comp.t, off = rp / comp.t;
    std::vector<RatFn> row;
    for (const auto& x : comp.alpha[r]) row.push_back(reindex(x, lambda, off));
    c.alpha.push_back(std::move(row));
  }
  return c;
}

OreOp recOperator(const Compatibility& comp) {
  if (comp.t != 1) throw Error(ErrorCode::InvalidArgument, "recOperator needs one section; use recMatrix");
  return recMatrix(comp).at(0, 0);
}

OreMat recMatrix(const Compatibility& comp) {
  int t = comp.t;
  OreMat M(t, comp.mvars);
  for (int r = 0; r < t; ++r)
    for (int i = -comp.A; i <= comp.B; ++i) {
      RatFn c = comp.at(r, i);
      if (c.isZero()) continue;
      int j = static_cast<int>(mod(i + r, t));
      int d = static_cast<int>(floorDiv(j - r - i, t));
      M.at(j, r) += OreOp::term(substituteShift(c, d), d);
    }
  return M;
}

BasisCompat atomCompat(const FactorialBasis& basis) { return {compatShift(basis), compatMulBeta(basis)}; }

namespace {

OreMat refinedMatrix(const Compatibility& c, int sections) {
  if (sections % c.t != 0)
    throw Error(ErrorCode::InvalidArgument, "sections must be a multiple of the basis section count");
  return recMatrix(sectionRefine(c, sections / c.t));
}

bool hasAtom(const Expr& e) {
  if (!e) return false;
  if (e->kind == ExprNode::Kind::Symbol) return e->name == "E" || e->name == "qn";
  return hasAtom(e->lhs) || hasAtom(e->rhs);
}

OreMat matPow(OreMat b, long n, int t, const VarTablePtr& m) {
  OreMat r = OreMat::identity(t, m);
  for (long i = 0; i < n; ++i) r = r * b;
  return r;
}

struct Compiler {
  const FactorialBasis& basis;
  int t;
  OreMat E, X;  // images of E and of beta
  VarTablePtr m;

  OreMat scalar(const Expr& e) {
    OreOp s = evalOperator(e, m, "S");
    return OreMat::scalar(t, s.coeff(0));
  }

  OreMat betaPower(long j, std::size_t pos) {
    long g = basis.beta().isGeometric() ? basis.beta().exponent() : 1;
    if (j % g != 0)
      throw Error(ErrorCode::NotCompatible, "qn^" + std::to_string(j) + " at position " + std::to_string(pos) +
                                                " is not a power of beta(n) = q^(" + std::to_string(g) + "n)");
    return matPow(X, j / g, t, m);
  }

  OreMat run(const Expr& e) {
    using K = ExprNode::Kind;
    if (!hasAtom(e)) return scalar(e);
    switch (e->kind) {
      case K::Symbol: return e->name == "E" ? E : betaPower(1, e->pos);
      case K::Add: return run(e->lhs) + run(e->rhs);
      case K::Sub: return run(e->lhs) - run(e->rhs);
      case K::Mul: return run(e->lhs) * run(e->rhs);
      case K::Neg: return -run(e->lhs);
      case K::Div: {
        if (hasAtom(e->rhs)) throw Error(ErrorCode::InvalidArgument, "division by an operator");
        OreOp d = evalOperator(e->rhs, m, "S");
        if (d.isZero()) throw Error(ErrorCode::DivisionByZero, "division by zero in expression");
        return run(e->lhs) * OreMat::scalar(t, d.coeff(0).inverse());
      }
      case K::Pow: {
        if (e->exponent < 0) throw Error(ErrorCode::InvalidArgument, "negative power of an operator");
        if (e->lhs->kind == K::Symbol && e->lhs->name == "qn") return betaPower(e->exponent, e->pos);
        return matPow(run(e->lhs), e->exponent, t, m);
      }
      default: break;
    }
    throw Error(ErrorCode::InvalidArgument, "bad expression");
  }
};

}  // namespace

OreMat compileExpr(const FactorialBasis& basis, const BasisCompat& comps, const OperatorExpr& expr, int sections) {
  if (!basis.beta().isGeometric())
    throw Error(ErrorCode::InvalidArgument, "expression compilation needs a q-geometric beta");
  Compiler c{basis, sections, refinedMatrix(comps.shift, sections), refinedMatrix(comps.mulBeta, sections),
             basis.mvars()};
  return c.run(expr);
}

OreMat compileExpr(const FactorialBasis& basis, const OperatorExpr& expr, int sections) {
  return compileExpr(basis, atomCompat(basis), expr, sections);
}

OreOp compileScalar(const FactorialBasis& basis, const OperatorExpr& expr) {
  if (basis.sections() != 1) throw Error(ErrorCode::InvalidArgument, "basis has several sections");
  return compileExpr(basis, expr, 1).at(0, 0);
}

OreMat compileNormalForm(const FactorialBasis& basis, const BasisCompat& comps, const OreOp& Ln, int sections) {
  VarTablePtr m = basis.mvars();
  OreMat E = refinedMatrix(comps.shift, sections), X = refinedMatrix(comps.mulBeta, sections);
  long g = basis.beta().isGeometric() ? basis.beta().exponent() : 1;
  std::size_t vs = Ln.vars()->shiftSlot();
  OreMat out(sections, m);
  if (Ln.isZero()) return out;
  if (Ln.minExp() < 0) throw Error(ErrorCode::InvalidArgument, "normal form with negative powers of E");
  std::vector<OreMat> Xp{OreMat::identity(sections, m)}, Ep{OreMat::identity(sections, m)};
  for (const auto& [i, c] : Ln.coeffs()) {
    if (!c.isPolynomial()) throw Error(ErrorCode::InvalidArgument, "coefficient is not polynomial in qn");
    auto parts = (c.num().scaled(1 / c.den().constantValue())).split(vs);
    OreMat coeff(sections, m);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (parts[j].isZero()) continue;
      if (static_cast<long>(j) % g != 0) throw Error(ErrorCode::NotCompatible, "qn power is not a power of beta");
      std::size_t p = j / g;
      while (Xp.size() <= p) Xp.push_back(Xp.back() * X);
      coeff = coeff + OreMat::scalar(sections, RatFn(parts[j].retag(m))) * Xp[p];
    }
    while (Ep.size() <= static_cast<std::size_t>(i)) Ep.push_back(Ep.back() * E);
    out = out + coeff * Ep[i];
  }
  return out;
}

}  // namespace qfb
