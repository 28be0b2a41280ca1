#include "qfb/solver.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qfb/error.hpp"
#include "qfb/linalg.hpp"
#include "qfb/modp.hpp"
#include "qfb/qseries.hpp"

namespace qfb {

// ---------------------------------------------------------------------------
// SeqGen

SeqGen::SeqGen(OreOp annihilator, std::vector<RatFn> initials, long offset)
    : op_(annihilator.isZero() ? annihilator : annihilator.normalized()),
      initials_(std::move(initials)),
      offset_(offset) {
  if (op_.isZero()) throw Error(ErrorCode::InvalidArgument, "zero annihilator");
  if (op_.order() == 0) throw Error(ErrorCode::InvalidArgument, "annihilator of order 0 defines no sequence");
  VarTablePtr base = op_.vars()->base();
  for (auto& x : initials_) x = x.retag(base);
  singular_ = qfb::singularIndices(op_, offset_);
}

const std::vector<RatFn>& SeqGen::unroll(long count) const {
  VarTablePtr base = op_.vars()->base();
  int d = op_.order();
  const RatFn& lead = op_.leading();
  while (static_cast<long>(cache_.size()) < count) {
    long j = static_cast<long>(cache_.size());
    long idx = offset_ + j;
    if (j < static_cast<long>(initials_.size())) {
      cache_.push_back(initials_[j]);
      continue;
    }
    long k = idx - d;
    if (k < offset_)
      throw Error(ErrorCode::InsufficientData,
                  "need " + std::to_string(d) + " initial values, got " + std::to_string(initials_.size()));
    if (std::binary_search(singular_.begin(), singular_.end(), k))
      throw SingularEvaluation(idx, "missing initial value at singular index " + std::to_string(idx));
    RatFn acc(base);
    for (const auto& [i, c] : op_.coeffs()) {
      if (i == d) continue;
      const RatFn& t = cache_[static_cast<std::size_t>(k + i - offset_)];
      if (!t.isZero()) acc += evalAtPower(c, k) * t;
    }
    cache_.push_back(-acc / evalAtPower(lead, k));
  }
  return cache_;
}

IndexedSeq SeqGen::seq(long count) const {
  const auto& v = unroll(count);
  return {offset_, std::vector<RatFn>(v.begin(), v.begin() + count)};
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

std::vector<long> sectionLeads(const FactorialBasis& basis, int t, int r, long count) {
  std::vector<long> leads;
  for (long j = 0; j < count; ++j) {
    long k = j * t + r;
    auto n = basis.leadingIndex(k, 2 * k + 8);
    if (!n) throw Error(ErrorCode::InvalidArgument, "element " + std::to_string(k) + " has no leading index");
    if (!leads.empty() && *n <= leads.back())
      throw Error(ErrorCode::InvalidArgument,
                  "basis section is not triangular at element " + std::to_string(k) + " of " + basis.label());
    leads.push_back(*n);
  }
  return leads;
}

void requireSection(int t, int r) {
  if (t < 1 || r < 0 || r >= t) throw Error(ErrorCode::InvalidArgument, "section index out of range");
}

}  // namespace

long requiredValues(const FactorialBasis& basis, int sections, int section, long count) {
  requireSection(sections, section);
  if (count <= 0) return 0;
  return sectionLeads(basis, sections, section, count).back() + 1;
}

SectionFit fitSection(const std::vector<RatFn>& y, const FactorialBasis& basis, int t, int r, long count) {
  requireSection(t, r);
  VarTablePtr base = basis.base();
  auto leads = sectionLeads(basis, t, r, count + 1);
  long need = count > 0 ? leads[count - 1] + 1 : 0;
  if (static_cast<long>(y.size()) < need)
    throw Error(ErrorCode::InsufficientData, "expansion needs " + std::to_string(need) + " values of y, got " +
                                                 std::to_string(y.size()));
  SectionFit fit;
  auto value = [&](long n, long upto) {
    RatFn acc(base);
    for (long j = 0; j < upto; ++j)
      if (!fit.coeffs[j].isZero()) acc += fit.coeffs[j] * basis.element(j * t + r, n);
    return acc;
  };
  for (long j = 0; j < count; ++j) {
    long n = leads[j];
    RatFn rest = y[n].retag(base) - value(n, j);
    fit.coeffs.push_back(rest / basis.element(j * t + r, n));
  }
  // every n below the next unused leading index is fully determined
  long limit = std::min<long>(static_cast<long>(y.size()), leads[count]);
  std::set<long> used(leads.begin(), leads.begin() + count);
  for (long n = 0; n < limit; ++n) {
    if (used.count(n)) continue;
    ++fit.checked;
    if (value(n, count) != y[n].retag(base)) {
      fit.consistent = false;
      fit.witnessN = n;
      break;
    }
  }
  return fit;
}

std::vector<RatFn> expandInBasis(const std::vector<RatFn>& y, const FactorialBasis& basis, long count) {
  auto fit = fitSection(y, basis, 1, 0, count);
  if (!fit.consistent)
    throw Error(ErrorCode::Inconsistent, "values are not reproduced by the expansion at n = " +
                                             std::to_string(fit.witnessN));
  return fit.coeffs;
}

std::vector<RatFn> initialCoefficients(const std::vector<RatFn>& yInitials, const FactorialBasis& basis, long upTo,
                                       int sections, int section) {
  long need = requiredValues(basis, sections, section, upTo + 1);
  if (static_cast<long>(yInitials.size()) < need)
    throw Error(ErrorCode::InsufficientData, "initial coefficients up to " + std::to_string(upTo) + " need " +
                                                 std::to_string(need) + " values of y");
  auto fit = fitSection(yInitials, basis, sections, section, upTo + 1);
  if (!fit.consistent)
    throw Error(ErrorCode::Inconsistent, "initial values are inconsistent with section " + std::to_string(section) +
                                             " at n = " + std::to_string(fit.witnessN));
  return fit.coeffs;
}

// ---------------------------------------------------------------------------
// Transformation

OreOp isolatedSection(const OreMat& m, int section) {
  std::optional<OreOp> g;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const OreOp& e = m.at(j, static_cast<std::size_t>(section));
    if (e.isZero()) continue;
    g = g ? gcrd(*g, e.normalized()) : e.normalized();
  }
  if (!g) throw Error(ErrorCode::InvalidArgument, "section column is zero");
  return g->primitive();
}

namespace {

using Row = std::vector<OreOp>;

void normalizeRow(Row& row) {
  int lo = 0;
  bool any = false;
  for (const auto& e : row)
    if (!e.isZero()) {
      lo = any ? std::min(lo, e.minExp()) : e.minExp();
      any = true;
    }
  if (any && lo != 0)
    for (auto& e : row)
      if (!e.isZero()) e = e.leftShift(-lo);
}

}  // namespace

OreOp eliminateSections(const OreMat& m, int section, int maxOrder) {
  std::size_t t = m.size(), r = static_cast<std::size_t>(section);
  std::vector<Row> rows;
  for (std::size_t j = 0; j < t; ++j) {
    Row row;
    for (std::size_t s = 0; s < t; ++s) row.push_back(m.at(j, s));
    normalizeRow(row);
    rows.push_back(std::move(row));
  }
  for (std::size_t s = 0; s < t; ++s) {
    if (s == r) continue;
    std::optional<std::size_t> piv;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!rows[i][s].isZero() && (!piv || rows[i][s].order() < rows[*piv][s].order())) piv = i;
    if (!piv) continue;
    Row p = rows[*piv];
    rows.erase(rows.begin() + static_cast<long>(*piv));
    for (auto& row : rows) {
      if (row[s].isZero()) continue;
      Lclm l = lclm(p[s], row[s]);
      Row next;
      for (std::size_t c = 0; c < t; ++c) next.push_back(l.u * p[c] - l.w * row[c]);
      normalizeRow(next);
      for (const auto& e : next)
        if (!e.isZero() && e.order() > maxOrder)
          throw Error(ErrorCode::BudgetExceeded, "section elimination exceeds order " + std::to_string(maxOrder));
      row = std::move(next);
    }
  }
  std::optional<OreOp> g;
  for (const auto& row : rows) {
    if (row[r].isZero()) continue;
    g = g ? gcrd(*g, row[r].normalized()) : row[r].normalized();
  }
  if (!g) throw Error(ErrorCode::BudgetExceeded, "elimination leaves no equation for section " + std::to_string(r));
  return g->primitive();
}

TransformResult transformedAnnihilator(const OperatorExpr& expr, const FactorialBasis& basis, int sections,
                                       int section, const TransformOptions& opts) {
  requireSection(sections, section);
  if (sections % basis.sections() != 0)
    throw Error(ErrorCode::InvalidArgument, "sections must be a multiple of the basis section count");
  OreMat mat = compileExpr(basis, expr, sections);
  OreOp op(basis.mvars());
  SectionMode mode = sections == 1 ? SectionMode::Isolated : opts.mode;
  if (sections == 1) op = mat.at(0, 0).normalized().primitive();
  else if (mode == SectionMode::Isolated) op = isolatedSection(mat, section);
  else op = eliminateSections(mat, section, opts.maxOrder);
  TransformResult res{mat, op, mode, 0, true, -1, {}};
  if (opts.y.empty()) return res;

  std::vector<RatFn> coeffs;
  if (mode == SectionMode::Isolated) {
    long count = opts.checkTerms;
    while (count > 1 && requiredValues(basis, sections, section, count) > static_cast<long>(opts.y.size())) --count;
    auto fit = fitSection(opts.y, basis, sections, section, count);
    res.coefficients = fit.coeffs;
    if (!fit.consistent) {
      res.consistent = false;
      res.witnessN = fit.witnessN;
      return res;
    }
    coeffs = fit.coeffs;
  } else {
    long count = opts.checkTerms * sections;
    while (count > 1 && requiredValues(basis, 1, 0, count) > static_cast<long>(opts.y.size())) --count;
    auto all = expandInBasis(opts.y, basis, count);
    for (long k = section; k < count; k += sections) coeffs.push_back(all[k]);
    res.coefficients = coeffs;
  }
  if (static_cast<long>(coeffs.size()) > op.order()) {
    auto out = applyToSeq(op, IndexedSeq{0, coeffs});
    for (long k = out.begin(); k < out.end(); ++k) {
      ++res.oracleChecks;
      if (!out.at(k).isZero())
        throw Error(ErrorCode::InvalidArgument, "transformed operator disagrees with the expansion oracle at index " +
                                                    std::to_string(k));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Guessing

namespace {

// Index variable value v(k) as a polynomial on the base table.
RatFn indexValue(const VarTablePtr& vars, long k) { return evalAtPower(RatFn::shiftVar(vars), k); }

struct Candidate {
  OreOp op;
  std::size_t support;
  std::string key;
};

std::optional<OreOp> solveAt(const std::vector<RatFn>& terms, const VarTablePtr& vars, int d, int D, long rows,
                             std::mt19937_64& rng) {
  VarTablePtr base = vars->base();
  std::size_t cols = static_cast<std::size_t>((d + 1) * (D + 1));
  auto col = [D](int i, int j) { return static_cast<std::size_t>(i * (D + 1) + j); };
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto pt = modp::Point::random(base->arity(), rng);
    std::vector<std::uint64_t> tv(terms.size()), vv(static_cast<std::size_t>(rows));
    bool ok = true;
    for (std::size_t k = 0; k < terms.size() && ok; ++k) {
      auto x = modp::eval(terms[k], pt);
      if (!x) ok = false;
      else tv[k] = *x;
    }
    for (long k = 0; k < rows && ok; ++k) {
      auto x = modp::eval(indexValue(vars, k), pt);
      if (!x) ok = false;
      else vv[static_cast<std::size_t>(k)] = *x;
    }
    if (!ok) continue;
    modp::Matrix mm(static_cast<std::size_t>(rows), std::vector<std::uint64_t>(cols, 0));
    for (long k = 0; k < rows; ++k)
      for (int i = 0; i <= d; ++i) {
        std::uint64_t p = tv[static_cast<std::size_t>(k + i)];
        for (int j = 0; j <= D; ++j) {
          mm[static_cast<std::size_t>(k)][col(i, j)] = p;
          p = modp::mul(p, vv[static_cast<std::size_t>(k)]);
        }
      }
    // greedy choice of rows independent modulo p
    std::vector<long> pick;
    modp::Matrix acc;
    for (long k = 0; k < rows; ++k) {
      acc.push_back(mm[static_cast<std::size_t>(k)]);
      if (modp::rank(acc) == acc.size()) pick.push_back(k);
      else acc.pop_back();
      if (acc.size() == cols) break;
    }
    if (pick.size() == cols) return std::nullopt;
    RatMatrix ex;
    for (long k : pick) {
      std::vector<RatFn> row(cols, RatFn(base));
      RatFn v = indexValue(vars, k);
      for (int i = 0; i <= d; ++i) {
        RatFn p = terms[static_cast<std::size_t>(k + i)].retag(base);
        for (int j = 0; j <= D; ++j) {
          row[col(i, j)] = p;
          p = p * v;
        }
      }
      ex.push_back(std::move(row));
    }
    auto ns = nullspace(ex, cols, base);
    std::vector<Candidate> cands;
    IndexedSeq seq{0, std::vector<RatFn>(terms.begin(), terms.begin() + rows + d)};
    for (const auto& x : ns) {
      std::map<int, RatFn> cs;
      RatFn vsym = RatFn::shiftVar(vars);
      for (int i = 0; i <= d; ++i) {
        RatFn c(vars);
        for (int j = D; j >= 0; --j) c = c * vsym + x[col(i, j)].retag(vars);
        if (!c.isZero()) cs.emplace(i, c);
      }
      if (cs.empty()) continue;
      OreOp op = OreOp::fromCoeffs(vars, cs).primitive();
      auto out = applyToSeq(op, seq);
      bool zero = true;
      for (const auto& v : out.values)
        if (!v.isZero()) zero = false;
      if (!zero) continue;
      std::size_t support = 0;
      for (const auto& v : x)
        if (!v.isZero()) ++support;
      cands.push_back({op, support, op.str()});
    }
    if (cands.empty()) continue;
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.support != b.support ? a.support < b.support : a.key < b.key;
    });
    return cands.front().op;
  }
  return std::nullopt;
}

}  // namespace

std::optional<OreOp> guessMinimal(const std::vector<RatFn>& terms, const VarTablePtr& vars, const GuessConfig& cfg) {
  if (!vars->hasShift()) throw Error(ErrorCode::NoShiftVariable, "guessing needs an index variable");
  long use = static_cast<long>(terms.size());
  if (cfg.termsUsed > 0) use = std::min(use, cfg.termsUsed);
  std::vector<RatFn> ts(terms.begin(), terms.begin() + use);
  bool allZero = std::all_of(ts.begin(), ts.end(), [](const RatFn& x) { return x.isZero(); });
  if (allZero) return std::nullopt;
  std::mt19937_64 rng(0x51ed2701ULL);
  for (int d = 1; d <= cfg.maxOrder; ++d)
    for (int D = 0; D <= cfg.maxDegree; ++D) {
      long rows = use - d;
      long cols = (d + 1L) * (D + 1L);
      if (rows < cols + cfg.margin) break;
      if (auto op = solveAt(ts, vars, d, D, rows, rng)) return op;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Certification

Certificate certify(const OreOp& proven, const std::vector<RatFn>& provenInitials, const OreOp& guessed) {
  OreOp P = proven.normalized(), G = guessed.normalized();
  Certificate cert{P, G, lclm(P, G), 0, false, false, -1, {}};
  const Lclm& l = cert.witness;
  if (l.u * P != l.l || l.w * G != l.l) {
    cert.detail = "lclm identity failed";
    return cert;
  }
  SeqGen gen(P, provenInitials, 0);
  // beyond K every relation of P is enforced and w steps forward without division
  long K = static_cast<long>(provenInitials.size()) - P.order() - 1;
  auto bump = [&K](const std::vector<long>& xs) {
    for (long x : xs) K = std::max(K, x);
  };
  bump(gen.singularIndices());
  bump(singularIndices(l.w, 0));
  for (const auto& [i, c] : l.u.coeffs()) bump(zeroIndices(c.den(), 0));
  for (const auto& [i, c] : G.coeffs()) bump(zeroIndices(c.den(), 0));
  cert.leadingOK = true;
  long last = std::max(K, -1L) + l.w.order();  // s(0..last) must vanish
  long need = last + 1 + G.order();
  auto c = gen.seq(std::max<long>(need, G.order() + 1));
  auto s = applyToSeq(G, c);
  for (long k = 0; k <= last; ++k) {
    ++cert.residualChecks;
    if (!s.at(k).isZero()) {
      cert.witnessIndex = k + G.order();
      cert.detail = "guessed operator fails at index " + std::to_string(k);
      return cert;
    }
  }
  if (cert.residualChecks < l.w.order()) {
    cert.detail = "too few residual checks";
    return cert;
  }
  cert.valid = true;
  return cert;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

// p = c * prod (1 - x v^f) with x free of v, when such a split is found.
bool splitBinomials(MPoly p, std::size_t vs, RatFn& scale, std::vector<std::pair<RatFn, int>>& out) {
  const VarTablePtr& vars = p.vars();
  VarTablePtr base = vars->base();
  for (int guard = 0; guard < 64; ++guard) {
    auto parts = p.split(vs);
    if (parts.size() <= 1) {
      scale = scale * RatFn(p).retag(base);
      return true;
    }
    if (parts[0].isZero()) return false;
    RatFn p0 = RatFn(parts[0]);
    bool found = false;
    for (std::size_t f = 1; f < parts.size() && !found; ++f) {
      if (parts[f].isZero()) continue;
      std::vector<RatFn> cands{-RatFn(parts[f]) / p0};
      for (const auto& t : parts[f].terms()) cands.push_back(-RatFn(MPoly::monomial(vars, t.m, t.c)) / p0);
      for (const auto& x : cands) {
        MPoly bin = (RatFn::constant(vars, 1) - x * RatFn(MPoly::var(vars, vs, static_cast<std::uint32_t>(f)))).num();
        auto quo = p.divideExact(bin);
        if (!quo) continue;
        // bin is a primitive multiple of (1 - x v^f); keep the constant
        RatFn unit = RatFn(bin) / (RatFn::constant(vars, 1) - x * RatFn(MPoly::var(vars, vs, f)));
        scale = scale * unit.retag(base);
        out.emplace_back(x.retag(base), static_cast<int>(f));
        p = *quo;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return false;
}

std::string paren(const std::string& s) {
  bool plain = std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '^'; });
  return plain ? s : "(" + s + ")";
}

std::string linear(long a, long b, const std::string& k) {
  // a k + b
  std::ostringstream os;
  if (a == 1) os << k;
  else if (a == -1) os << "-" << k;
  else if (a != 0) os << a << k;
  if (b > 0 && a != 0) os << "+" << b;
  else if (b != 0) os << b;
  if (a == 0 && b == 0) os << 0;
  return os.str();
}

std::string exponentString(long quad2, long lin2, const std::string& k) {
  if (quad2 % 2 == 0 && lin2 % 2 == 0) {
    long A = quad2 / 2, B = lin2 / 2;
    if (A == 0) return linear(B, 0, k);
    long g = std::gcd(std::labs(A), std::labs(B));
    if (B != 0 && g > 1) return std::to_string(g) + k + "(" + linear(A / g, B / g, k) + ")";
    if (B != 0 && g == 1 && A == B) return linear(A, 0, k) + "(" + k + "+1)";
    std::ostringstream os;
    os << (A == 1 ? "" : A == -1 ? "-" : std::to_string(A)) << k << "^2";
    if (B > 0) os << "+" << linear(B, 0, k);
    else if (B < 0) os << linear(B, 0, k);
    return os.str();
  }
  std::ostringstream os;
  os << "(" << (quad2 == 1 ? "" : quad2 == -1 ? "-" : std::to_string(quad2)) << k << "^2";
  if (lin2 > 0) os << "+" << linear(lin2, 0, k);
  else if (lin2 < 0) os << linear(lin2, 0, k);
  os << ")/2";
  return os.str();
}

}  // namespace

ClosedForm firstOrderClosedForm(const OreOp& op0, const RatFn& initial) {
  if (op0.isZero() || op0.order() != 1) throw Error(ErrorCode::InvalidArgument, "closed forms need an order-1 operator");
  OreOp op = op0.normalized();
  const VarTablePtr& vars = op.vars();
  VarTablePtr base = vars->base();
  ClosedForm cf{initial.retag(base), -op.coeff(0) / op.coeff(1), false, RatFn::constant(base, 1), 0, 0, {}, {}};
  if (!vars->shiftKind().isGeometric()) {
    if (!cf.ratio.num().involves(vars->shiftSlot()) && !cf.ratio.den().involves(vars->shiftSlot())) {
      cf.alpha = cf.ratio.retag(base);
      cf.matched = true;
    }
    return cf;
  }
  std::size_t vs = vars->shiftSlot();
  long e = vars->shiftKind().e;
  MPoly n = cf.ratio.num(), d = cf.ratio.den();
  Monomial mn = n.gcdMonomial(), md = d.gcdMonomial();
  n = n.divMonomial(mn);
  d = d.divMonomial(md);
  long qExp = static_cast<long>(mn.e[0]) - static_cast<long>(md.e[0]);
  long vExp = static_cast<long>(mn.e[vs]) - static_cast<long>(md.e[vs]);
  Monomial pn = mn, pd = md;
  pn.e[0] = pn.e[vs] = 0;
  pd.e[0] = pd.e[vs] = 0;
  pn.recompute();
  pd.recompute();
  RatFn alpha = RatFn(MPoly::monomial(base, pn, 1)) / RatFn(MPoly::monomial(base, pd, 1));
  std::vector<std::pair<RatFn, int>> nb, db;
  RatFn sn = RatFn::constant(base, 1), sd = RatFn::constant(base, 1);
  if (!splitBinomials(n, vs, sn, nb) || !splitBinomials(d, vs, sd, db)) return cf;
  cf.alpha = alpha * sn / sd;
  // v^b at index j is q^{e b j}: sum_{j<k} (qExp + e vExp j) = qExp k + e vExp (k^2 - k)/2
  cf.quad2 = e * vExp;
  cf.lin2 = 2 * qExp - e * vExp;
  for (const auto& [x, f] : nb) cf.num.push_back({x, static_cast<int>(e * f)});
  for (const auto& [x, f] : db) cf.den.push_back({x, static_cast<int>(e * f)});
  cf.matched = true;
  // the pattern must reproduce the product
  RatFn prod = cf.initial;
  for (long k = 0; k <= 8; ++k) {
    if (cf.at(k) != prod) {
      cf.matched = false;
      break;
    }
    prod = prod * evalAtPower(cf.ratio, k);
  }
  return cf;
}

RatFn ClosedForm::at(long k) const {
  VarTablePtr base = initial.vars();
  if (!matched) {
    RatFn r = initial;
    for (long j = 0; j < k; ++j) r = r * evalAtPower(ratio, j);
    return r;
  }
  RatFn r = initial * alpha.pow(k);
  long ex2 = quad2 * k * k + lin2 * k;
  r = r * RatFn::qPow(base, ex2 / 2);
  for (const auto& p : num) r = r * qPochhammer(p.x, p.step, k);
  for (const auto& p : den) r = r / qPochhammer(p.x, p.step, k);
  return r;
}

std::string ClosedForm::str(const std::string& k) const {
  std::vector<std::string> parts;
  if (!initial.isOne()) parts.push_back(paren(initial.str()));
  if (!matched) {
    parts.push_back("prod_{j=0}^{" + k + "-1} " + paren(displayRatFn(ratio, "j")));
  } else {
    if (!alpha.isOne()) parts.push_back(paren(alpha.str()) + "^" + k);
    if (quad2 != 0 || lin2 != 0) parts.push_back("q^(" + exponentString(quad2, lin2, k) + ")");
    for (const auto& p : num)
      parts.push_back("(" + p.x.str() + ";" + (p.step == 1 ? std::string("q") : "q^" + std::to_string(p.step)) +
                      ")_" + k);
  }
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "*") + p;
  if (s.empty()) s = "1";
  if (matched && !den.empty()) {
    std::string dd;
    for (const auto& p : den)
      dd += (dd.empty() ? "" : "*") + ("(" + p.x.str() + ";" +
                                       (p.step == 1 ? std::string("q") : "q^" + std::to_string(p.step)) + ")_" + k);
    s += "/(" + dd + ")";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Identities

bool IdentityReport::allEqual() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.equal; });
}

long IdentityReport::firstFailure() const {
  for (const auto& c : checks)
    if (!c.equal) return c.index;
  return -1;
}

IdentityReport verifyIdentity(const std::function<RatFn(long)>& lhs, const std::function<RatFn(long)>& rhs, long upTo,
                              long from) {
  IdentityReport rep;
  for (long i = from; i <= upTo; ++i) rep.checks.push_back({i, lhs(i) == rhs(i)});
  return rep;
}

SeriesReport verifySeries(const SeriesSide& lhs, const MPoly& rhs, long order, long maxTerms) {
  if (!lhs.term || !lhs.lowerBound)
    throw Error(ErrorCode::InvalidArgument, "truncated comparison needs a valuation bound for every term");
  SeriesReport rep;
  rep.order = order;
  VarTablePtr vars = rhs.vars();
  MPoly sum(vars);
  long k = 0;
  for (; k < maxTerms; ++k) {
    long b = lhs.lowerBound(k);
    if (k > 0 && b < lhs.lowerBound(k - 1))
      throw Error(ErrorCode::InvalidArgument, "valuation bound must be nondecreasing");
    if (b > order) break;
    RatFn t = lhs.term(k).retag(vars);
    if (t.isZero()) continue;
    if (qValuation(t) < b) {
      rep.detail = "valuation bound violated at term " + std::to_string(k);
      rep.termsSummed = k;
      return rep;
    }
    sum = sum + seriesOf(t, order);
  }
  if (k == maxTerms) throw Error(ErrorCode::BudgetExceeded, "valuation bound does not pass the truncation order");
  rep.termsSummed = k;
  MPoly diff = truncate(sum, order) - truncate(rhs, order);
  if (diff.isZero()) {
    rep.equal = true;
    return rep;
  }
  long low = std::numeric_limits<long>::max();
  for (const auto& t : diff.terms()) low = std::min(low, static_cast<long>(t.m.e[0]));
  rep.firstMismatch = low;
  rep.detail = "series differ at q^" + std::to_string(low);
  return rep;
}

}  // namespace qfb
