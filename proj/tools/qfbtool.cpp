// qfbtool: command-line front end for the factorial basis toolkit.
//
//   qfbtool solve --operator "E^2 - E - q^2*qn" --basis "C(1,0;0;1)" --initials 1,1+q
//   qfbtool --corpus all
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error,
// 3 budget exceeded.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfb/compat.hpp"
#include "qfb/error.hpp"
#include "qfb/expr.hpp"
#include "qfb/qseries.hpp"
#include "qfb/solver.hpp"

#ifndef QFB_CORPUS_DIR
#define QFB_CORPUS_DIR "tools/corpus"
#endif

using namespace qfb;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct JobSpec {
  std::string command;
  std::string op;
  std::string basis;
  int sections = 1;
  int section = 0;
  std::vector<std::string> params;
  std::vector<std::string> initials;
  std::string mode = "isolated";
  int guessOrder = 4;
  int guessDegree = 8;
  long terms = 12;  // oracle coefficients checked against the transformed operator
  long seriesOrder = 0;
  long identityUpTo = 0;
  // verify: coefficient recurrence in the k-domain
  std::string coefficients;
  std::vector<std::string> coeffInitials;
};

struct JobResult {
  Json report;
  int exit = kPass;
};

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int exitFor(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::VarTableMismatch:
    case ErrorCode::NoShiftVariable:
    case ErrorCode::InsufficientData:
    case ErrorCode::SingularEvaluation:
      return kUsage;
    case ErrorCode::BudgetExceeded:
      return kBudget;
    default:
      return kFail;
  }
}

Json compatJson(const Compatibility& c) {
  Json j;
  j["A"] = c.A;
  j["B"] = c.B;
  j["t"] = c.t;
  Json rows = Json::array();
  for (int r = 0; r < c.t; ++r) {
    Json row = Json::array();
    for (int i = -c.A; i <= c.B; ++i) row.push_back(displayRatFn(c.at(r, i), "m"));
    rows.push_back(row);
  }
  j["alpha"] = rows;
  return j;
}

Json basisCompatJson(const FactorialBasis& basis, bool& ok) {
  auto comps = atomCompat(basis);
  Json j;
  j["E"] = compatJson(comps.shift);
  j["beta"] = compatJson(comps.mulBeta);
  bool v1 = compatVerify(basis, Atom::Shift, comps.shift).ok;
  bool v2 = compatVerify(basis, Atom::MulBeta, comps.mulBeta).ok;
  j["verified"] = v1 && v2;
  ok = ok && v1 && v2;
  return j;
}

std::string opString(const OreOp& L) { return L.isZero() ? "0" : displayOp(L, "S", "k", L.minExp() < 0); }

// n-domain values y(0..count-1) annihilated by the job operator.
std::vector<RatFn> nValues(const JobSpec& job, long count) {
  auto nt = nTable(job.params);
  std::vector<RatFn> init;
  for (const auto& s : job.initials) init.push_back(parseRatFn(s, nt->base()));
  if (init.empty()) throw Error(ErrorCode::InsufficientData, "--initials is required");
  OreOp L = evalOperator(parseOperator(job.op, job.params), nt, "E");
  if (L.order() == 0) throw Error(ErrorCode::InvalidArgument, "operator has no shift");
  SeqGen gen(L, init);
  return gen.unroll(std::max<long>(count, static_cast<long>(init.size())));
}

// Number of y values covering the first `count` section coefficients, with room
// for the consistency check.
long valuesFor(const FactorialBasis& basis, int t, int r, long count) { return requiredValues(basis, t, r, count + 1); }

Json identityJson(const IdentityReport& rep) {
  Json arr = Json::array();
  for (const auto& c : rep.checks) arr.push_back({{"index", c.index}, {"equal", c.equal}});
  return arr;
}

// y(n) = sum_j c_j B_{j t + r}(n) for n <= upTo.
IdentityReport expansionIdentity(const std::vector<RatFn>& y, const FactorialBasis& basis, int t, int r,
                                 const SeqGen& coeffs, long upTo) {
  long count = 0;
  while (true) {
    auto lead = basis.leadingIndex((count)*t + r, 2 * (count * t + r) + 8);
    if (!lead || *lead > upTo) break;
    ++count;
  }
  const auto& c = coeffs.unroll(std::max<long>(count, 1));
  VarTablePtr base = basis.base();
  auto rhs = [&](long n) {
    RatFn acc(base);
    for (long j = 0; j < count; ++j)
      if (!c[j].isZero()) acc += c[j].retag(base) * basis.element(j * t + r, n);
    return acc;
  };
  return verifyIdentity([&](long n) { return y[n].retag(base); }, rhs, upTo);
}

// Sum_j c_j lim_{n->oo} B_{jt+r}(n) as a q-series; terms are summed until the
// valuation passes the order for four consecutive terms.
Json seriesJson(const FactorialBasis& basis, int t, int r, const SeqGen& coeffs, long order) {
  VarTablePtr base = basis.base();
  MPoly acc(base);
  long quiet = 0, used = 0;
  for (long j = 0; quiet < 4; ++j) {
    if (j > 400) throw Error(ErrorCode::BudgetExceeded, "series terms do not pass the truncation order");
    long k = j * t + r;
    long n = k + order + 2;
    MPoly lim = seriesOf(basis.element(k, n), order);
    if (lim != seriesOf(basis.element(k, n + 1), order))
      throw Error(ErrorCode::InvalidArgument, "basis elements have no q-adic limit");
    RatFn c = coeffs.unroll(j + 1)[j].retag(base);
    ++used;
    if (c.isZero() || qValuation(c) > order) {
      ++quiet;
      continue;
    }
    quiet = 0;
    acc = truncate(acc + seriesMul(seriesOf(c, order), lim, order), order);
  }
  return {{"order", order}, {"terms", used}, {"expansion", RatFn(acc).str()}};
}

JobResult runCompat(const JobSpec& job) {
  JobResult res;
  auto basis = parseBasis(job.basis, job.params);
  bool ok = true;
  res.report["basis"] = basis->label();
  res.report["compatibility"] = basisCompatJson(*basis, ok);
  if (!job.op.empty()) {
    res.report["input"] = job.op;
    OreMat m = compileExpr(*basis, parseOperator(job.op, job.params), job.sections);
    Json mat = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
      Json row = Json::array();
      for (std::size_t r = 0; r < m.size(); ++r) row.push_back(opString(m.at(j, r)));
      mat.push_back(row);
    }
    res.report["image"] = mat;
  }
  res.exit = ok ? kPass : kFail;
  return res;
}

struct Transformed {
  BasisPtr basis;
  std::optional<TransformResult> tr;
  std::vector<RatFn> y;
};

Transformed transformStage(const JobSpec& job, JobResult& res) {
  Transformed out;
  out.basis = parseBasis(job.basis, job.params);
  res.report["input"] = job.op;
  res.report["basis"] = out.basis->label();
  bool ok = true;
  res.report["compatibility"] = basisCompatJson(*out.basis, ok);
  if (!ok) res.exit = kFail;
  TransformOptions opts;
  opts.mode = job.mode == "eliminated" ? SectionMode::Eliminated : SectionMode::Isolated;
  opts.checkTerms = job.terms;
  if (!job.initials.empty()) {
    long need = opts.mode == SectionMode::Isolated ? valuesFor(*out.basis, job.sections, job.section, job.terms)
                                                   : valuesFor(*out.basis, 1, 0, job.terms * job.sections);
    out.y = nValues(job, std::max(need, job.identityUpTo + 1));
    opts.y = out.y;
  }
  out.tr = transformedAnnihilator(parseOperator(job.op, job.params), *out.basis, job.sections, job.section, opts);
  if (job.sections == 1) res.report["image"] = opString(out.tr->matrix.at(0, 0));
  res.report["transformed_operator"] = displayOp(out.tr->op);
  res.report["section"] = {{"sections", job.sections},
                           {"section", job.section},
                           {"mode", out.tr->mode == SectionMode::Isolated ? "isolated" : "eliminated"}};
  if (!out.y.empty()) {
    res.report["oracle"] = {{"consistent", out.tr->consistent},
                            {"witness_n", out.tr->witnessN},
                            {"checks", out.tr->oracleChecks}};
    if (!out.tr->consistent) res.exit = kFail;
  }
  return out;
}

JobResult runTransform(const JobSpec& job) {
  JobResult res;
  transformStage(job, res);
  return res;
}

JobResult runSolve(const JobSpec& job) {
  JobResult res;
  if (job.initials.empty()) throw Error(ErrorCode::InsufficientData, "solve needs --initials");
  Transformed t = transformStage(job, res);
  if (!t.tr->consistent) return res;
  const OreOp& P = t.tr->op;
  // initial coefficients: order(P) plus any past singular indices
  long need = P.order();
  for (long s : singularIndices(P, 0)) need = std::max(need, s + P.order() + 1);
  std::vector<RatFn> coeffs = t.tr->coefficients;
  if (static_cast<long>(coeffs.size()) < need) {
    long nv = requiredValues(*t.basis, job.sections, job.section, need);
    if (static_cast<long>(t.y.size()) < nv) t.y = nValues(job, nv);
    coeffs = initialCoefficients(t.y, *t.basis, need - 1, job.sections, job.section);
  }
  std::vector<RatFn> init(coeffs.begin(), coeffs.begin() + need);
  Json ic = Json::array();
  for (const auto& c : init) ic.push_back(displayRatFn(c));
  res.report["initial_coefficients"] = ic;

  SeqGen proven(P, init);
  OreOp final = P;
  std::vector<RatFn> finalInit = init;
  res.report["guessed_operator"] = nullptr;
  res.report["certificate"] = nullptr;
  if (job.guessOrder > 0 && P.order() > 1) {
    GuessConfig cfg{std::min(job.guessOrder, P.order() - 1), job.guessDegree, 0, 10};
    auto terms = proven.unroll(cfg.required() + cfg.maxOrder);
    auto g = guessMinimal(terms, P.vars(), cfg);
    if (g) {
      res.report["guessed_operator"] = displayOp(*g);
      Certificate cert = certify(P, init, *g);
      res.report["certificate"] = {{"valid", cert.valid},
                                   {"lclm_order", cert.witness.l.order()},
                                   {"checks", cert.residualChecks}};
      if (!cert.valid) {
        res.report["certificate"]["witness_index"] = cert.witnessIndex;
        res.exit = kFail;
      } else {
        final = g->normalized();
        long m = final.order();
        for (long s : singularIndices(final, 0)) m = std::max(m, s + final.order() + 1);
        const auto& all = proven.unroll(m);
        finalInit.assign(all.begin(), all.begin() + m);
      }
    }
  }
  res.report["closed_form"] = nullptr;
  if (final.order() == 1) res.report["closed_form"] = firstOrderClosedForm(final, finalInit[0]).str();

  SeqGen finalGen(final, finalInit);
  res.report["identity_checks"] = Json::array();
  if (job.identityUpTo > 0 && t.tr->mode == SectionMode::Isolated) {
    if (static_cast<long>(t.y.size()) <= job.identityUpTo) t.y = nValues(job, job.identityUpTo + 1);
    auto rep = expansionIdentity(t.y, *t.basis, job.sections, job.section, finalGen, job.identityUpTo);
    res.report["identity_checks"] = identityJson(rep);
    if (!rep.allEqual()) res.exit = kFail;
  }
  if (job.seriesOrder > 0) res.report["series"] = seriesJson(*t.basis, job.sections, job.section, finalGen, job.seriesOrder);
  return res;
}

JobResult runVerify(const JobSpec& job) {
  JobResult res;
  if (job.coefficients.empty() || job.coeffInitials.empty())
    throw Error(ErrorCode::InvalidArgument, "verify needs --coefficients and --coeff-initials");
  auto basis = parseBasis(job.basis, job.params);
  if (job.identityUpTo <= 0) throw Error(ErrorCode::InvalidArgument, "verify needs --upto");
  res.report["input"] = job.op;
  res.report["basis"] = basis->label();
  res.report["coefficients"] = job.coefficients;
  OreOp C = parseOreOp(job.coefficients, basis->mvars());
  std::vector<RatFn> ci;
  for (const auto& s : job.coeffInitials) ci.push_back(parseRatFn(s, basis->base()));
  SeqGen gen(C, ci);
  auto y = nValues(job, job.identityUpTo + 1);
  auto rep = expansionIdentity(y, *basis, job.sections, job.section, gen, job.identityUpTo);
  res.report["identity_checks"] = identityJson(rep);
  if (!rep.allEqual()) res.exit = kFail;
  if (job.seriesOrder > 0) res.report["series"] = seriesJson(*basis, job.sections, job.section, gen, job.seriesOrder);
  return res;
}

JobResult runJob(const JobSpec& job) {
  try {
    if (job.sections < 1 || job.section < 0 || job.section >= job.sections)
      throw Error(ErrorCode::InvalidArgument, "section must be below sections");
    if (job.command != "compat" && job.op.empty()) throw Error(ErrorCode::InvalidArgument, "--operator is required");
    if (job.basis.empty()) throw Error(ErrorCode::InvalidArgument, "--basis is required");
    if (job.command == "compat") return runCompat(job);
    if (job.command == "transform") return runTransform(job);
    if (job.command == "solve") return runSolve(job);
    if (job.command == "verify") return runVerify(job);
    throw Error(ErrorCode::InvalidArgument, "unknown command " + job.command);
  } catch (const Error& e) {
    JobResult res;
    res.report["error"] = {{"code", errorCodeName(e.code())}, {"message", e.what()}};
    res.exit = exitFor(e.code());
    return res;
  }
}

void printText(const Json& report, std::ostream& os) {
  for (const auto& [key, value] : report.items()) {
    if (value.is_null()) continue;
    os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Corpus

JobSpec jobFromJson(const Json& j) {
  JobSpec s;
  s.command = j.value("command", "solve");
  s.op = j.value("operator", "");
  s.basis = j.value("basis", "");
  s.sections = j.value("sections", 1);
  s.section = j.value("section", 0);
  s.params = j.value("params", std::vector<std::string>{});
  s.initials = j.value("initials", std::vector<std::string>{});
  s.mode = j.value("mode", "isolated");
  s.guessOrder = j.value("guess_order", 4);
  s.guessDegree = j.value("guess_degree", 8);
  s.terms = j.value("terms", 12L);
  s.seriesOrder = j.value("series_order", 0L);
  s.identityUpTo = j.value("upto", 0L);
  s.coefficients = j.value("coefficients", "");
  s.coeffInitials = j.value("coeff_initials", std::vector<std::string>{});
  return s;
}

struct CaseOutcome {
  Json line;
  bool pass = false;
};

// Expected values are compared as strings: string fields verbatim, everything
// else through its JSON dump.
CaseOutcome runCase(const std::filesystem::path& file) {
  auto t0 = std::chrono::steady_clock::now();
  CaseOutcome out;
  std::ifstream in(file);
  Json c = Json::parse(in);
  out.line["case"] = c.value("name", file.stem().string());
  Json mismatches = Json::array();
  Json jobs = Json::array();
  for (const auto& j : c.at("jobs")) {
    JobResult r = runJob(jobFromJson(j));
    int wantExit = j.value("exit", 0);
    if (r.exit != wantExit)
      mismatches.push_back({{"field", "exit"}, {"expected", wantExit}, {"actual", r.exit}});
    const Json expect = j.value("expect", Json::object());
    for (const auto& [field, want] : expect.items()) {
      Json::json_pointer ptr("/" + field);
      std::string actual = r.report.contains(ptr) ? (r.report[ptr].is_string() ? r.report[ptr].get<std::string>()
                                                                                : r.report[ptr].dump())
                                                  : "<missing>";
      std::string expected = want.is_string() ? want.get<std::string>() : want.dump();
      if (actual != expected) mismatches.push_back({{"field", field}, {"expected", expected}, {"actual", actual}});
    }
    jobs.push_back(r.report);
  }
  out.pass = mismatches.empty();
  out.line["pass"] = out.pass;
  out.line["mismatches"] = mismatches;
  out.line["seconds"] =
      std::round(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() * 100) / 100;
  out.line["jobs"] = jobs;
  return out;
}

int runCorpus(const std::string& which, const std::string& dir, bool full) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json" && (which == "all" || e.path().stem() == which)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no corpus case named " << which << "\n";
    return kUsage;
  }
  std::vector<std::future<CaseOutcome>> futs;
  for (const auto& f : files) futs.push_back(std::async(std::launch::async, runCase, f));
  bool all = true;
  for (auto& f : futs) {
    CaseOutcome o = f.get();
    all = all && o.pass;
    if (!full) o.line.erase("jobs");
    std::cout << o.line.dump() << "\n";
  }
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorial basis toolkit for q-holonomic sequences"};
  JobSpec job;
  std::string params, initials, coeffInitials, corpus, corpusDir = QFB_CORPUS_DIR;
  bool json = false, full = false;
  app.add_option("command", job.command, "compat, transform, solve or verify");
  app.add_option("--operator", job.op, "n-domain operator in E and qn");
  app.add_option("--basis", job.basis, "P(e), F, C(a,c;t;e), Binomial or Product(...)");
  app.add_option("--sections", job.sections, "number of sections");
  app.add_option("--section", job.section, "section index");
  app.add_option("--params", params, "comma separated parameter symbols");
  app.add_option("--initials", initials, "comma separated values y(0), y(1), ...");
  app.add_option("--mode", job.mode, "section extraction: isolated or eliminated")
      ->check(CLI::IsMember({"isolated", "eliminated"}));
  app.add_option("--terms", job.terms, "oracle coefficients checked against the transformed operator");
  app.add_option("--guess-order", job.guessOrder, "largest guessed order (0 disables guessing)");
  app.add_option("--guess-degree", job.guessDegree, "largest guessed coefficient degree in q^k");
  app.add_option("--series-order", job.seriesOrder, "q-series of the expansion limit through this order");
  app.add_option("--upto", job.identityUpTo, "check the expansion identity for n <= upto");
  app.add_option("--coefficients", job.coefficients, "verify: k-domain recurrence of the coefficients");
  app.add_option("--coeff-initials", coeffInitials, "verify: initial coefficients");
  app.add_flag("--json", json, "JSON report");
  app.add_option("--corpus", corpus, "run a corpus case by name, or all");
  app.add_option("--corpus-dir", corpusDir, "corpus directory");
  app.add_flag("--full", full, "corpus: include job reports");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  if (!corpus.empty()) return runCorpus(corpus, corpusDir, full);
  if (job.command.empty()) {
    std::cerr << app.help();
    return kUsage;
  }
  job.params = splitList(params);
  job.initials = splitList(initials);
  job.coeffInitials = splitList(coeffInitials);
  JobResult r = runJob(job);
  if (json) std::cout << r.report.dump(2) << "\n";
  else printText(r.report, std::cout);
  return r.exit;
}
