#include "goim/harness.hpp"

#include <json.hpp>

#include <chrono>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "goim/gen.hpp"
#include "goim/translate.hpp"

namespace goim {

using nlohmann::json;

const char* verdictName(Verdict v) {
  switch (v) {
    case Verdict::CountsMatch: return "counts-match";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::BothDiverged: return "both-diverged";
    case Verdict::Error: return "error";
  }
  return "?";
}

int Report::exitCode() const {
  switch (verdict) {
    case Verdict::CountsMatch: return kExitOk;
    case Verdict::Mismatch: return kExitMismatch;
    case Verdict::BothDiverged: return kExitFuel;
    case Verdict::Error: return kExitUsage;
  }
  return kExitUsage;
}

namespace {

json outcomeJson(const EvalOutcome& o) {
  json j;
  j["result"] = o.kind == EvalOutcome::Kind::Answer ? "answer" : "fuel-exhausted";
  j["beta"] = o.beta;
  j["sigma"] = o.sigma;
  j["eps"] = o.eps;
  j["steps"] = o.steps;
  if (o.kind == EvalOutcome::Kind::Answer) j["value"] = pretty(o.value);
  return j;
}

json outcomeJson(const ExecOutcome& o) {
  json j;
  switch (o.kind) {
    case ExecOutcome::Kind::Final: j["result"] = "final"; break;
    case ExecOutcome::Kind::FuelExhausted: j["result"] = "fuel-exhausted"; break;
    case ExecOutcome::Kind::Stuck: j["result"] = "stuck"; break;
  }
  j["beta"] = o.beta;
  j["sigma"] = o.sigma;
  j["eps_pass"] = o.epsPass;
  j["eps_rewrite"] = o.epsRewrite;
  j["total"] = o.total();
  if (!o.diagnostic.empty()) j["diagnostic"] = o.diagnostic;
  return j;
}

}  // namespace

std::string Report::toJson(bool includeWallTime) const {
  json j;
  j["term"] = term;
  j["strategy"] = strategyName(strategy);
  j["engine"] = engine == EngineSel::Sub ? "sub" : engine == EngineSel::Graph ? "graph" : "both";
  j["verdict"] = verdictName(verdict);
  if (!error.empty()) j["error"] = error;
  if (sub) j["sub"] = outcomeJson(*sub);
  if (exec) j["graph"] = outcomeJson(*exec);
  if (includeWallTime) {
    if (sub) j["sub_ms"] = subMillis;
    if (exec) j["graph_ms"] = execMillis;
  }
  return j.dump();
}

Report evalBoth(const EvalRequest& req) {
  Report rep;
  rep.term = pretty(req.term);
  rep.strategy = req.strategy;
  rep.engine = req.engine;

  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  try {
    if (req.engine != EngineSel::Graph) {
      auto t0 = clock();
      rep.sub = evalSub(req.term, req.fuel);
      rep.subMillis = ms(t0, clock());
    }
    if (req.engine != EngineSel::Sub) {
      TermGraph tg = translateTerm(req.term);
      RunOptions ro;
      ro.trace = req.wantExecTrace;
      ro.validateEachStep = req.debugChecks;
      auto t0 = clock();
      rep.exec = run(std::move(tg.g), graphFuelFor(req.fuel), ro);
      rep.execMillis = ms(t0, clock());
    }
  } catch (const std::exception& e) {
    rep.verdict = Verdict::Error;
    rep.error = e.what();
    return rep;
  }

  if (req.engine == EngineSel::Sub) {
    rep.verdict = rep.sub->kind == EvalOutcome::Kind::Answer ? Verdict::CountsMatch
                                                             : Verdict::BothDiverged;
    return rep;
  }
  if (req.engine == EngineSel::Graph) {
    switch (rep.exec->kind) {
      case ExecOutcome::Kind::Final: rep.verdict = Verdict::CountsMatch; break;
      case ExecOutcome::Kind::FuelExhausted: rep.verdict = Verdict::BothDiverged; break;
      case ExecOutcome::Kind::Stuck: rep.verdict = Verdict::Mismatch; rep.error = rep.exec->diagnostic; break;
    }
    return rep;
  }

  const bool subDone = rep.sub->kind == EvalOutcome::Kind::Answer;
  const bool execDone = rep.exec->kind == ExecOutcome::Kind::Final;
  if (rep.exec->kind == ExecOutcome::Kind::Stuck) {
    rep.verdict = Verdict::Mismatch;
    rep.error = rep.exec->diagnostic;
  } else if (subDone != execDone) {
    rep.verdict = Verdict::Mismatch;
    rep.error = "engines disagree on termination";
  } else if (!subDone) {
    rep.verdict = Verdict::BothDiverged;
  } else if (rep.sub->beta != rep.exec->beta || rep.sub->sigma != rep.exec->sigma) {
    rep.verdict = Verdict::Mismatch;
    std::ostringstream os;
    os << "count mismatch: beta " << rep.sub->beta << " vs " << rep.exec->beta << ", sigma "
       << rep.sub->sigma << " vs " << rep.exec->sigma;
    rep.error = os.str();
  } else {
    rep.verdict = Verdict::CountsMatch;
  }
  return rep;
}

LockstepResult lockstepCheck(const TermPtr& t, uint64_t fuel, const MachineTamper& tamper) {
  LockstepResult res;
  Focus f = initFocus(t);
  TermGraph tg = translateTerm(t);
  Machine m(std::move(tg.g));
  if (tamper) tamper(m.state());

  uint64_t machineBudget = graphFuelFor(fuel);
  uint64_t subEpsSinceMatch = 0;  // oracle eps reductions since last matched rewrite

  auto fail = [&](const std::string& why) {
    res.ok = false;
    res.failure = why;
    return res;
  };

  auto machineStep = [&]() -> std::optional<std::string> {
    if (machineBudget == 0) return "machine exceeded its transition budget";
    --machineBudget;
    StepOutcome so = m.step();
    if (so.stuck) return "machine stuck: " + so.diagnostic;
    if (so.t.kind == Transition::Kind::Pass) ++res.execEpsPass;
    else if (so.t.label == Label::Beta) ++res.execBeta;
    else if (so.t.label == Label::Sigma) ++res.execSigma;
    else ++res.execEpsRewrite;
    return std::nullopt;
  };

  for (uint64_t i = 0; i < fuel; ++i) {
    StepResult sr = stepSub(f);
    if (sr.kind == StepResult::Kind::Stuck) return fail("oracle stuck: " + sr.note);
    if (sr.kind == StepResult::Kind::Answer) {
      // Trailing eps segment: the machine must reach Final, last move an eps.
      uint64_t allowed = 4 * subEpsSinceMatch + 1;
      uint64_t used = 0;
      while (!m.final()) {
        if (used == allowed)
          return fail("machine did not reach the final state within the answer budget");
        uint64_t b0 = res.execBeta, s0 = res.execSigma;
        if (auto err = machineStep()) return fail(*err);
        if (res.execBeta != b0 || res.execSigma != s0)
          return fail("machine produced an extra labelled transition past the answer");
        ++used;
      }
      if (res.execBeta != res.subBeta || res.execSigma != res.subSigma)
        return fail("label counts disagree at the answer");
      if (m.state().g.hasLinkLinkEdge()) return fail("final graph has a link-link edge");
      if (auto v = validate(m.state().g); !v.empty())
        return fail("final graph invalid: " + v.front());
      res.ok = true;
      return res;
    }

    ++res.rulesSeen[static_cast<size_t>(sr.rule)];
    if (sr.label == Label::Eps) {
      ++res.subEps;
      ++subEpsSinceMatch;
      continue;
    }

    // A beta/sigma reduction: the machine must produce the same label next
    // among its rewrites, within the pooled eps budget.
    if (sr.label == Label::Beta) ++res.subBeta; else ++res.subSigma;
    uint64_t allowed = 3 + 4 * subEpsSinceMatch;
    uint64_t eps = 0;
    for (;;) {
      if (m.final()) return fail("machine finished while the oracle still reduces");
      uint64_t b0 = res.execBeta, s0 = res.execSigma;
      if (auto err = machineStep()) return fail(*err);
      if (res.execBeta == b0 && res.execSigma == s0) {
        ++eps;
        if (eps > allowed)
          return fail("eps budget exceeded before a matched rewrite (allowed " +
                      std::to_string(allowed) + ")");
        continue;
      }
      Label got = res.execBeta != b0 ? Label::Beta : Label::Sigma;
      if (got != sr.label)
        return fail(std::string("label mismatch: oracle ") + labelName(sr.label) +
                    ", machine " + labelName(got));
      break;
    }
    uint64_t normalised = eps > 4 * subEpsSinceMatch ? eps - 4 * subEpsSinceMatch : 0;
    if (normalised > res.maxPrefix) res.maxPrefix = normalised;
    subEpsSinceMatch = 0;
  }

  // Oracle fuel ran out. Every matched prefix was already checked; nothing
  // can be asserted about termination, so report divergence.
  res.ok = true;
  res.diverged = true;
  return res;
}

CampaignResult runCampaign(const CampaignOptions& opts) {
  CampaignResult out;
  out.total = opts.count;
  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 4;
  if (threads > opts.count) threads = static_cast<unsigned>(opts.count ? opts.count : 1);

  std::mutex mu;
  auto worker = [&](unsigned shard) {
    CampaignResult local;
    for (uint64_t i = shard; i < opts.count; i += threads) {
      Rng seeder(opts.seed * 0x9e3779b97f4a7c15ull + i);
      TermPtr t = genClosedTerm(seeder.next(), opts.maxSize, opts.strategy);
      LockstepResult r = lockstepCheck(t, opts.fuel);
      if (!r.ok) {
        ++local.failed;
        if (local.failures.size() < 5)
          local.failures.push_back(pretty(t) + " :: " + r.failure);
        continue;
      }
      for (size_t k = 0; k < r.rulesSeen.size(); ++k) local.ruleCoverage[k] += r.rulesSeen[k];
      if (r.diverged) {
        ++local.diverged;
        continue;
      }
      ++local.terminated;
      local.sumBeta += r.subBeta;
      local.sumSigma += r.subSigma;
      local.sumEps += r.subEps;
      uint64_t size = termSize(t);
      local.sumSize += size;
      local.sumExecEpsPass += r.execEpsPass;
      local.sumExecEpsRewrite += r.execEpsRewrite;
      if (r.subBeta > 0) {
        double spb = static_cast<double>(r.subSigma) / static_cast<double>(r.subBeta);
        if (spb > local.maxSigmaPerBeta) local.maxSigmaPerBeta = spb;
        double epsb = static_cast<double>(r.subEps) /
                      (static_cast<double>(size) * static_cast<double>(r.subBeta));
        if (epsb > local.maxEpsPerSizeBeta) local.maxEpsPerSizeBeta = epsb;
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    out.terminated += local.terminated;
    out.diverged += local.diverged;
    out.failed += local.failed;
    for (auto& s : local.failures)
      if (out.failures.size() < 5) out.failures.push_back(s);
    for (size_t k = 0; k < local.ruleCoverage.size(); ++k)
      out.ruleCoverage[k] += local.ruleCoverage[k];
    out.sumBeta += local.sumBeta;
    out.sumSigma += local.sumSigma;
    out.sumEps += local.sumEps;
    out.sumSize += local.sumSize;
    out.sumExecEpsPass += local.sumExecEpsPass;
    out.sumExecEpsRewrite += local.sumExecEpsRewrite;
    if (local.maxSigmaPerBeta > out.maxSigmaPerBeta) out.maxSigmaPerBeta = local.maxSigmaPerBeta;
    if (local.maxEpsPerSizeBeta > out.maxEpsPerSizeBeta)
      out.maxEpsPerSizeBeta = local.maxEpsPerSizeBeta;
  };

  std::vector<std::thread> pool;
  for (unsigned s = 0; s < threads; ++s) pool.emplace_back(worker, s);
  for (auto& th : pool) th.join();
  return out;
}

namespace {

TermPtr church(uint64_t n, Strategy s, const std::string& f, const std::string& x) {
  TermPtr body = mkVar(x);
  for (uint64_t i = 0; i < n; ++i) body = mkApp(s, mkVar(f), body);
  return mkAbs(f, mkAbs(x, body));
}

TermPtr identity(const std::string& v) { return mkAbs(v, mkVar(v)); }

}  // namespace

TermPtr benchTerm(const std::string& family, uint64_t n, Strategy s) {
  if (family == "identity-chain") {
    TermPtr t = identity("i0");
    for (uint64_t k = 1; k <= n; ++k) t = mkApp(s, identity("i" + std::to_string(k)), t);
    return t;
  }
  if (family == "sharing-chain") {
    TermPtr body = mkApp(s, mkVar("x"), identity("i"));
    for (uint64_t k = 1; k < n; ++k) body = mkApp(s, mkVar("x"), body);
    return mkApp(s, mkAbs("x", body), identity("j"));
  }
  if (family == "church-add") {
    // plus = \a.\b.\f.\x. a f (b f x)
    TermPtr plus = mkAbs(
        "a", mkAbs("b", mkAbs("f", mkAbs("x",
            mkApp(s, mkApp(s, mkVar("a"), mkVar("f")),
                  mkApp(s, mkApp(s, mkVar("b"), mkVar("f")), mkVar("x")))))));
    TermPtr t = mkApp(s, mkApp(s, plus, church(n, s, "f1", "x1")), church(n, s, "f2", "x2"));
    return mkApp(s, mkApp(s, t, identity("u")), identity("w"));
  }
  if (family == "church-mul") {
    // mul = \a.\b.\f. a (b f)
    TermPtr mul = mkAbs(
        "a", mkAbs("b", mkAbs("f", mkApp(s, mkVar("a"), mkApp(s, mkVar("b"), mkVar("f"))))));
    TermPtr t = mkApp(s, mkApp(s, mul, church(n, s, "f1", "x1")), church(n, s, "f2", "x2"));
    return mkApp(s, mkApp(s, t, identity("u")), identity("w"));
  }
  if (family == "church-exp") {
    // exp = \a.\b. b a
    TermPtr ex = mkAbs("a", mkAbs("b", mkApp(s, mkVar("b"), mkVar("a"))));
    TermPtr t = mkApp(s, mkApp(s, ex, church(n, s, "f1", "x1")), church(n, s, "f2", "x2"));
    return mkApp(s, mkApp(s, t, identity("u")), identity("w"));
  }
  throw std::invalid_argument("unknown benchmark family: " + family);
}

BenchResult benchFamily(const std::string& family, uint64_t minParam, uint64_t maxParam,
                        Strategy s, uint64_t fuel) {
  BenchResult out;
  double num = 0, den = 0;
  for (uint64_t p = minParam; p <= maxParam; ++p) {
    TermPtr t = benchTerm(family, p, s);
    BenchRow row;
    row.family = family;
    row.param = p;
    row.size = termSize(t);
    EvalOutcome sub = evalSub(t, fuel);
    TermGraph tg = translateTerm(t);
    ExecOutcome ex = run(std::move(tg.g), graphFuelFor(fuel));
    if (sub.kind != EvalOutcome::Kind::Answer || ex.kind != ExecOutcome::Kind::Final) {
      row.diverged = true;
      out.rows.push_back(row);
      continue;
    }
    row.beta = ex.beta;
    row.sigma = ex.sigma;
    row.epsPass = ex.epsPass;
    row.epsRewrite = ex.epsRewrite;
    row.total = ex.total();
    out.rows.push_back(row);
    double x = static_cast<double>(row.size) * static_cast<double>(row.beta);
    num += x * static_cast<double>(row.total);
    den += x * x;
  }
  out.fittedOverhead = den > 0 ? num / den : 0;
  return out;
}

std::string benchCsv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "family,param,size,beta,sigma,eps_pass,eps_rewrite,total\n";
  for (const BenchRow& r : rows) {
    if (r.diverged) {
      os << r.family << ',' << r.param << ',' << r.size << ",diverged,,,,\n";
      continue;
    }
    os << r.family << ',' << r.param << ',' << r.size << ',' << r.beta << ',' << r.sigma << ','
       << r.epsPass << ',' << r.epsRewrite << ',' << r.total << "\n";
  }
  return os.str();
}

void traceEmitSub(const TermPtr& term, uint64_t fuel, std::ostream& sink, bool withFocus) {
  Focus f = initFocus(term);
  uint64_t i = 0;
  for (; i < fuel; ++i) {
    StepResult r = stepSub(f);
    if (r.kind != StepResult::Kind::Stepped) break;
    json j;
    j["i"] = i;
    j["rule"] = r.rule;
    j["label"] = labelName(r.label);
    if (withFocus) j["focus"] = prettyFocus(f);
    sink << j.dump() << "\n";
  }
  json summary;
  summary["summary"] = {{"steps", i}};
  sink << summary.dump() << "\n";
}

void traceEmit(const ExecOutcome& outcome, std::ostream& sink) {
  for (const MachineTraceStep& st : outcome.trace) {
    json j;
    j["i"] = st.index;
    j["kind"] = st.t.kind == Transition::Kind::Pass ? "pass" : "rewrite";
    j["label"] = labelName(st.t.label);
    j["pos"] = st.pos;
    j["dir"] = st.dir == Direction::Up ? "up" : "down";
    j["flag"] = st.flag == RewriteFlag::None ? "none"
                : st.flag == RewriteFlag::Lambda ? "lambda" : "bang";
    j["cs_depth"] = st.csDepth;
    j["bs_depth"] = st.bsDepth;
    sink << j.dump() << "\n";
  }
  json summary;
  summary["summary"] = {{"beta", outcome.beta},
                        {"sigma", outcome.sigma},
                        {"eps_pass", outcome.epsPass},
                        {"eps_rewrite", outcome.epsRewrite},
                        {"total", outcome.total()}};
  sink << summary.dump() << "\n";
}

}  // namespace goim
