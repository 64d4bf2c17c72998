#include "goim/submachine.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace goim {

const char* labelName(Label l) {
  switch (l) {
    case Label::Beta: return "beta";
    case Label::Sigma: return "sigma";
    case Label::Eps: return "eps";
  }
  return "?";
}

namespace {

// Splits the bound side of a substitution into its answer spine and core:
// A[u] with u not an explicit substitution. Returned frames outermost first.
std::pair<std::vector<ESubFrame>, TermPtr> peelAnswer(TermPtr t) {
  std::vector<ESubFrame> subs;
  while (auto* s = asSub(t)) {
    subs.push_back(ESubFrame{s->binder, s->bound});
    t = s->body;
  }
  return {std::move(subs), std::move(t)};
}

// Folds substitution frames (slice [from, end), innermost at the back)
// around t, producing the term A[t].
TermPtr foldSubs(const std::vector<Frame>& frames, size_t from, TermPtr t) {
  for (size_t i = frames.size(); i > from; --i) {
    auto* s = std::get_if<ESubFrame>(&frames[i - 1]);
    assert(s);
    t = mkSub(std::move(t), s->binder, s->bound);
  }
  return t;
}

// Index of the innermost non-substitution frame, or frames.size() if all
// frames (possibly none) are substitutions.
size_t innermostNonSub(const std::vector<Frame>& frames) {
  size_t i = frames.size();
  while (i > 0 && std::holds_alternative<ESubFrame>(frames[i - 1])) --i;
  return i == 0 ? frames.size() : i - 1;
}

}  // namespace

TermPtr plugCtx(const EvalCtx& ctx, const TermPtr& t) {
  TermPtr cur = t;
  for (size_t i = ctx.frames.size(); i > 0; --i) {
    const Frame& f = ctx.frames[i - 1];
    if (auto* n = std::get_if<NeedAppL>(&f)) {
      cur = mkApp(Strategy::Need, cur, n->arg);
    } else if (auto* l = std::get_if<LVAppL>(&f)) {
      cur = mkApp(Strategy::LeftValue, cur, l->arg);
    } else if (auto* lr = std::get_if<LVAppR>(&f)) {
      cur = mkApp(Strategy::LeftValue, lr->fun, cur);
    } else if (auto* rr = std::get_if<RVAppR>(&f)) {
      cur = mkApp(Strategy::RightValue, rr->fun, cur);
    } else if (auto* rl = std::get_if<RVAppL>(&f)) {
      cur = mkApp(Strategy::RightValue, cur, rl->arg);
    } else if (auto* s = std::get_if<ESubFrame>(&f)) {
      cur = mkSub(cur, s->binder, s->bound);
    } else {
      auto* lk = std::get_if<LookupFrame>(&f);
      cur = mkSub(plugCtx(*lk->marked, mkVar(lk->binder)), lk->binder, cur);
    }
  }
  return cur;
}

VarMultiset freeVarsCtx(const EvalCtx& ctx, const VarMultiset& m) {
  VarMultiset cur = m;
  for (size_t i = ctx.frames.size(); i > 0; --i) {
    const Frame& f = ctx.frames[i - 1];
    if (auto* n = std::get_if<NeedAppL>(&f)) {
      cur += freeVars(n->arg);
    } else if (auto* l = std::get_if<LVAppL>(&f)) {
      cur += freeVars(l->arg);
    } else if (auto* lr = std::get_if<LVAppR>(&f)) {
      cur += freeVars(lr->fun);
    } else if (auto* rr = std::get_if<RVAppR>(&f)) {
      cur += freeVars(rr->fun);
    } else if (auto* rl = std::get_if<RVAppL>(&f)) {
      cur += freeVars(rl->arg);
    } else if (auto* s = std::get_if<ESubFrame>(&f)) {
      cur.removeAll(s->binder);
      cur += freeVars(s->bound);
    } else {
      auto* lk = std::get_if<LookupFrame>(&f);
      VarMultiset marked;
      marked.add(lk->binder);
      VarMultiset outer = freeVarsCtx(*lk->marked, marked);
      outer.removeAll(lk->binder);
      outer += cur;
      cur = std::move(outer);
    }
  }
  return cur;
}

std::string prettyFocus(const Focus& f) {
  // Render by plugging a marker variable, then substituting its printing.
  // The marker uses characters the grammar cannot produce.
  static const std::string kMark = "\x01W\x01";
  TermPtr marked = plugCtx(f.ctx, mkVar(kMark));
  std::string body = pretty(marked);
  std::string win = "<" + pretty(f.window) + ">";
  std::string out;
  size_t at = body.find(kMark);
  assert(at != std::string::npos);
  out = body.substr(0, at) + win + body.substr(at + kMark.size());
  return out;
}

Focus initFocus(const TermPtr& t) {
  if (!isPure(t)) throw std::invalid_argument("initFocus: term contains explicit substitutions");
  if (!isClosed(t))
    throw std::invalid_argument("initFocus: term is open: " + freeVars(t).toString());
  Focus f;
  f.window = t;
  f.names.claimAll(t);
  return f;
}

StepResult stepSub(Focus& f) {
  auto& frames = f.ctx.frames;

  // Pure application in the window: descend per strategy.
  if (auto* a = asApp(f.window)) {
    switch (a->strat) {
      case Strategy::Need:
        frames.push_back(NeedAppL{a->arg});
        f.window = a->fun;
        return {StepResult::Kind::Stepped, Label::Eps, 1, {}};
      case Strategy::LeftValue:
        frames.push_back(LVAppL{a->arg});
        f.window = a->fun;
        return {StepResult::Kind::Stepped, Label::Eps, 3, {}};
      case Strategy::RightValue:
        frames.push_back(RVAppR{a->fun});
        f.window = a->arg;
        return {StepResult::Kind::Stepped, Label::Eps, 6, {}};
    }
  }

  // Variable in the window: route the window to the bound term, rule (9).
  if (auto* v = asVar(f.window)) {
    size_t q = frames.size();
    while (q > 0) {
      auto* s = std::get_if<ESubFrame>(&frames[q - 1]);
      if (s && s->binder == v->name) break;
      --q;
    }
    if (q == 0)
      return {StepResult::Kind::Stuck, Label::Eps, 0,
              "unbound variable in window: " + v->name};
    auto* s = std::get_if<ESubFrame>(&frames[q - 1]);
    auto inner = std::make_shared<EvalCtx>();
    inner->frames.assign(frames.begin() + static_cast<long>(q), frames.end());
    auto [subs, core] = peelAnswer(s->bound);
    std::string binder = s->binder;
    frames.resize(q - 1);
    frames.push_back(LookupFrame{std::move(inner), binder});
    for (auto& sf : subs) frames.push_back(sf);
    f.window = core;
    return {StepResult::Kind::Stepped, Label::Eps, 9, {}};
  }

  if (!isValue(f.window))
    return {StepResult::Kind::Stuck, Label::Eps, 0, "explicit substitution in window"};

  // Value in the window: dispatch on the innermost non-substitution frame,
  // with the substitution frames in between forming the answer context A.
  size_t p = innermostNonSub(frames);
  if (p == frames.size()) return {StepResult::Kind::Answer, Label::Eps, 0, {}};

  const Frame frame = frames[p];
  auto* v = asAbs(f.window);

  if (auto* n = std::get_if<NeedAppL>(&frame)) {
    // A[<\x.t>] @need u  ->b  A[<t>[x<-u]]
    std::vector<Frame> a(frames.begin() + static_cast<long>(p) + 1, frames.end());
    TermPtr u = n->arg;
    std::string binder = v->binder;
    TermPtr body = v->body;
    frames.resize(p);
    for (auto& fr : a) frames.push_back(std::move(fr));
    frames.push_back(ESubFrame{binder, u});
    f.window = body;
    return {StepResult::Kind::Stepped, Label::Beta, 2, {}};
  }
  if (std::get_if<LVAppL>(&frame)) {
    // A[<\x.t>] @lv u  ->e  (A[\x.t]) @lv <u>
    TermPtr folded = foldSubs(frames, p + 1, f.window);
    TermPtr u = std::get_if<LVAppL>(&frame)->arg;
    frames.resize(p);
    frames.push_back(LVAppR{folded});
    f.window = u;
    return {StepResult::Kind::Stepped, Label::Eps, 4, {}};
  }
  if (auto* lr = std::get_if<LVAppR>(&frame)) {
    // A[\x.t] @lv A'[<v>]  ->b  A[<t>[x<-A'[v]]]
    TermPtr argAnswer = foldSubs(frames, p + 1, f.window);
    auto [subs, core] = peelAnswer(lr->fun);
    auto* lam = asAbs(core);
    if (!lam)
      return {StepResult::Kind::Stuck, Label::Eps, 0, "lv function position is not a value"};
    frames.resize(p);
    for (auto& sf : subs) frames.push_back(sf);
    frames.push_back(ESubFrame{lam->binder, argAnswer});
    f.window = lam->body;
    return {StepResult::Kind::Stepped, Label::Beta, 5, {}};
  }
  if (auto* rr = std::get_if<RVAppR>(&frame)) {
    // t @rv A[<v>]  ->e  <t> @rv A[v]
    TermPtr folded = foldSubs(frames, p + 1, f.window);
    TermPtr fun = rr->fun;
    frames.resize(p);
    frames.push_back(RVAppL{folded});
    f.window = fun;
    return {StepResult::Kind::Stepped, Label::Eps, 7, {}};
  }
  if (auto* rl = std::get_if<RVAppL>(&frame)) {
    // A[<\x.t>] @rv A'[v]  ->b  A[<t>[x<-A'[v]]]
    std::vector<Frame> a(frames.begin() + static_cast<long>(p) + 1, frames.end());
    TermPtr bound = rl->arg;
    std::string binder = v->binder;
    TermPtr body = v->body;
    frames.resize(p);
    for (auto& fr : a) frames.push_back(std::move(fr));
    frames.push_back(ESubFrame{binder, bound});
    f.window = body;
    return {StepResult::Kind::Stepped, Label::Beta, 8, {}};
  }
  // E[x][x<-A[<v>]]  ->s  A[E[<v'>][x<-v]], v' a freshly renamed copy
  auto* lk = std::get_if<LookupFrame>(&frame);
  assert(lk);
  std::vector<Frame> a(frames.begin() + static_cast<long>(p) + 1, frames.end());
  TermPtr retained = f.window;
  TermPtr copy = renameBinders(f.window, f.names);
  std::string binder = lk->binder;
  std::shared_ptr<const EvalCtx> marked = lk->marked;
  frames.resize(p);
  for (auto& fr : a) frames.push_back(std::move(fr));
  frames.push_back(ESubFrame{binder, retained});
  for (const auto& fr : marked->frames) frames.push_back(fr);
  f.window = copy;
  return {StepResult::Kind::Stepped, Label::Sigma, 10, {}};
}

EvalOutcome evalSub(const TermPtr& t, uint64_t fuel, const EvalOptions& opts) {
  EvalOutcome out;
  Focus f = initFocus(t);
  for (uint64_t i = 0; i < fuel; ++i) {
    StepResult r = stepSub(f);
    if (r.kind == StepResult::Kind::Answer) {
      out.kind = EvalOutcome::Kind::Answer;
      for (size_t k = f.ctx.frames.size(); k > 0; --k) {
        auto* s = std::get_if<ESubFrame>(&f.ctx.frames[k - 1]);
        assert(s);
        out.answer.subs.push_back({s->binder, s->bound});
      }
      out.value = f.window;
      out.last = std::move(f);
      return out;
    }
    if (r.kind == StepResult::Kind::Stuck) {
      throw std::logic_error("sub-machine stuck (bug): " + r.note);
    }
    ++out.steps;
    switch (r.label) {
      case Label::Beta: ++out.beta; break;
      case Label::Sigma: ++out.sigma; break;
      case Label::Eps: ++out.eps; break;
    }
    if (opts.trace) out.trace.push_back({out.steps - 1, r.rule, r.label});
    if (opts.checkInvariants) {
      if (!isPure(f.window)) throw std::logic_error("window purity violated");
      TermPtr whole = plugCtx(f.ctx, f.window);
      if (!isBarendregt(whole)) throw std::logic_error("Barendregt form violated");
      if (!freeVars(whole).empty()) throw std::logic_error("closedness violated");
    }
  }
  out.kind = EvalOutcome::Kind::FuelExhausted;
  out.last = std::move(f);
  return out;
}

}  // namespace goim
