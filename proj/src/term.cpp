#include "goim/term.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace goim {

const char* strategyName(Strategy s) {
  switch (s) {
    case Strategy::Need: return "need";
    case Strategy::LeftValue: return "lv";
    case Strategy::RightValue: return "rv";
  }
  return "?";
}

TermPtr mkVar(std::string name) {
  return std::make_shared<Term>(Term{Term::Var{std::move(name)}});
}
TermPtr mkAbs(std::string binder, TermPtr body) {
  return std::make_shared<Term>(Term{Term::Abs{std::move(binder), std::move(body)}});
}
TermPtr mkApp(Strategy s, TermPtr fun, TermPtr arg) {
  return std::make_shared<Term>(Term{Term::App{s, std::move(fun), std::move(arg)}});
}
TermPtr mkSub(TermPtr body, std::string binder, TermPtr bound) {
  return std::make_shared<Term>(Term{Term::Sub{std::move(body), std::move(binder), std::move(bound)}});
}

bool isPure(const TermPtr& t) {
  if (asVar(t)) return true;
  if (auto* a = asAbs(t)) return isPure(a->body);
  if (auto* a = asApp(t)) return isPure(a->fun) && isPure(a->arg);
  return false;
}

void VarMultiset::add(const std::string& name, int k) {
  if (k == 0) return;
  assert(k > 0);
  counts_[name] += k;
}

int VarMultiset::multiplicity(const std::string& name) const {
  auto it = counts_.find(name);
  return it == counts_.end() ? 0 : it->second;
}

void VarMultiset::removeAll(const std::string& name) { counts_.erase(name); }

VarMultiset& VarMultiset::operator+=(const VarMultiset& o) {
  for (auto& [n, k] : o.counts_) counts_[n] += k;
  return *this;
}

size_t VarMultiset::total() const {
  size_t n = 0;
  for (auto& [_, k] : counts_) n += static_cast<size_t>(k);
  return n;
}

std::string VarMultiset::toString() const {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (auto& [n, k] : counts_) {
    for (int i = 0; i < k; ++i) {
      if (!first) os << ", ";
      os << n;
      first = false;
    }
  }
  os << ']';
  return os.str();
}

VarMultiset freeVars(const TermPtr& t) {
  if (auto* v = asVar(t)) {
    VarMultiset m;
    m.add(v->name);
    return m;
  }
  if (auto* a = asAbs(t)) {
    VarMultiset m = freeVars(a->body);
    m.removeAll(a->binder);
    return m;
  }
  if (auto* a = asApp(t)) {
    VarMultiset m = freeVars(a->fun);
    m += freeVars(a->arg);
    return m;
  }
  auto* s = asSub(t);
  VarMultiset m = freeVars(s->body);
  m.removeAll(s->binder);
  m += freeVars(s->bound);
  return m;
}

uint64_t termSize(const TermPtr& t) {
  if (asVar(t)) return 1;
  if (auto* a = asAbs(t)) return termSize(a->body) + 1;
  if (auto* a = asApp(t)) return termSize(a->fun) + termSize(a->arg) + 1;
  auto* s = asSub(t);
  return termSize(s->body) + termSize(s->bound) + 1;
}

namespace {

bool collectBinders(const TermPtr& t, std::unordered_set<std::string>& seen) {
  if (asVar(t)) return true;
  if (auto* a = asAbs(t)) {
    if (!seen.insert(a->binder).second) return false;
    return collectBinders(a->body, seen);
  }
  if (auto* a = asApp(t)) {
    return collectBinders(a->fun, seen) && collectBinders(a->arg, seen);
  }
  auto* s = asSub(t);
  if (!seen.insert(s->binder).second) return false;
  return collectBinders(s->body, seen) && collectBinders(s->bound, seen);
}

void collectStrategies(const TermPtr& t, std::vector<Strategy>& out) {
  if (asVar(t)) return;
  if (auto* a = asAbs(t)) {
    collectStrategies(a->body, out);
    return;
  }
  if (auto* a = asApp(t)) {
    if (out.empty() || out.back() != a->strat) out.push_back(a->strat);
    collectStrategies(a->fun, out);
    collectStrategies(a->arg, out);
    return;
  }
  auto* s = asSub(t);
  collectStrategies(s->body, out);
  collectStrategies(s->bound, out);
}

}  // namespace

bool isBarendregt(const TermPtr& t) {
  std::unordered_set<std::string> seen;
  return collectBinders(t, seen);
}

std::optional<Strategy> termStrategy(const TermPtr& t) {
  std::vector<Strategy> found;
  collectStrategies(t, found);
  if (found.empty()) return std::nullopt;
  return found.front();
}

namespace {

bool alphaEqRec(const TermPtr& a, const TermPtr& b,
                std::unordered_map<std::string, std::string>& ab,
                std::unordered_map<std::string, std::string>& ba) {
  if (auto* va = asVar(a)) {
    auto* vb = asVar(b);
    if (!vb) return false;
    auto ia = ab.find(va->name);
    auto ib = ba.find(vb->name);
    if (ia == ab.end() && ib == ba.end()) return va->name == vb->name;  // both free
    if (ia == ab.end() || ib == ba.end()) return false;
    return ia->second == vb->name && ib->second == va->name;
  }
  if (auto* la = asAbs(a)) {
    auto* lb = asAbs(b);
    if (!lb) return false;
    auto savedA = ab.find(la->binder) != ab.end() ? std::optional(ab[la->binder]) : std::nullopt;
    auto savedB = ba.find(lb->binder) != ba.end() ? std::optional(ba[lb->binder]) : std::nullopt;
    ab[la->binder] = lb->binder;
    ba[lb->binder] = la->binder;
    bool ok = alphaEqRec(la->body, lb->body, ab, ba);
    if (savedA) ab[la->binder] = *savedA; else ab.erase(la->binder);
    if (savedB) ba[lb->binder] = *savedB; else ba.erase(lb->binder);
    return ok;
  }
  if (auto* pa = asApp(a)) {
    auto* pb = asApp(b);
    if (!pb || pa->strat != pb->strat) return false;
    return alphaEqRec(pa->fun, pb->fun, ab, ba) && alphaEqRec(pa->arg, pb->arg, ab, ba);
  }
  auto* sa = asSub(a);
  auto* sb = asSub(b);
  if (!sa || !sb) return false;
  if (!alphaEqRec(sa->bound, sb->bound, ab, ba)) return false;
  auto savedA = ab.find(sa->binder) != ab.end() ? std::optional(ab[sa->binder]) : std::nullopt;
  auto savedB = ba.find(sb->binder) != ba.end() ? std::optional(ba[sb->binder]) : std::nullopt;
  ab[sa->binder] = sb->binder;
  ba[sb->binder] = sa->binder;
  bool ok = alphaEqRec(sa->body, sb->body, ab, ba);
  if (savedA) ab[sa->binder] = *savedA; else ab.erase(sa->binder);
  if (savedB) ba[sb->binder] = *savedB; else ba.erase(sb->binder);
  return ok;
}

// Parenthesisation contexts for printing.
enum class Pos { Top, FunSide, ArgSide, SubBody };

void prettyRec(const TermPtr& t, Pos pos, std::ostringstream& os) {
  if (auto* v = asVar(t)) {
    os << v->name;
    return;
  }
  if (auto* a = asAbs(t)) {
    // An abstraction extends maximally right, so it needs parentheses
    // anywhere a term could follow it.
    bool parens = pos != Pos::Top;
    if (parens) os << '(';
    os << '\\' << a->binder << ". ";
    prettyRec(a->body, Pos::Top, os);
    if (parens) os << ')';
    return;
  }
  if (auto* a = asApp(t)) {
    bool parens = pos == Pos::ArgSide || pos == Pos::SubBody;
    if (parens) os << '(';
    prettyRec(a->fun, Pos::FunSide, os);
    os << " @" << strategyName(a->strat) << ' ';
    prettyRec(a->arg, Pos::ArgSide, os);
    if (parens) os << ')';
    return;
  }
  auto* s = asSub(t);
  prettyRec(s->body, Pos::SubBody, os);
  os << '[' << s->binder << "<-";
  prettyRec(s->bound, Pos::Top, os);
  os << ']';
}

}  // namespace

bool alphaEq(const TermPtr& a, const TermPtr& b) {
  std::unordered_map<std::string, std::string> ab, ba;
  return alphaEqRec(a, b, ab, ba);
}

std::string pretty(const TermPtr& t) {
  std::ostringstream os;
  prettyRec(t, Pos::Top, os);
  return os.str();
}

void NameSupply::claim(const std::string& name) { used_.insert(name); }

void NameSupply::claimAll(const TermPtr& t) {
  if (auto* v = asVar(t)) {
    claim(v->name);
    return;
  }
  if (auto* a = asAbs(t)) {
    claim(a->binder);
    claimAll(a->body);
    return;
  }
  if (auto* a = asApp(t)) {
    claimAll(a->fun);
    claimAll(a->arg);
    return;
  }
  auto* s = asSub(t);
  claim(s->binder);
  claimAll(s->body);
  claimAll(s->bound);
}

std::string NameSupply::fresh(const std::string& like) {
  // Strip one trailing _<digits> so repeated renamings do not pile suffixes.
  std::string base = like;
  auto us = base.find_last_of('_');
  if (us != std::string::npos && us + 1 < base.size()) {
    bool digits = true;
    for (size_t i = us + 1; i < base.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(base[i]))) { digits = false; break; }
    if (digits) base.resize(us);
  }
  int& n = next_[base];
  std::string cand;
  do {
    ++n;
    cand = base + "_" + std::to_string(n);
  } while (used_.count(cand));
  used_.insert(cand);
  return cand;
}

namespace {

TermPtr renameRec(const TermPtr& t, NameSupply& names,
                  std::unordered_map<std::string, std::string>& env) {
  if (auto* v = asVar(t)) {
    auto it = env.find(v->name);
    return it == env.end() ? t : mkVar(it->second);
  }
  if (auto* a = asAbs(t)) {
    std::string nb = names.fresh(a->binder);
    auto saved = env.find(a->binder) != env.end() ? std::optional(env[a->binder]) : std::nullopt;
    env[a->binder] = nb;
    TermPtr body = renameRec(a->body, names, env);
    if (saved) env[a->binder] = *saved; else env.erase(a->binder);
    return mkAbs(nb, std::move(body));
  }
  if (auto* a = asApp(t)) {
    return mkApp(a->strat, renameRec(a->fun, names, env), renameRec(a->arg, names, env));
  }
  auto* s = asSub(t);
  TermPtr bound = renameRec(s->bound, names, env);
  std::string nb = names.fresh(s->binder);
  auto saved = env.find(s->binder) != env.end() ? std::optional(env[s->binder]) : std::nullopt;
  env[s->binder] = nb;
  TermPtr body = renameRec(s->body, names, env);
  if (saved) env[s->binder] = *saved; else env.erase(s->binder);
  return mkSub(std::move(body), nb, std::move(bound));
}

}  // namespace

TermPtr renameBinders(const TermPtr& t, NameSupply& names) {
  std::unordered_map<std::string, std::string> env;
  return renameRec(t, names, env);
}

}  // namespace goim
