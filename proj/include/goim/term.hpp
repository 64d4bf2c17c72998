// Terms of the untyped lambda calculus with strategy-annotated applications
// and explicit substitutions. Terms are immutable and shared; every operation
// here is pure.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace goim {

enum class Strategy : uint8_t { Need, LeftValue, RightValue };

const char* strategyName(Strategy s);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// t ::= x | \x. t | t $ u | t[x<-u]   with $ one of @need, @lv, @rv.
// All binders of a well-formed term introduce pairwise distinct names
// (Barendregt form); the parser and the generators enforce this,
// the evaluator preserves it.
struct Term {
  struct Var {
    std::string name;
  };
  struct Abs {
    std::string binder;
    TermPtr body;
  };
  struct App {
    Strategy strat;
    TermPtr fun;
    TermPtr arg;
  };
  struct Sub {  // body[binder <- bound], internal only (never parsed)
    TermPtr body;
    std::string binder;
    TermPtr bound;
  };

  std::variant<Var, Abs, App, Sub> node;
};

TermPtr mkVar(std::string name);
TermPtr mkAbs(std::string binder, TermPtr body);
TermPtr mkApp(Strategy s, TermPtr fun, TermPtr arg);
TermPtr mkSub(TermPtr body, std::string binder, TermPtr bound);

inline const Term::Var* asVar(const TermPtr& t) { return std::get_if<Term::Var>(&t->node); }
inline const Term::Abs* asAbs(const TermPtr& t) { return std::get_if<Term::Abs>(&t->node); }
inline const Term::App* asApp(const TermPtr& t) { return std::get_if<Term::App>(&t->node); }
inline const Term::Sub* asSub(const TermPtr& t) { return std::get_if<Term::Sub>(&t->node); }

bool isPure(const TermPtr& t);                  // no explicit substitutions anywhere
inline bool isValue(const TermPtr& t) { return asAbs(t) != nullptr; }

// Multiset of variable names, name -> multiplicity.
class VarMultiset {
 public:
  VarMultiset() = default;

  void add(const std::string& name, int k = 1);
  int multiplicity(const std::string& name) const;
  void removeAll(const std::string& name);      // drops every occurrence of name
  VarMultiset& operator+=(const VarMultiset& o);
  friend VarMultiset operator+(VarMultiset a, const VarMultiset& b) { return a += b; }
  bool operator==(const VarMultiset& o) const { return counts_ == o.counts_; }

  bool empty() const { return counts_.empty(); }
  size_t total() const;
  const std::map<std::string, int>& counts() const { return counts_; }
  std::string toString() const;

 private:
  std::map<std::string, int> counts_;           // invariant: values > 0
};

VarMultiset freeVars(const TermPtr& t);
inline bool isClosed(const TermPtr& t) { return freeVars(t).empty(); }

// |x| = 1, |\x.t| = |t|+1, |t u| = |t|+|u|+1, |t[x<-u]| = |t|+|u|+1.
uint64_t termSize(const TermPtr& t);

// All binders pairwise distinct.
bool isBarendregt(const TermPtr& t);

// The single strategy used by the term's applications, if any application
// exists; nullopt for application-free terms. Mixed terms are rejected at
// parse time, so this is well defined on parser/generator output.
std::optional<Strategy> termStrategy(const TermPtr& t);

bool alphaEq(const TermPtr& a, const TermPtr& b);

std::string pretty(const TermPtr& t);

// Fresh-name source. Freshness is relative to every name claimed so far;
// generated names are base_1, base_2, ... where base is the claimed name
// with any trailing _<digits> stripped.
class NameSupply {
 public:
  void claim(const std::string& name);
  void claimAll(const TermPtr& t);              // binders and variables alike
  std::string fresh(const std::string& like);

 private:
  std::unordered_set<std::string> used_;
  std::unordered_map<std::string, int> next_;
};

// Copy of t with every binder renamed to a fresh name. Free variables keep
// their names. Preserves global binder distinctness when copying values.
TermPtr renameBinders(const TermPtr& t, NameSupply& names);

}  // namespace goim
