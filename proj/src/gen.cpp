#include "goim/gen.hpp"

#include <vector>

namespace goim {

namespace {

struct Gen {
  Rng rng;
  Strategy strat;
  int binderCount = 0;
  std::vector<std::string> scope;

  explicit Gen(uint64_t seed, Strategy s) : rng(seed), strat(s) {}

  std::string freshBinder() { return "v" + std::to_string(binderCount++); }

  // Smallest producible term: a variable when the scope is non-empty,
  // \v. v otherwise.
  uint64_t minTerm() const { return scope.empty() ? 2 : 1; }

  TermPtr gen(uint64_t budget) {
    uint64_t wVar = scope.empty() ? 0 : (budget <= 2 ? 8 : 3);
    uint64_t wAbs = budget >= 2 ? 3 : 0;
    uint64_t wApp = budget >= 2 * minTerm() + 1 ? (budget >= 8 ? 5 : 2) : 0;
    uint64_t total = wVar + wAbs + wApp;
    if (total == 0) return fallback();
    uint64_t roll = rng.below(total);
    if (roll < wVar) {
      return mkVar(scope[rng.below(scope.size())]);
    }
    if (roll < wVar + wAbs) {
      std::string b = freshBinder();
      scope.push_back(b);
      TermPtr body = gen(budget - 1);
      scope.pop_back();
      return mkAbs(b, body);
    }
    uint64_t lo = minTerm();
    uint64_t hi = budget - 1 - lo;  // leave at least lo for the argument
    uint64_t left = lo + rng.below(hi - lo + 1);
    TermPtr fun = gen(left);
    TermPtr arg = gen(budget - 1 - termSize(fun));
    return mkApp(strat, fun, arg);
  }

  TermPtr fallback() {
    if (!scope.empty()) return mkVar(scope[rng.below(scope.size())]);
    std::string b = freshBinder();
    return mkAbs(b, mkVar(b));
  }
};

}  // namespace

TermPtr genClosedTerm(uint64_t seed, uint64_t maxSize, Strategy strategy) {
  Gen g(seed, strategy);
  if (maxSize < 2) return g.fallback();
  return g.gen(maxSize);
}

}  // namespace goim
