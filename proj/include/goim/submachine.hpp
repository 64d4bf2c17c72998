// Storeless small-step interpreter over focused terms. A Focus is a term
// decomposed into an evaluation context (a frame stack) and the windowed
// sub-term the next rule applies to. Serves as the oracle the graph machine
// is checked against.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "goim/term.hpp"

namespace goim {

enum class Label : uint8_t { Beta, Sigma, Eps };
const char* labelName(Label l);

// Answer context <.>[x1<-t1]...[xn<-tn]; innermost substitution first.
struct AnswerCtx {
  std::vector<std::pair<std::string, TermPtr>> subs;
};

struct EvalCtx;

// Context frames. The window sits in the hole; frames are stored outermost
// first, innermost at the back of EvalCtx::frames.
struct NeedAppL { TermPtr arg; };                 // <.> @need arg
struct LVAppL   { TermPtr arg; };                 // <.> @lv arg
struct LVAppR   { TermPtr fun; };                 // fun @lv <.>, fun an answer A[v]
struct RVAppR   { TermPtr fun; };                 // fun @rv <.>, fun not yet visited
struct RVAppL   { TermPtr arg; };                 // <.> @rv arg, arg an answer A[v]
struct ESubFrame { std::string binder; TermPtr bound; };  // <.>[x<-t]
struct LookupFrame {                              // E'[x][x <- <.>]
  std::shared_ptr<const EvalCtx> marked;          // E', hole at the occurrence of x
  std::string binder;
};

using Frame = std::variant<NeedAppL, LVAppL, LVAppR, RVAppR, RVAppL, ESubFrame, LookupFrame>;

struct EvalCtx {
  std::vector<Frame> frames;
};

struct Focus {
  EvalCtx ctx;
  TermPtr window;      // always pure
  NameSupply names;    // fresh-name source for rule (10) copies
};

// Whole enriched term with the window marked as <...>.
std::string prettyFocus(const Focus& f);

// Term E[t] obtained by forgetting the window marker.
TermPtr plugCtx(const EvalCtx& ctx, const TermPtr& t);

// FV_M(E): free variables of E with M standing for the hole's.
VarMultiset freeVarsCtx(const EvalCtx& ctx, const VarMultiset& m);

Focus initFocus(const TermPtr& t);  // throws std::invalid_argument unless t pure and closed

struct StepResult {
  enum class Kind : uint8_t { Stepped, Answer, Stuck };
  Kind kind;
  Label label = Label::Eps;   // Stepped
  int rule = 0;               // Stepped: basic rule number 1..10
  std::string note;           // Stuck diagnostic
};

// Applies the unique basic rule under the current context; mutates f.
// Answer is reported when the window holds a value under substitution
// frames only. Stuck is unreachable from initFocus of a closed pure term.
StepResult stepSub(Focus& f);

struct SubTraceStep {
  uint64_t index;
  int rule;
  Label label;
};

struct EvalOutcome {
  enum class Kind : uint8_t { Answer, FuelExhausted };
  Kind kind;
  uint64_t beta = 0, sigma = 0, eps = 0;
  uint64_t steps = 0;
  AnswerCtx answer;            // Answer only
  TermPtr value;               // Answer only
  Focus last;                  // final focus; diagnoses divergence on fuel exhaustion
  std::vector<SubTraceStep> trace;  // filled when traced
};

struct EvalOptions {
  bool trace = false;
  bool checkInvariants = false;  // window purity, Barendregt, closedness per step
};

EvalOutcome evalSub(const TermPtr& t, uint64_t fuel, const EvalOptions& opts = {});

}  // namespace goim
