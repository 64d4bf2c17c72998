// The token-guided graph-rewriting machine. A state is a graph with one
// distinguished link (the token position) plus token data: direction,
// rewrite flag, computation stack, box stack. Pass transitions move the
// token one node and only touch stack tops; rewrite transitions fire when
// the flag is raised and rewrite the redex around the token.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goim/canon.hpp"
#include "goim/graph.hpp"
#include "goim/submachine.hpp"  // Label

namespace goim {

enum class Direction : uint8_t { Up, Down };
enum class RewriteFlag : uint8_t { None, Lambda, Bang };

enum class CSym : uint8_t { Star, Lam, At };

struct BSym {
  enum class Kind : uint8_t { Star, Bang, Diamond, LinkRef };
  Kind kind;
  LinkId link = kNone;

  static BSym star() { return {Kind::Star, kNone}; }
  static BSym bang() { return {Kind::Bang, kNone}; }
  static BSym diamond() { return {Kind::Diamond, kNone}; }
  static BSym ref(LinkId l) { return {Kind::LinkRef, l}; }
};

struct MachineState {
  Graph g;
  LinkId pos = kNone;
  Direction dir = Direction::Up;
  RewriteFlag flag = RewriteFlag::None;
  std::vector<CSym> cstack;  // base is implicit
  std::vector<BSym> bstack;
};

// Requires a valid fused graph of interface (1,0).
MachineState initState(Graph g);

bool isFinal(const MachineState& s);

struct Transition {
  enum class Kind : uint8_t { Pass, Rewrite };
  Kind kind;
  Label label;
};

struct StepOutcome {
  bool stuck = false;
  Transition t{};
  std::string diagnostic;  // stuck only
};

// One transition; deterministic. Precondition: !isFinal(s).
StepOutcome step(MachineState& s);

struct MachineTraceStep {
  uint64_t index;
  Transition t;
  LinkId pos;
  Direction dir;
  RewriteFlag flag;
  size_t csDepth, bsDepth;
};

struct RunOptions {
  bool trace = false;
  bool validateEachStep = false;   // graph invariants + no link-link edges
  bool boxCheckEachStep = false;   // every box content matches an initial box
};

struct ExecOutcome {
  enum class Kind : uint8_t { Final, FuelExhausted, Stuck };
  Kind kind;
  uint64_t beta = 0, sigma = 0, epsPass = 0, epsRewrite = 0;
  uint64_t steps = 0;
  std::string diagnostic;
  std::vector<MachineTraceStep> trace;

  uint64_t total() const { return beta + sigma + epsPass + epsRewrite; }
};

ExecOutcome run(Graph g, uint64_t fuel, const RunOptions& opts = {});

// Exposed for the lockstep checker: drives a state transition-by-transition.
class Machine {
 public:
  explicit Machine(Graph g) : s_(initState(std::move(g))) {}

  MachineState& state() { return s_; }
  const MachineState& state() const { return s_; }
  bool final() const { return isFinal(s_); }
  StepOutcome step() { return goim::step(s_); }

 private:
  MachineState s_;
};

}  // namespace goim
