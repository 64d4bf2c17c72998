// Inductive translations of terms, answer contexts and evaluation contexts
// into graphs, and their composition. A term graph has one root and one
// output per free-variable occurrence; outputs carry the variable name as
// an annotation until the graph is handed to the machine.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "goim/graph.hpp"
#include "goim/submachine.hpp"
#include "goim/term.hpp"

namespace goim {

struct TermGraph {
  Graph g;
  // Annotated outputs, aligned with g.outputs; sorted by name so both sides
  // of a decomposition produce the same interface order.
  std::vector<std::pair<std::string, LinkId>> outputs;
};

// Hole-bearing graph. The plug's root fuses onto holeRoot from above; the
// plug's outputs fuse onto the holeOuts attachment links, matched by name.
struct GraphCtx {
  Graph g;
  LinkId holeRoot = kNone;
  std::vector<std::pair<std::string, LinkId>> holeOuts;
  std::vector<std::pair<std::string, LinkId>> outputs;
};

// Precondition: t in Barendregt form. Result is fused; one Contract per
// binder (arity = occurrence count), a box exactly around each abstraction.
TermGraph translateTerm(const TermPtr& t);

// m is the free-variable multiset of the eventual plug.
GraphCtx translateEvalCtx(const EvalCtx& ctx, const VarMultiset& m);
GraphCtx translateAnswerCtx(const AnswerCtx& a, const VarMultiset& m);

// Plugging, then link fusion; interface mismatches throw std::invalid_argument.
TermGraph compose(const GraphCtx& ctx, const TermGraph& tg);
GraphCtx composeCtx(const GraphCtx& outer, const GraphCtx& inner);

}  // namespace goim
