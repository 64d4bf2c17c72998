#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "goim/canon.hpp"
#include "goim/gen.hpp"
#include "goim/graph.hpp"
#include "goim/parser.hpp"
#include "goim/translate.hpp"

using namespace goim;

namespace {

size_t countKind(const Graph& g, NodeKind k) {
  size_t n = 0;
  for (auto& nd : g.nodes)
    if (!nd.dead && nd.kind == k) ++n;
  return n;
}

Graph graphOf(const std::string& s, Strategy st = Strategy::Need) {
  return translateTerm(parse(s, st)).g;
}

}  // namespace

TEST_CASE("validate accepts the trivial graph and flags broken links") {
  Graph g;
  g.root = g.addLink();
  g.outputs.push_back(g.root);  // a single dangling wire, input and output
  CHECK(validate(g).empty());

  // a link that is the source of two edges cannot be represented at all;
  // break an adjacency backref instead
  Graph h;
  h.root = h.addLink();
  NodeId d = h.addNode(NodeKind::Deref);
  h.edgeLinkToNode(h.root, d, 0);
  LinkId out = h.addLink();
  h.edgeNodeToLink(d, 1, out);
  h.outputs.push_back(out);
  CHECK(validate(h).empty());
  h.link(out).down = EndRef::node(d, 0);  // claims to come from the wrong port
  CHECK(!validate(h).empty());
}

TEST_CASE("validate on translations of random terms") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Strategy s = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 30, s);
    Graph g = translateTerm(t).g;
    auto v = validate(g);
    CAPTURE(pretty(t));
    if (!v.empty()) CAPTURE(v.front());
    CHECK(v.empty());
    CHECK(!g.hasLinkLinkEdge());
  }
}

TEST_CASE("fuseLinks collapses chains and is idempotent") {
  Graph g;
  LinkId a = g.addLink(), b = g.addLink(), c = g.addLink();
  NodeId d = g.addNode(NodeKind::Deref);
  LinkId in = g.addLink();
  g.edgeLinkToNode(in, d, 0);
  g.edgeNodeToLink(d, 1, a);
  g.edgeLinkToLink(a, b);
  g.edgeLinkToLink(b, c);
  g.root = in;
  g.outputs.push_back(c);
  fuseLinks(g);
  CHECK(!g.hasLinkLinkEdge());
  CHECK(g.aliveLinkCount() == 2);  // in and the collapsed wire
  CHECK(g.outputs[0] == a);
  CHECK(validate(g).empty());

  Graph before = g;
  fuseLinks(g);
  CHECK(graphEq(before, g));
}

TEST_CASE("graphEq: reflexive, alpha-blind, shape-sensitive") {
  Graph a = graphOf("\\x. x");
  CHECK(graphEq(a, a));
  CHECK(graphEq(a, graphOf("\\y. y")));           // annotations are dropped
  CHECK(!graphEq(a, graphOf("\\x. \\y. x")));     // different construction
  CHECK(!graphEq(graphOf("\\x. \\y. x"), graphOf("\\x. \\y. y")));
  CHECK(graphEq(graphOf("(\\x. x x) (\\y. y)"), graphOf("(\\q. q q) (\\w. w)")));
  // strategies are distinct node labels
  CHECK(!graphEq(graphOf("(\\x. x) (\\y. y)"),
                 graphOf("(\\x. x) @lv (\\y. y)", Strategy::LeftValue)));
}

TEST_CASE("graphEq is an equivalence on random translations") {
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    Strategy s = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 24, s);
    Graph g1 = translateTerm(t).g;
    Graph g2 = translateTerm(t).g;
    CHECK(graphEq(g1, g1));
    CHECK(graphEq(g1, g2));
    CHECK(graphEq(g2, g1));
  }
}

TEST_CASE("boxSubgraphs") {
  Graph wire;
  wire.root = wire.addLink();
  wire.outputs.push_back(wire.root);
  CHECK(boxSubgraphs(wire).empty());

  Graph idg = graphOf("\\x. x");
  auto boxes = boxSubgraphs(idg);
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0].outLinks.empty());  // no auxiliary doors on a closed value

  // \x. \y. x : nested boxes, the inner one with one door
  Graph nested = graphOf("\\x. \\y. x");
  auto bs = boxSubgraphs(nested);
  REQUIRE(bs.size() == 2);
  size_t doors0 = bs[0].outLinks.size(), doors1 = bs[1].outLinks.size();
  CHECK(((doors0 == 0 && doors1 == 1) || (doors0 == 1 && doors1 == 0)));
}

TEST_CASE("translation shape of the identity") {
  Graph g = graphOf("\\x. x");
  CHECK(countKind(g, NodeKind::Lambda) == 1);
  CHECK(countKind(g, NodeKind::Bang) == 1);
  CHECK(countKind(g, NodeKind::Quest) == 0);
  CHECK(countKind(g, NodeKind::Contract) == 1);
  size_t arity1 = 0;
  for (auto& nd : g.nodes)
    if (!nd.dead && nd.kind == NodeKind::Contract && nd.arity() == 1) ++arity1;
  CHECK(arity1 == 1);
  CHECK(g.outputs.empty());
}

TEST_CASE("copyBox duplicates a door-free box disjointly") {
  // (x x)[x <- \y. y]: the substitution's contraction feeds the value box.
  EvalCtx ctx;
  ctx.frames.push_back(ESubFrame{"x", parse("\\y. y", Strategy::Need)});
  VarMultiset m;
  m.add("x", 2);
  GraphCtx gc = translateEvalCtx(ctx, m);
  Graph g = compose(gc, translateTerm(parse("x x", Strategy::Need))).g;
  REQUIRE(validate(g).empty());

  NodeId bang = kNone, contract = kNone;
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    if (g.node(n).dead) continue;
    if (g.node(n).kind == NodeKind::Contract && g.node(n).arity() == 2) contract = n;
  }
  REQUIRE(contract != kNone);
  // the box fed by that contraction
  LinkId cout = g.node(contract).p0;
  REQUIRE(g.link(cout).up.isNode());
  bang = g.link(cout).up.id;
  REQUIRE(g.node(bang).kind == NodeKind::Bang);

  size_t nodesBefore = g.aliveNodeCount();
  const Box& box = g.boxes[static_cast<size_t>(g.boxOfBang.at(bang))];
  size_t boxSize = 1 + box.quests.size() + box.members.size();
  std::string contentBefore = canonicalBoxContent(g, g.boxOfBang.at(bang));

  LinkId target = g.node(contract).cins[0];
  g.contractRemoveInput(contract, 1);
  NodeId copy = copyBox(g, bang, target);

  CHECK(g.aliveNodeCount() == nodesBefore + boxSize);
  CHECK(g.node(contract).arity() == 1);
  CHECK(validate(g).empty());
  CHECK(canonicalBoxContent(g, g.boxOfBang.at(copy)) == contentBefore);
  CHECK(canonicalBoxContent(g, g.boxOfBang.at(bang)) == contentBefore);
}

TEST_CASE("deterministic dumps") {
  std::string a = dumpGraph(graphOf("(\\x. x x) (\\y. y)"));
  std::string b = dumpGraph(graphOf("(\\x. x x) (\\y. y)"));
  CHECK(a == b);
  CHECK(a.find("root") == 0);
}
