#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "goim/canon.hpp"
#include "goim/gen.hpp"
#include "goim/machine.hpp"
#include "goim/parser.hpp"
#include "goim/translate.hpp"

using namespace goim;

namespace {

Graph graphOf(const std::string& s) { return translateTerm(parse(s, Strategy::Need)).g; }

ExecOutcome runTerm(const std::string& s, uint64_t fuel = 100000, RunOptions opts = {}) {
  return run(graphOf(s), fuel, opts);
}

}  // namespace

TEST_CASE("initState and isFinal") {
  Graph g = graphOf("\\x. x");
  MachineState s = initState(g);
  CHECK(s.pos == s.g.root);
  CHECK(s.dir == Direction::Up);
  CHECK(s.flag == RewriteFlag::None);
  CHECK(s.cstack.empty());
  REQUIRE(s.bstack.size() == 1);
  CHECK(s.bstack[0].kind == BSym::Kind::Star);
  CHECK(!isFinal(s));

  s.dir = Direction::Down;
  s.bstack[0] = BSym::bang();
  CHECK(isFinal(s));

  // graphs with outputs are rejected
  TermGraph open = translateTerm(mkVar("x"));
  CHECK_THROWS_AS(initState(open.g), std::invalid_argument);
}

TEST_CASE("a bare value finishes in one pass transition") {
  ExecOutcome e = runTerm("\\x. x");
  CHECK(e.kind == ExecOutcome::Kind::Final);
  CHECK(e.beta == 0);
  CHECK(e.sigma == 0);
  CHECK(e.epsRewrite == 0);
  CHECK(e.epsPass == 1);
  CHECK(e.total() == 1);
}

TEST_CASE("identity application counts per strategy") {
  ExecOutcome need = runTerm("(\\x. x) (\\y. y)");
  CHECK(need.kind == ExecOutcome::Kind::Final);
  CHECK(need.beta == 1);
  CHECK(need.sigma == 1);
  CHECK(need.epsRewrite == 1);  // one box opened ahead of the beta
  CHECK(need.total() == 10);

  ExecOutcome lv = run(translateTerm(parse("(\\x. x) @lv (\\y. y)", Strategy::Need)).g, 1000);
  CHECK(lv.kind == ExecOutcome::Kind::Final);
  CHECK(lv.beta == 1);
  CHECK(lv.sigma == 1);
  CHECK(lv.total() == 14);

  ExecOutcome rv = run(translateTerm(parse("(\\x. x) @rv (\\y. y)", Strategy::Need)).g, 1000);
  CHECK(rv.kind == ExecOutcome::Kind::Final);
  CHECK(rv.beta == 1);
  CHECK(rv.sigma == 1);
  CHECK(rv.total() == 12);
}

TEST_CASE("omega exhausts fuel") {
  ExecOutcome e = runTerm("(\\x. x x) (\\y. y y)", 10000);
  CHECK(e.kind == ExecOutcome::Kind::FuelExhausted);
}

TEST_CASE("determinism") {
  RunOptions opts;
  opts.trace = true;
  ExecOutcome a = runTerm("(\\x. x x) (\\y. y)", 1000, opts);
  ExecOutcome b = runTerm("(\\x. x x) (\\y. y)", 1000, opts);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].pos == b.trace[i].pos);
    CHECK(a.trace[i].t.kind == b.trace[i].t.kind);
    CHECK(a.trace[i].t.label == b.trace[i].t.label);
  }
}

TEST_CASE("flag discipline") {
  RunOptions opts;
  opts.trace = true;
  ExecOutcome e = runTerm("(\\x. x (x (\\w. w))) (\\y. y)", 10000, opts);
  REQUIRE(e.kind == ExecOutcome::Kind::Final);
  for (size_t i = 0; i < e.trace.size(); ++i) {
    if (e.trace[i].t.kind == Transition::Kind::Rewrite) {
      // a rewrite clears the flag and was announced by the previous pass
      CHECK(e.trace[i].flag == RewriteFlag::None);
      REQUIRE(i > 0);
      CHECK(e.trace[i - 1].flag != RewriteFlag::None);
      CHECK(e.trace[i - 1].t.kind == Transition::Kind::Pass);
    }
  }
}

TEST_CASE("every beta is preceded by an eps rewrite overall") {
  Rng rng(55);
  for (int i = 0; i < 60; ++i) {
    Strategy st = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 30, st);
    ExecOutcome e = run(translateTerm(t).g, 200000);
    if (e.kind != ExecOutcome::Kind::Final) continue;
    CHECK(e.epsRewrite >= e.beta);
  }
}

TEST_CASE("structural invariants hold after every transition") {
  // full-graph validation per step is quadratic; keep the runs short
  RunOptions opts;
  opts.validateEachStep = true;
  Rng rng(66);
  for (int i = 0; i < 25; ++i) {
    Strategy st = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 22, st);
    ExecOutcome e = run(translateTerm(t).g, 2500, opts);
    CAPTURE(pretty(t));
    CHECK(e.kind != ExecOutcome::Kind::Stuck);
  }
}

TEST_CASE("box contents always match a box of the initial translation") {
  RunOptions opts;
  opts.boxCheckEachStep = true;
  Rng rng(67);
  for (int i = 0; i < 15; ++i) {
    Strategy st = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 18, st);
    ExecOutcome e = run(translateTerm(t).g, 1500, opts);
    CAPTURE(pretty(t));
    CHECK(e.kind != ExecOutcome::Kind::Stuck);
  }
}

TEST_CASE("stuck is reported on hand-built graphs, not an abort") {
  // a bare unboxed lambda: the initial token reaches it with an empty
  // computation stack and no cell matches
  Graph g;
  LinkId root = g.addLink();
  NodeId lam = g.addNode(NodeKind::Lambda);
  g.edgeLinkToNode(root, lam, 0);
  LinkId body = g.addLink();
  g.edgeNodeToLink(lam, 1, body);
  NodeId c = g.addNode(NodeKind::Contract);
  g.contractAddInput(c, body);
  LinkId w = g.addLink();
  g.edgeNodeToLink(c, 0, w);
  g.edgeLinkToNode(w, lam, 2);
  g.root = root;
  REQUIRE(validate(g).empty());

  ExecOutcome e = run(std::move(g), 10);
  CHECK(e.kind == ExecOutcome::Kind::Stuck);
  CHECK(!e.diagnostic.empty());
}

TEST_CASE("the worked copy instance: three doors over a five-input family") {
  // First sigma of this run copies a box G(1,3) whose doors feed two
  // contractions with five inputs altogether; afterwards the same two
  // contractions have eight.
  TermPtr t = parse("(\\x. \\y. (\\u. u (u (x y))) (\\z. x (y (x z)))) (\\i. i) (\\j. j)",
                    Strategy::Need);
  Machine m(translateTerm(t).g);
  bool seen = false;
  for (int step = 0; step < 100000 && !m.final(); ++step) {
    MachineState& s = m.state();
    if (s.flag == RewriteFlag::Bang && !s.bstack.empty() &&
        s.bstack.back().kind == BSym::Kind::LinkRef) {
      // inspect the copy redex before it fires
      const Graph& g = s.g;
      NodeId bang = g.link(s.pos).down.id;
      const Box& box = g.boxes.at(static_cast<size_t>(g.boxOfBang.at(bang)));
      REQUIRE(box.quests.size() == 3);

      auto familyStats = [&]() {
        std::set<NodeId> family;
        for (NodeId qn : box.quests) {
          // door targets: original door outputs and, after the copy, the
          // copied doors feed the same contractions
          const EndRef up = g.link(g.node(qn).p1).up;
          REQUIRE(up.isNode());
          REQUIRE(g.node(up.id).kind == NodeKind::Contract);
          family.insert(up.id);
        }
        size_t inputs = 0;
        for (NodeId c : family) inputs += static_cast<size_t>(g.node(c).arity());
        return std::pair<size_t, size_t>(inputs, family.size());
      };

      auto [inputsBefore, familyBefore] = familyStats();
      CHECK(inputsBefore == 5);
      CHECK(familyBefore == 2);

      StepOutcome so = m.step();
      REQUIRE(!so.stuck);
      REQUIRE(so.t.label == Label::Sigma);

      auto [inputsAfter, familyAfter] = familyStats();
      CHECK(inputsAfter == 8);
      CHECK(familyAfter == 2);
      seen = true;
      break;
    }
    StepOutcome so = m.step();
    REQUIRE(!so.stuck);
  }
  CHECK(seen);
}

TEST_CASE("opening a two-door box removes exactly four nodes") {
  // (\x. (\z. x x) (\q. q)) (\y. y): the inner function's box has two
  // doors for the two occurrences of x; opening it eliminates the two
  // doors, the principal door and the dereliction below it.
  TermPtr t = parse("(\\x. (\\z. x x) (\\q. q)) (\\y. y)", Strategy::Need);
  Machine m(translateTerm(t).g);
  bool seen = false;
  for (int i = 0; i < 10000 && !m.final(); ++i) {
    MachineState& s = m.state();
    if (s.flag == RewriteFlag::Bang && !s.bstack.empty() &&
        s.bstack.back().kind == BSym::Kind::Diamond) {
      NodeId bang = s.g.link(s.pos).down.id;
      const Box& box = s.g.boxes.at(static_cast<size_t>(s.g.boxOfBang.at(bang)));
      if (box.quests.size() == 2) {
        size_t before = s.g.aliveNodeCount();
        StepOutcome so = m.step();
        REQUIRE(!so.stuck);
        REQUIRE(so.t.kind == Transition::Kind::Rewrite);
        REQUIRE(so.t.label == Label::Eps);
        CHECK(before - s.g.aliveNodeCount() == 4);
        seen = true;
        break;
      }
    }
    REQUIRE(!m.step().stuck);
  }
  CHECK(seen);
}

TEST_CASE("total transitions stay within four per reduction plus one") {
  Rng rng(90);
  int checked = 0;
  for (int i = 0; i < 80 && checked < 40; ++i) {
    Strategy st = static_cast<Strategy>(rng.below(3));
    TermPtr t = genClosedTerm(rng.next(), 30, st);
    EvalOutcome sub = evalSub(t, 20000);
    if (sub.kind != EvalOutcome::Kind::Answer) continue;
    ++checked;
    ExecOutcome ex = run(translateTerm(t).g, 4 * 20000 + 1);
    REQUIRE(ex.kind == ExecOutcome::Kind::Final);
    CHECK(ex.total() <= 4 * sub.steps + 1);
  }
  CHECK(checked >= 20);
}

TEST_CASE("a value needs exactly one transition regardless of fuel slack") {
  ExecOutcome e = runTerm("\\x. x \\w. w");
  CHECK(e.kind == ExecOutcome::Kind::Final);
  ExecOutcome f = runTerm("\\x. x \\w. w", 1);
  CHECK(f.kind == ExecOutcome::Kind::Final);
  CHECK(f.total() == 1);
}
