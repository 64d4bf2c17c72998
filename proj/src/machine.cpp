#include "goim/machine.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace goim {

namespace {

const char* dirName(Direction d) { return d == Direction::Up ? "up" : "down"; }

std::string describe(const MachineState& s, const std::string& what) {
  std::ostringstream os;
  os << what << " [pos=" << s.pos << " dir=" << dirName(s.dir)
     << " flag=" << (s.flag == RewriteFlag::None ? "none"
                     : s.flag == RewriteFlag::Lambda ? "lambda" : "bang")
     << " cs=" << s.cstack.size() << " bs=" << s.bstack.size() << "]";
  return os.str();
}

StepOutcome stuck(const MachineState& s, const std::string& why) {
  return {true, {}, describe(s, why)};
}

StepOutcome pass() { return {false, {Transition::Kind::Pass, Label::Eps}, {}}; }
StepOutcome rewrite(Label l) { return {false, {Transition::Kind::Rewrite, l}, {}}; }

bool btopIs(const MachineState& s, BSym::Kind k) {
  return !s.bstack.empty() && s.bstack.back().kind == k;
}

// Pass transitions. The token sits on link s.pos and moves over the node
// adjacent in its travel direction.
StepOutcome passStep(MachineState& s) {
  Graph& g = s.g;
  const EndRef next = s.dir == Direction::Up ? g.link(s.pos).up : g.link(s.pos).down;
  if (next.isNone()) return stuck(s, "token ran off the interface");
  if (next.isLink()) return stuck(s, "link-link edge under the token");
  const NodeId n = next.id;
  const int32_t port = next.port;
  const Node& nd = g.node(n);

  switch (nd.kind) {
    case NodeKind::AppNeed:
      if (s.dir == Direction::Up && port == 0) {
        // To the function; apply once a value shows up there.
        s.cstack.push_back(CSym::At);
        s.bstack.push_back(BSym::diamond());
        s.pos = nd.p1;
        return pass();
      }
      return stuck(s, "no transition at @need node");

    case NodeKind::AppLV:
      if (s.dir == Direction::Up && port == 0) {
        // To the function; a value there must bounce back first.
        s.cstack.push_back(CSym::Star);
        s.pos = nd.p1;
        return pass();
      }
      if (s.dir == Direction::Down && port == 1) {
        // Function done; evaluate the argument to a value.
        if (s.cstack.empty() || s.cstack.back() != CSym::Lam)
          return stuck(s, "@lv expected a function-value marker");
        s.cstack.pop_back();
        s.bstack.push_back(BSym::star());
        s.pos = nd.p2;
        s.dir = Direction::Up;
        return pass();
      }
      if (s.dir == Direction::Down && port == 2) {
        // Argument done; revisit the function and apply.
        s.cstack.push_back(CSym::At);
        s.pos = nd.p1;
        s.dir = Direction::Up;
        return pass();
      }
      return stuck(s, "no transition at @lv node");

    case NodeKind::AppRV:
      if (s.dir == Direction::Up && port == 0) {
        // Argument first.
        s.bstack.push_back(BSym::star());
        s.pos = nd.p2;
        return pass();
      }
      if (s.dir == Direction::Down && port == 2) {
        // Argument done; to the function, apply once a value shows up.
        s.cstack.push_back(CSym::At);
        s.pos = nd.p1;
        s.dir = Direction::Up;
        return pass();
      }
      return stuck(s, "no transition at @rv node");

    case NodeKind::Lambda:
      if (s.dir == Direction::Up && port == 0) {
        if (!s.cstack.empty() && s.cstack.back() == CSym::At) {
          // Proceed into the body and raise the beta flag.
          s.cstack.pop_back();
          s.pos = nd.p1;
          s.flag = RewriteFlag::Lambda;
          return pass();
        }
        if (!s.cstack.empty() && s.cstack.back() == CSym::Star) {
          // A value was asked for; report back.
          s.cstack.back() = CSym::Lam;
          s.dir = Direction::Down;
          return pass();
        }
        return stuck(s, "lambda reached with no pending marker");
      }
      return stuck(s, "no transition at lambda node");

    case NodeKind::Deref:
      if (s.dir == Direction::Up && port == 0) {
        s.bstack.push_back(BSym::diamond());
        s.pos = nd.p1;
        return pass();
      }
      return stuck(s, "no transition at dereliction node");

    case NodeKind::Contract:
      if (s.dir == Direction::Up && port >= 1) {
        s.bstack.push_back(BSym::ref(s.pos));
        s.pos = nd.p0;
        return pass();
      }
      return stuck(s, "no transition at contraction node");

    case NodeKind::Bang:
      if (s.dir == Direction::Up && port == 0) {
        if (btopIs(s, BSym::Kind::Star)) {
          // A completed value; report back.
          s.bstack.back() = BSym::bang();
          s.dir = Direction::Down;
          return pass();
        }
        if (btopIs(s, BSym::Kind::Diamond) || btopIs(s, BSym::Kind::LinkRef)) {
          s.pos = nd.p1;
          s.flag = RewriteFlag::Bang;
          return pass();
        }
        return stuck(s, "box reached with no pending marker");
      }
      return stuck(s, "no transition at bang node");

    case NodeKind::Quest:
      return stuck(s, "token at an auxiliary door");
  }
  return stuck(s, "unhandled node kind");
}

// flag = Lambda: the token has just crossed a lambda into its body link;
// the lambda and the application feeding it annihilate.
StepOutcome rewriteBeta(MachineState& s) {
  Graph& g = s.g;
  const LinkId bodyL = s.pos;
  const EndRef below = g.link(bodyL).down;
  if (!below.isNode() || g.node(below.id).kind != NodeKind::Lambda || below.port != 1)
    return stuck(s, "beta redex: token not on a lambda body link");
  const NodeId lam = below.id;
  const LinkId lamIn = g.node(lam).p0;
  const EndRef fromApp = g.link(lamIn).down;
  if (!fromApp.isNode() || fromApp.port != 1)
    return stuck(s, "beta redex: lambda not fed by an application");
  const NodeId app = fromApp.id;
  const NodeKind ak = g.node(app).kind;
  if (ak != NodeKind::AppNeed && ak != NodeKind::AppLV && ak != NodeKind::AppRV)
    return stuck(s, "beta redex: composition source is not an application");
  const LinkId rootSide = g.node(app).p0;
  const LinkId argL = g.node(app).p2;
  const LinkId binderL = g.node(lam).p2;
  // Both lambda outputs must lead to proper nodes so no link-link edge
  // appears when the pair is removed.
  if (!g.link(bodyL).up.isNode()) return stuck(s, "beta redex: body hangs on the interface");
  if (!g.link(argL).up.isNode()) return stuck(s, "beta redex: argument hangs on the interface");
  if (!g.link(binderL).down.isNode()) return stuck(s, "beta redex: unwired binder");
  if (s.bstack.empty()) return stuck(s, "beta rewrite with an empty box stack");

  g.moveUpEndpoint(bodyL, rootSide);   // rootSide now feeds the body
  g.moveUpEndpoint(argL, binderL);     // the binder wire now feeds the argument
  g.killNode(lam);
  g.killNode(app);
  g.killLink(bodyL);
  g.killLink(lamIn);
  g.killLink(argL);

  s.pos = rootSide;
  s.dir = Direction::Up;
  s.flag = RewriteFlag::None;
  s.bstack.pop_back();
  return rewrite(Label::Beta);
}

// flag = Bang, box-stack top = Diamond: the token has crossed the principal
// door of a box that sits on a dereliction node; all doors and the
// dereliction are eliminated, exposing the content.
StepOutcome rewriteBoxOpen(MachineState& s) {
  Graph& g = s.g;
  const LinkId boxRoot = s.pos;
  const EndRef below = g.link(boxRoot).down;
  if (!below.isNode() || g.node(below.id).kind != NodeKind::Bang || below.port != 1)
    return stuck(s, "box-open redex: token not above a bang node");
  const NodeId bang = below.id;
  auto bit = g.boxOfBang.find(bang);
  if (bit == g.boxOfBang.end()) return stuck(s, "box-open redex: bang owns no box");
  const BoxId boxId = bit->second;
  const Box box = g.boxes[static_cast<size_t>(boxId)];
  const LinkId bangIn = g.node(bang).p0;
  const EndRef belowBang = g.link(bangIn).down;
  if (!belowBang.isNode() || g.node(belowBang.id).kind != NodeKind::Deref)
    return stuck(s, "box-open redex: no dereliction below the box");
  const NodeId deref = belowBang.id;
  const LinkId derefIn = g.node(deref).p0;
  if (!g.link(boxRoot).up.isNode()) return stuck(s, "box-open redex: empty box content");

  // The content keeps the dereliction's input link as its root and the
  // doors' output links as its outputs.
  g.moveUpEndpoint(boxRoot, derefIn);
  g.killLink(boxRoot);
  g.killLink(bangIn);
  g.killNode(bang);
  g.killNode(deref);
  for (NodeId q : box.quests) {
    const LinkId qin = g.node(q).p0;
    const LinkId qout = g.node(q).p1;
    g.moveDownEndpoint(qin, qout);  // content now feeds the door's out link
    g.killLink(qin);
    g.killNode(q);
  }
  g.boxes[static_cast<size_t>(boxId)].dead = true;
  g.boxOfBang.erase(bang);

  s.pos = derefIn;
  s.dir = Direction::Up;
  s.flag = RewriteFlag::None;
  assert(btopIs(s, BSym::Kind::Diamond));
  s.bstack.pop_back();
  return rewrite(Label::Eps);
}

// flag = Bang, box-stack top = a link: that link must be an input of the
// contraction node right below the box; the box is copied, the contraction
// loses the input, the copy hangs above it.
StepOutcome rewriteBoxCopy(MachineState& s) {
  Graph& g = s.g;
  const LinkId boxRoot = s.pos;
  const EndRef below = g.link(boxRoot).down;
  if (!below.isNode() || g.node(below.id).kind != NodeKind::Bang || below.port != 1)
    return stuck(s, "copy redex: token not above a bang node");
  const NodeId bang = below.id;
  if (!g.boxOfBang.count(bang)) return stuck(s, "copy redex: bang owns no box");
  const LinkId target = s.bstack.back().link;
  if (target == kNone || g.link(target).dead) return stuck(s, "copy redex: stale link on the box stack");
  const EndRef tup = g.link(target).up;
  if (!tup.isNode() || g.node(tup.id).kind != NodeKind::Contract || tup.port < 1)
    return stuck(s, "copy redex: box-stack link is not a contraction input");
  const NodeId contract = tup.id;
  const LinkId bangIn = g.node(bang).p0;
  const EndRef belowBang = g.link(bangIn).down;
  if (!belowBang.isNode() || belowBang.id != contract || belowBang.port != 0)
    return stuck(s, "copy redex: contraction does not feed this box");

  g.contractRemoveInput(contract, tup.port);
  copyBox(g, bang, target);

  s.pos = target;
  s.dir = Direction::Up;
  s.flag = RewriteFlag::None;
  s.bstack.pop_back();
  return rewrite(Label::Sigma);
}

}  // namespace

MachineState initState(Graph g) {
  if (g.root == kNone || !g.outputs.empty())
    throw std::invalid_argument("initState: machine graphs have one input and no outputs");
  MachineState s;
  s.g = std::move(g);
  s.pos = s.g.root;
  s.dir = Direction::Up;
  s.flag = RewriteFlag::None;
  s.bstack.push_back(BSym::star());
  return s;
}

bool isFinal(const MachineState& s) {
  return s.pos == s.g.root && s.dir == Direction::Down && s.flag == RewriteFlag::None &&
         s.cstack.empty() && s.bstack.size() == 1 && s.bstack.back().kind == BSym::Kind::Bang;
}

StepOutcome step(MachineState& s) {
  switch (s.flag) {
    case RewriteFlag::None:
      return passStep(s);
    case RewriteFlag::Lambda:
      return rewriteBeta(s);
    case RewriteFlag::Bang:
      if (btopIs(s, BSym::Kind::Diamond)) return rewriteBoxOpen(s);
      if (btopIs(s, BSym::Kind::LinkRef)) return rewriteBoxCopy(s);
      return stuck(s, "bang flag with no matching box-stack top");
  }
  return stuck(s, "corrupt flag");
}

ExecOutcome run(Graph g, uint64_t fuel, const RunOptions& opts) {
  ExecOutcome out;
  MachineState s = initState(std::move(g));

  std::unordered_set<std::string> initialBoxes;
  if (opts.boxCheckEachStep) {
    for (const BoxView& bv : boxSubgraphs(s.g))
      initialBoxes.insert(canonicalBoxContent(s.g, bv.id));
  }

  for (uint64_t i = 0; i < fuel; ++i) {
    if (isFinal(s)) {
      out.kind = ExecOutcome::Kind::Final;
      return out;
    }
    StepOutcome r = step(s);
    if (r.stuck) {
      out.kind = ExecOutcome::Kind::Stuck;
      out.diagnostic = r.diagnostic;
      return out;
    }
    ++out.steps;
    if (r.t.kind == Transition::Kind::Pass) {
      ++out.epsPass;
    } else {
      switch (r.t.label) {
        case Label::Beta: ++out.beta; break;
        case Label::Sigma: ++out.sigma; break;
        case Label::Eps: ++out.epsRewrite; break;
      }
    }
    if (opts.trace)
      out.trace.push_back({out.steps - 1, r.t, s.pos, s.dir, s.flag, s.cstack.size(),
                           s.bstack.size()});
    if (opts.validateEachStep) {
      auto v = validate(s.g, /*requireFused=*/true);
      if (!v.empty()) {
        out.kind = ExecOutcome::Kind::Stuck;
        out.diagnostic = "invariant violation after step " + std::to_string(out.steps) + ": " + v.front();
        return out;
      }
    }
    if (opts.boxCheckEachStep) {
      for (const BoxView& bv : boxSubgraphs(s.g)) {
        if (!initialBoxes.count(canonicalBoxContent(s.g, bv.id))) {
          out.kind = ExecOutcome::Kind::Stuck;
          out.diagnostic = "box content not present in the initial graph after step " +
                           std::to_string(out.steps);
          return out;
        }
      }
    }
  }
  if (isFinal(s)) {
    out.kind = ExecOutcome::Kind::Final;
    return out;
  }
  out.kind = ExecOutcome::Kind::FuelExhausted;
  out.diagnostic = describe(s, "fuel exhausted");
  return out;
}

}  // namespace goim
