#include "goim/translate.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace goim {

namespace {

using Annots = std::vector<std::pair<std::string, LinkId>>;

struct Piece {
  LinkId root = kNone;
  Annots outs;  // occurrence order
};

struct CtxPiece {
  LinkId root = kNone;
  LinkId holeRoot = kNone;
  Annots holeOuts;
  Annots outs;
};

struct Builder {
  Graph& g;

  Piece buildTerm(const TermPtr& t) {
    if (auto* v = asVar(t)) {
      // A bare wire: root link into output link. Fused away at the end.
      LinkId r = g.addLink();
      LinkId o = g.addLink();
      g.edgeLinkToLink(r, o);
      return Piece{r, {{v->name, o}}};
    }
    if (auto* a = asAbs(t)) return buildAbs(a->binder, a->body, /*boxed=*/true);
    if (auto* a = asApp(t)) {
      Piece pf = buildTerm(a->fun);
      Piece pa = buildTerm(a->arg);
      NodeId app = g.addNode(appNodeKind(a->strat));
      LinkId nr = g.addLink();
      g.edgeLinkToNode(nr, app, 0);
      LinkId compL = g.addLink();
      g.edgeNodeToLink(app, 1, compL);
      NodeId d = g.addNode(NodeKind::Deref);
      g.edgeLinkToNode(compL, d, 0);
      g.edgeNodeToLink(d, 1, pf.root);
      g.edgeNodeToLink(app, 2, pa.root);
      Piece out{nr, std::move(pf.outs)};
      out.outs.insert(out.outs.end(), pa.outs.begin(), pa.outs.end());
      return out;
    }
    auto* s = asSub(t);
    Piece pb = buildTerm(s->body);
    return wrapSub(std::move(pb), s->binder, s->bound);
  }

  // One Contract per binder; under a binder, exactly the body's occurrences
  // of that name feed it.
  Piece buildAbs(const std::string& binder, const TermPtr& body, bool boxed) {
    size_t memberStart = g.nodes.size();
    Piece pb = buildTerm(body);
    NodeId lam = g.addNode(NodeKind::Lambda);
    g.edgeNodeToLink(lam, 1, pb.root);
    NodeId c = g.addNode(NodeKind::Contract);
    Annots rest;
    for (auto& [name, l] : pb.outs) {
      if (name == binder)
        g.contractAddInput(c, l);
      else
        rest.push_back({name, l});
    }
    LinkId w = g.addLink();
    g.edgeNodeToLink(c, 0, w);
    g.edgeLinkToNode(w, lam, 2);
    LinkId lamIn = g.addLink();
    g.edgeLinkToNode(lamIn, lam, 0);
    if (!boxed) return Piece{lamIn, std::move(rest)};

    size_t memberEnd = g.nodes.size();
    NodeId bang = g.addNode(NodeKind::Bang);
    g.edgeNodeToLink(bang, 1, lamIn);
    LinkId bangIn = g.addLink();
    g.edgeLinkToNode(bangIn, bang, 0);
    Piece out{bangIn, {}};
    std::vector<NodeId> quests;
    for (auto& [name, l] : rest) {
      NodeId q = g.addNode(NodeKind::Quest);
      g.edgeLinkToNode(l, q, 0);
      LinkId qo = g.addLink();
      g.edgeNodeToLink(q, 1, qo);
      quests.push_back(q);
      out.outs.push_back({name, qo});
    }
    std::vector<NodeId> members;
    members.reserve(memberEnd - memberStart);
    for (size_t i = memberStart; i < memberEnd; ++i) members.push_back(static_cast<NodeId>(i));
    g.addBox(bang, std::move(quests), std::move(members));
    return out;
  }

  Piece wrapSub(Piece pb, const std::string& binder, const TermPtr& bound) {
    NodeId c = g.addNode(NodeKind::Contract);
    Annots rest;
    for (auto& [name, l] : pb.outs) {
      if (name == binder)
        g.contractAddInput(c, l);
      else
        rest.push_back({name, l});
    }
    Piece pu = buildTerm(bound);
    g.edgeNodeToLink(c, 0, pu.root);
    Piece out{pb.root, std::move(rest)};
    out.outs.insert(out.outs.end(), pu.outs.begin(), pu.outs.end());
    return out;
  }

  // Answer-wrapped value without the outermost box: the shape left behind
  // once the value's box has been consumed while searching the function
  // position of a left-to-right application.
  Piece buildOpenValue(const TermPtr& answer) {
    std::vector<std::pair<std::string, TermPtr>> subs;
    TermPtr core = answer;
    while (auto* s = asSub(core)) {
      subs.push_back({s->binder, s->bound});
      core = s->body;
    }
    auto* lam = asAbs(core);
    if (!lam) throw std::invalid_argument("open value translation needs an abstraction core");
    Piece p = buildAbs(lam->binder, lam->body, /*boxed=*/false);
    for (auto it = subs.rbegin(); it != subs.rend(); ++it)
      p = wrapSub(std::move(p), it->first, it->second);
    return p;
  }

  CtxPiece buildCtx(const std::vector<Frame>& frames, const VarMultiset& m) {
    CtxPiece cur;
    cur.holeRoot = g.addLink();
    cur.root = cur.holeRoot;
    for (auto& [name, k] : m.counts()) {
      for (int i = 0; i < k; ++i) {
        LinkId al = g.addLink();
        cur.holeOuts.push_back({name, al});
        cur.outs.push_back({name, al});
      }
    }
    for (size_t i = frames.size(); i > 0; --i) cur = wrapFrame(std::move(cur), frames[i - 1]);
    return cur;
  }

  CtxPiece wrapFrame(CtxPiece cur, const Frame& frame) {
    if (auto* n = std::get_if<NeedAppL>(&frame)) return wrapAppFunHole(std::move(cur), NodeKind::AppNeed, n->arg);
    if (auto* l = std::get_if<LVAppL>(&frame)) return wrapAppFunHole(std::move(cur), NodeKind::AppLV, l->arg);
    if (auto* lr = std::get_if<LVAppR>(&frame)) {
      // fun @lv <.> : the function answer has already been visited, so it
      // appears without its box and without a dereliction node.
      Piece pv = buildOpenValue(lr->fun);
      NodeId app = g.addNode(NodeKind::AppLV);
      LinkId nr = g.addLink();
      g.edgeLinkToNode(nr, app, 0);
      g.edgeNodeToLink(app, 1, pv.root);
      g.edgeNodeToLink(app, 2, cur.root);
      CtxPiece out{nr, cur.holeRoot, std::move(cur.holeOuts), std::move(pv.outs)};
      out.outs.insert(out.outs.end(), cur.outs.begin(), cur.outs.end());
      return out;
    }
    if (auto* rr = std::get_if<RVAppR>(&frame)) {
      // fun @rv <.> : the function has not been visited; full translation.
      Piece pf = buildTerm(rr->fun);
      NodeId app = g.addNode(NodeKind::AppRV);
      LinkId nr = g.addLink();
      g.edgeLinkToNode(nr, app, 0);
      LinkId compL = g.addLink();
      g.edgeNodeToLink(app, 1, compL);
      NodeId d = g.addNode(NodeKind::Deref);
      g.edgeLinkToNode(compL, d, 0);
      g.edgeNodeToLink(d, 1, pf.root);
      g.edgeNodeToLink(app, 2, cur.root);
      CtxPiece out{nr, cur.holeRoot, std::move(cur.holeOuts), std::move(pf.outs)};
      out.outs.insert(out.outs.end(), cur.outs.begin(), cur.outs.end());
      return out;
    }
    if (auto* rl = std::get_if<RVAppL>(&frame)) {
      // <.> @rv arg : the argument answer keeps its boxes.
      Piece pa = buildTerm(rl->arg);
      NodeId app = g.addNode(NodeKind::AppRV);
      LinkId nr = g.addLink();
      g.edgeLinkToNode(nr, app, 0);
      LinkId compL = g.addLink();
      g.edgeNodeToLink(app, 1, compL);
      NodeId d = g.addNode(NodeKind::Deref);
      g.edgeLinkToNode(compL, d, 0);
      g.edgeNodeToLink(d, 1, cur.root);
      g.edgeNodeToLink(app, 2, pa.root);
      CtxPiece out{nr, cur.holeRoot, std::move(cur.holeOuts), std::move(cur.outs)};
      out.outs.insert(out.outs.end(), pa.outs.begin(), pa.outs.end());
      return out;
    }
    if (auto* s = std::get_if<ESubFrame>(&frame)) {
      NodeId c = g.addNode(NodeKind::Contract);
      Annots rest;
      for (auto& [name, l] : cur.outs) {
        if (name == s->binder)
          g.contractAddInput(c, l);
        else
          rest.push_back({name, l});
      }
      Piece pu = buildTerm(s->bound);
      g.edgeNodeToLink(c, 0, pu.root);
      cur.outs = std::move(rest);
      cur.outs.insert(cur.outs.end(), pu.outs.begin(), pu.outs.end());
      return cur;
    }
    auto* lk = std::get_if<LookupFrame>(&frame);
    assert(lk);
    // E'[x][x <- <.>] : the hole is the bound-term position; the marked
    // occurrence of x is E''s own hole, left as a bare link.
    VarMultiset mx;
    mx.add(lk->binder);
    CtxPiece inner = buildCtx(lk->marked->frames, mx);
    assert(inner.holeOuts.size() == 1);
    LinkId al = inner.holeOuts[0].second;
    g.killLink(al);  // never wired: x cannot be captured inside E'
    NodeId c = g.addNode(NodeKind::Contract);
    g.contractAddInput(c, inner.holeRoot);
    Annots rest;
    for (auto& [name, l] : inner.outs) {
      if (l == al) continue;
      if (name == lk->binder)
        g.contractAddInput(c, l);
      else
        rest.push_back({name, l});
    }
    g.edgeNodeToLink(c, 0, cur.root);
    CtxPiece out{inner.root, cur.holeRoot, std::move(cur.holeOuts), std::move(rest)};
    out.outs.insert(out.outs.end(), cur.outs.begin(), cur.outs.end());
    return out;
  }

  CtxPiece wrapAppFunHole(CtxPiece cur, NodeKind app, const TermPtr& arg) {
    Piece pa = buildTerm(arg);
    NodeId a = g.addNode(app);
    LinkId nr = g.addLink();
    g.edgeLinkToNode(nr, a, 0);
    LinkId compL = g.addLink();
    g.edgeNodeToLink(a, 1, compL);
    NodeId d = g.addNode(NodeKind::Deref);
    g.edgeLinkToNode(compL, d, 0);
    g.edgeNodeToLink(d, 1, cur.root);
    g.edgeNodeToLink(a, 2, pa.root);
    CtxPiece out{nr, cur.holeRoot, std::move(cur.holeOuts), std::move(cur.outs)};
    out.outs.insert(out.outs.end(), pa.outs.begin(), pa.outs.end());
    return out;
  }
};

// Interface ordering: annotation-sorted, then fused, then re-annotated.
Annots finishInterface(Graph& g, LinkId root, Annots outs) {
  std::stable_sort(outs.begin(), outs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  g.root = root;
  g.outputs.clear();
  for (auto& [_, l] : outs) g.outputs.push_back(l);
  fuseLinks(g);
  for (size_t i = 0; i < outs.size(); ++i) outs[i].second = g.outputs[i];
  return outs;
}

// Appends src into dst, remapping ids; returns (nodeOffset, linkOffset).
std::pair<int32_t, int32_t> importGraph(Graph& dst, const Graph& src) {
  int32_t noff = static_cast<int32_t>(dst.nodes.size());
  int32_t loff = static_cast<int32_t>(dst.links.size());
  auto ml = [&](LinkId l) { return l == kNone ? kNone : l + loff; };
  auto me = [&](EndRef e) {
    if (e.isNode()) e.id += noff;
    if (e.isLink()) e.id += loff;
    return e;
  };
  for (const Node& n : src.nodes) {
    Node c = n;
    c.p0 = ml(n.p0);
    c.p1 = ml(n.p1);
    c.p2 = ml(n.p2);
    for (auto& l : c.cins) l = ml(l);
    dst.nodes.push_back(std::move(c));
  }
  for (const Link& l : src.links) {
    Link c = l;
    c.down = me(l.down);
    c.up = me(l.up);
    dst.links.push_back(std::move(c));
  }
  for (const Box& b : src.boxes) {
    if (b.dead) continue;
    std::vector<NodeId> q, m;
    for (NodeId x : b.quests) q.push_back(x + noff);
    for (NodeId x : b.members) m.push_back(x + noff);
    dst.addBox(b.bang + noff, std::move(q), std::move(m));
  }
  return {noff, loff};
}

// Wires plug outputs onto the context's attachment links, matched by name.
void wireHole(Graph& g, const GraphCtx& ctx, LinkId plugRoot, const Annots& plugOuts,
              int32_t loff) {
  g.edgeLinkToLink(ctx.holeRoot, plugRoot);
  std::vector<bool> used(plugOuts.size(), false);
  for (auto& [name, al] : ctx.holeOuts) {
    bool found = false;
    for (size_t i = 0; i < plugOuts.size(); ++i) {
      if (used[i] || plugOuts[i].first != name) continue;
      used[i] = true;
      g.edgeLinkToLink(plugOuts[i].second + loff, al);
      found = true;
      break;
    }
    if (!found)
      throw std::invalid_argument("compose: hole expects an occurrence of '" + name +
                                  "' the plug does not provide");
  }
  for (size_t i = 0; i < plugOuts.size(); ++i)
    if (!used[i])
      throw std::invalid_argument("compose: plug provides an occurrence of '" +
                                  plugOuts[i].first + "' the hole does not expect");
}

}  // namespace

TermGraph translateTerm(const TermPtr& t) {
  TermGraph tg;
  Builder b{tg.g};
  Piece p = b.buildTerm(t);
  tg.outputs = finishInterface(tg.g, p.root, std::move(p.outs));
  return tg;
}

GraphCtx translateEvalCtx(const EvalCtx& ctx, const VarMultiset& m) {
  GraphCtx out;
  Builder b{out.g};
  CtxPiece p = b.buildCtx(ctx.frames, m);
  out.holeRoot = p.holeRoot;
  out.holeOuts = std::move(p.holeOuts);
  out.outputs = finishInterface(out.g, p.root, std::move(p.outs));
  return out;
}

GraphCtx translateAnswerCtx(const AnswerCtx& a, const VarMultiset& m) {
  EvalCtx ctx;
  for (size_t i = a.subs.size(); i > 0; --i)
    ctx.frames.push_back(ESubFrame{a.subs[i - 1].first, a.subs[i - 1].second});
  return translateEvalCtx(ctx, m);
}

TermGraph compose(const GraphCtx& ctx, const TermGraph& tg) {
  TermGraph out;
  out.g = ctx.g;
  auto [noff, loff] = importGraph(out.g, tg.g);
  (void)noff;
  wireHole(out.g, ctx, tg.g.root + loff, tg.outputs, loff);
  Annots outs = ctx.outputs;
  out.outputs = finishInterface(out.g, ctx.g.root, std::move(outs));
  return out;
}

GraphCtx composeCtx(const GraphCtx& outer, const GraphCtx& inner) {
  GraphCtx out;
  out.g = outer.g;
  auto [noff, loff] = importGraph(out.g, inner.g);
  (void)noff;
  wireHole(out.g, outer, inner.g.root + loff, inner.outputs, loff);
  out.holeRoot = inner.holeRoot + loff;
  for (auto [name, l] : inner.holeOuts) out.holeOuts.push_back({name, l + loff});
  Annots outs = outer.outputs;
  out.outputs = finishInterface(out.g, outer.g.root, std::move(outs));
  // Fusion may have absorbed the recorded hole links into their sources.
  out.holeRoot = out.g.resolveLink(out.holeRoot);
  for (auto& [_, l] : out.holeOuts) l = out.g.resolveLink(l);
  return out;
}

}  // namespace goim
