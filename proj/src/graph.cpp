#include "goim/graph.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace goim {

const char* nodeKindName(NodeKind k) {
  switch (k) {
    case NodeKind::Lambda: return "lambda";
    case NodeKind::AppNeed: return "@need";
    case NodeKind::AppLV: return "@lv";
    case NodeKind::AppRV: return "@rv";
    case NodeKind::Bang: return "!";
    case NodeKind::Quest: return "?";
    case NodeKind::Deref: return "D";
    case NodeKind::Contract: return "C";
  }
  return "?";
}

NodeKind appNodeKind(Strategy s) {
  switch (s) {
    case Strategy::Need: return NodeKind::AppNeed;
    case Strategy::LeftValue: return NodeKind::AppLV;
    case Strategy::RightValue: return NodeKind::AppRV;
  }
  return NodeKind::AppNeed;
}

NodeId addNodeImpl(std::vector<Node>& nodes, NodeKind k) {
  nodes.push_back(Node{k, false, kNone, kNone, kNone, {}});
  return static_cast<NodeId>(nodes.size() - 1);
}

NodeId Graph::addNode(NodeKind k) { return addNodeImpl(nodes, k); }

LinkId Graph::addLink() {
  links.push_back(Link{});
  return static_cast<LinkId>(links.size() - 1);
}

BoxId Graph::addBox(NodeId bang, std::vector<NodeId> quests, std::vector<NodeId> members) {
  boxes.push_back(Box{bang, std::move(quests), std::move(members), false});
  BoxId id = static_cast<BoxId>(boxes.size() - 1);
  boxOfBang[bang] = id;
  return id;
}

LinkId Graph::portLink(NodeId n, int32_t port) const {
  const Node& nd = node(n);
  if (nd.kind == NodeKind::Contract) {
    if (port == 0) return nd.p0;
    return nd.cins[static_cast<size_t>(port - 1)];
  }
  switch (port) {
    case 0: return nd.p0;
    case 1: return nd.p1;
    case 2: return nd.p2;
  }
  return kNone;
}

void Graph::setPortLink(NodeId n, int32_t port, LinkId l) {
  Node& nd = node(n);
  if (nd.kind == NodeKind::Contract && port > 0) {
    nd.cins[static_cast<size_t>(port - 1)] = l;
    return;
  }
  switch (port) {
    case 0: nd.p0 = l; break;
    case 1: nd.p1 = l; break;
    case 2: nd.p2 = l; break;
    default: assert(false);
  }
}

void Graph::edgeNodeToLink(NodeId n, int32_t port, LinkId l) {
  setPortLink(n, port, l);
  link(l).down = EndRef::node(n, port);
}

void Graph::edgeLinkToNode(LinkId l, NodeId n, int32_t port) {
  setPortLink(n, port, l);
  link(l).up = EndRef::node(n, port);
}

void Graph::edgeLinkToLink(LinkId a, LinkId b) {
  link(a).up = EndRef::link(b);
  link(b).down = EndRef::link(a);
}

int32_t Graph::contractAddInput(NodeId c, LinkId l) {
  Node& nd = node(c);
  assert(nd.kind == NodeKind::Contract);
  nd.cins.push_back(l);
  int32_t port = static_cast<int32_t>(nd.cins.size());
  link(l).up = EndRef::node(c, port);
  return port;
}

void Graph::contractRemoveInput(NodeId c, int32_t port) {
  Node& nd = node(c);
  assert(nd.kind == NodeKind::Contract && port >= 1);
  size_t idx = static_cast<size_t>(port - 1);
  assert(idx < nd.cins.size());
  size_t last = nd.cins.size() - 1;
  if (idx != last) {
    nd.cins[idx] = nd.cins[last];
    link(nd.cins[idx]).up = EndRef::node(c, port);
  }
  nd.cins.pop_back();
}

void Graph::moveUpEndpoint(LinkId oldL, LinkId newL) {
  EndRef up = link(oldL).up;
  link(newL).up = up;
  if (up.isNode()) {
    setPortLink(up.id, up.port, newL);
  } else if (up.isLink()) {
    link(up.id).down = EndRef::link(newL);
  }
}

void Graph::moveDownEndpoint(LinkId oldL, LinkId newL) {
  EndRef down = link(oldL).down;
  link(newL).down = down;
  if (down.isNode()) {
    setPortLink(down.id, down.port, newL);
  } else if (down.isLink()) {
    link(down.id).up = EndRef::link(newL);
  }
}

void Graph::killLink(LinkId l) { link(l).dead = true; }

void Graph::killNode(NodeId n) { node(n).dead = true; }

LinkId Graph::resolveLink(LinkId l) const {
  while (l != kNone && link(l).dead && link(l).forward != kNone) l = link(l).forward;
  return l;
}

size_t Graph::aliveNodeCount() const {
  size_t c = 0;
  for (auto& n : nodes)
    if (!n.dead) ++c;
  return c;
}

size_t Graph::aliveLinkCount() const {
  size_t c = 0;
  for (auto& l : links)
    if (!l.dead) ++c;
  return c;
}

bool Graph::hasLinkLinkEdge() const {
  for (auto& l : links)
    if (!l.dead && l.up.isLink()) return true;
  return false;
}

int32_t portCount(const Node& n) {
  switch (n.kind) {
    case NodeKind::Lambda:
    case NodeKind::AppNeed:
    case NodeKind::AppLV:
    case NodeKind::AppRV: return 3;
    case NodeKind::Bang:
    case NodeKind::Quest:
    case NodeKind::Deref: return 2;
    case NodeKind::Contract: return 1 + n.arity();
  }
  return 0;
}

// Whether the given port is an input (edge enters the node) for this kind.
bool portIsInput(NodeKind k, int32_t port) {
  switch (k) {
    case NodeKind::Lambda: return port == 0 || port == 2;  // root side, binder
    case NodeKind::AppNeed:
    case NodeKind::AppLV:
    case NodeKind::AppRV: return port == 0;
    case NodeKind::Bang:
    case NodeKind::Quest:
    case NodeKind::Deref: return port == 0;
    case NodeKind::Contract: return port >= 1;
  }
  return false;
}

std::vector<std::string> validate(const Graph& g, bool requireFused) {
  std::vector<std::string> out;
  auto bad = [&](std::string msg) { out.push_back(std::move(msg)); };

  auto linkOk = [&](LinkId l) {
    return l >= 0 && static_cast<size_t>(l) < g.links.size() && !g.link(l).dead;
  };
  auto nodeOk = [&](NodeId n) {
    return n >= 0 && static_cast<size_t>(n) < g.nodes.size() && !g.node(n).dead;
  };

  // Node ports: wired to live links whose backrefs agree with direction.
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const Node& nd = g.node(n);
    if (nd.dead) continue;
    for (int32_t p = 0; p < portCount(nd); ++p) {
      LinkId l = g.portLink(n, p);
      if (!linkOk(l)) {
        bad("node " + std::to_string(n) + " port " + std::to_string(p) + " unwired or dead");
        continue;
      }
      const EndRef want = EndRef::node(n, p);
      if (portIsInput(nd.kind, p)) {
        if (!(g.link(l).up == want))
          bad("link " + std::to_string(l) + " up endpoint does not match input port of node " +
              std::to_string(n));
      } else {
        if (!(g.link(l).down == want))
          bad("link " + std::to_string(l) + " down endpoint does not match output port of node " +
              std::to_string(n));
      }
    }
  }

  // Links: each is source of <= 1 edge and target of <= 1 edge by
  // representation; check endpoint liveness and interface conditions.
  for (LinkId l = 0; l < static_cast<LinkId>(g.links.size()); ++l) {
    const Link& lk = g.link(l);
    if (lk.dead) continue;
    if (lk.down.isNode() && !nodeOk(lk.down.id))
      bad("link " + std::to_string(l) + " has dead down node");
    if (lk.up.isNode() && !nodeOk(lk.up.id))
      bad("link " + std::to_string(l) + " has dead up node");
    if (lk.down.isLink() && !linkOk(lk.down.id))
      bad("link " + std::to_string(l) + " has dead down link");
    if (lk.up.isLink() && !linkOk(lk.up.id))
      bad("link " + std::to_string(l) + " has dead up link");
    if (requireFused && lk.up.isLink())
      bad("link-link edge from " + std::to_string(l) + " to " + std::to_string(lk.up.id));

    bool isInput = lk.down.isNone();
    bool isRootOrInput = (l == g.root);
    if (isInput && !isRootOrInput)
      bad("link " + std::to_string(l) + " is a target of no edge but not an input");
    bool isOutput = lk.up.isNone();
    bool declaredOutput = std::find(g.outputs.begin(), g.outputs.end(), l) != g.outputs.end();
    if (isOutput != declaredOutput)
      bad("link " + std::to_string(l) + " output status disagrees with interface");
  }
  if (g.root != kNone) {
    if (!linkOk(g.root)) {
      bad("root link dead");
    } else if (!g.link(g.root).down.isNone()) {
      bad("root link is the target of an edge");
    }
  }

  // Boxes: live bang of kind Bang, quests of kind Quest, one principal door,
  // content root reachable, members alive, proper nesting.
  for (BoxId b = 0; b < static_cast<BoxId>(g.boxes.size()); ++b) {
    const Box& bx = g.boxes[static_cast<size_t>(b)];
    if (bx.dead) continue;
    if (!nodeOk(bx.bang) || g.node(bx.bang).kind != NodeKind::Bang) {
      bad("box " + std::to_string(b) + " principal door missing");
      continue;
    }
    std::unordered_set<NodeId> memberSet(bx.members.begin(), bx.members.end());
    for (NodeId m : bx.members)
      if (!nodeOk(m)) bad("box " + std::to_string(b) + " has dead member " + std::to_string(m));
    LinkId rootLink = g.node(bx.bang).p1;
    if (!linkOk(rootLink) || !g.link(rootLink).up.isNode() ||
        !memberSet.count(g.link(rootLink).up.id))
      bad("box " + std::to_string(b) + " content root is not a member");
    for (NodeId q : bx.quests) {
      if (!nodeOk(q) || g.node(q).kind != NodeKind::Quest) {
        bad("box " + std::to_string(b) + " auxiliary door missing");
        continue;
      }
      LinkId qin = g.node(q).p0;
      if (!linkOk(qin) || !g.link(qin).down.isNode() || !memberSet.count(g.link(qin).down.id))
        bad("box " + std::to_string(b) + " door " + std::to_string(q) +
            " is not fed from the box content");
    }
  }
  // Nesting: member sets pairwise disjoint or contained.
  for (size_t i = 0; i < g.boxes.size(); ++i) {
    if (g.boxes[i].dead) continue;
    std::unordered_set<NodeId> a(g.boxes[i].members.begin(), g.boxes[i].members.end());
    for (size_t j = i + 1; j < g.boxes.size(); ++j) {
      if (g.boxes[j].dead) continue;
      size_t common = 0, bsize = g.boxes[j].members.size();
      for (NodeId m : g.boxes[j].members) common += a.count(m);
      if (common != 0 && common != bsize && common != a.size())
        bad("boxes " + std::to_string(i) + " and " + std::to_string(j) +
            " overlap without nesting");
    }
  }
  return out;
}

void fuseLinks(Graph& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (LinkId a = 0; a < static_cast<LinkId>(g.links.size()); ++a) {
      Link& la = g.link(a);
      if (la.dead || !la.up.isLink()) continue;
      LinkId b = la.up.id;
      // a -> b collapses into a; whatever b fed now hangs above a.
      g.moveUpEndpoint(b, a);
      for (auto& o : g.outputs)
        if (o == b) o = a;
      g.killLink(b);
      g.link(b).forward = a;
      changed = true;
    }
  }
}

std::vector<BoxView> boxSubgraphs(const Graph& g) {
  std::vector<BoxView> out;
  for (BoxId b = 0; b < static_cast<BoxId>(g.boxes.size()); ++b) {
    const Box& bx = g.boxes[static_cast<size_t>(b)];
    if (bx.dead) continue;
    BoxView v;
    v.id = b;
    v.rootLink = g.node(bx.bang).p1;
    for (NodeId q : bx.quests) v.outLinks.push_back(g.node(q).p0);
    out.push_back(std::move(v));
  }
  return out;
}

NodeId copyBox(Graph& g, NodeId bangId, LinkId target) {
  auto it = g.boxOfBang.find(bangId);
  if (it == g.boxOfBang.end()) throw std::logic_error("copyBox: node owns no box");
  const Box box = g.boxes[static_cast<size_t>(it->second)];  // copy: g.boxes may grow
  if (box.dead) throw std::logic_error("copyBox: box is dead");

  // The node set to clone: the principal door, the doors, the content.
  std::vector<NodeId> all;
  all.push_back(box.bang);
  all.insert(all.end(), box.quests.begin(), box.quests.end());
  all.insert(all.end(), box.members.begin(), box.members.end());

  std::unordered_map<NodeId, NodeId> nodeMap;
  for (NodeId n : all) {
    if (g.node(n).dead) throw std::logic_error("copyBox: dead node in box");
    nodeMap[n] = g.addNode(g.node(n).kind);
    g.node(nodeMap[n]).cins.resize(g.node(n).cins.size(), kNone);
  }

  // Internal links (both endpoints in the clone set) are cloned; boundary
  // handling below. Door out-links and the bang's in-link are the only
  // boundary links of a well-formed box.
  std::unordered_map<LinkId, LinkId> linkMap;
  auto cloneLink = [&](LinkId l) -> LinkId {
    auto f = linkMap.find(l);
    if (f != linkMap.end()) return f->second;
    LinkId nl = g.addLink();
    linkMap[l] = nl;
    return nl;
  };
  auto inSet = [&](const EndRef& e) { return e.isNode() && nodeMap.count(e.id) != 0; };
  std::unordered_set<NodeId> ownDoors(box.quests.begin(), box.quests.end());

  for (NodeId n : all) {
    const Node& src = g.node(n);
    NodeId dst = nodeMap[n];
    for (int32_t p = 0; p < portCount(src); ++p) {
      LinkId l = g.portLink(n, p);
      const Link& lk = g.link(l);
      bool isIn = portIsInput(src.kind, p);
      if (n == box.bang && p == 0) {
        // Boundary below: hang the copy above the target link.
        g.edgeLinkToNode(target, dst, 0);
        continue;
      }
      if (ownDoors.count(n) && p == 1) {
        // Boundary above: fresh link into the same Contract as the original.
        const EndRef other = lk.up;
        if (!other.isNode() || g.node(other.id).kind != NodeKind::Contract)
          throw std::logic_error("copyBox: auxiliary door not wired to a contraction");
        LinkId nl = g.addLink();
        g.edgeNodeToLink(dst, 1, nl);
        g.contractAddInput(other.id, nl);
        continue;
      }
      // Everything else must be internal to the box.
      const EndRef other = isIn ? lk.down : lk.up;
      if (!inSet(other))
        throw std::logic_error("copyBox: unexpected boundary edge at node " + std::to_string(n) +
                               " port " + std::to_string(p));
      LinkId nl = cloneLink(l);
      if (isIn)
        g.edgeLinkToNode(nl, dst, p);
      else
        g.edgeNodeToLink(dst, p, nl);
    }
  }

  // Clone the box records of the copied box and of every nested box.
  for (NodeId n : all) {
    if (g.node(n).kind != NodeKind::Bang) continue;
    auto bi = g.boxOfBang.find(n);
    if (bi == g.boxOfBang.end()) throw std::logic_error("copyBox: bang without a box record");
    const Box& bx = g.boxes[static_cast<size_t>(bi->second)];
    std::vector<NodeId> q2, m2;
    for (NodeId q : bx.quests) q2.push_back(nodeMap.at(q));
    for (NodeId m : bx.members) m2.push_back(nodeMap.at(m));
    g.addBox(nodeMap.at(n), std::move(q2), std::move(m2));
  }

  return nodeMap.at(box.bang);
}

std::string dumpGraph(const Graph& g) {
  std::ostringstream os;
  os << "root " << g.root << "\n";
  os << "outputs";
  for (LinkId l : g.outputs) os << ' ' << l;
  os << "\n";
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const Node& nd = g.node(n);
    if (nd.dead) continue;
    os << "node " << n << ' ' << nodeKindName(nd.kind);
    if (nd.kind == NodeKind::Contract) os << nd.arity();
    for (int32_t p = 0; p < portCount(nd); ++p) os << ' ' << g.portLink(n, p);
    os << "\n";
  }
  for (LinkId l = 0; l < static_cast<LinkId>(g.links.size()); ++l) {
    const Link& lk = g.link(l);
    if (lk.dead) continue;
    auto end = [&](const EndRef& e) -> std::string {
      if (e.isNone()) return "-";
      if (e.isLink()) return "l" + std::to_string(e.id);
      return "n" + std::to_string(e.id) + ":" + std::to_string(e.port);
    };
    os << "link " << l << ' ' << end(lk.down) << ' ' << end(lk.up) << "\n";
  }
  for (const Box& bx : g.boxes) {
    if (bx.dead) continue;
    os << "box " << bx.bang << " doors";
    for (NodeId q : bx.quests) os << ' ' << q;
    os << " members";
    std::vector<NodeId> ms = bx.members;
    std::sort(ms.begin(), ms.end());
    for (NodeId m : ms) os << ' ' << m;
    os << "\n";
  }
  return os.str();
}

}  // namespace goim
