#include "goim/canon.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace goim {

namespace {

struct Canon {
  const Graph& g;
  const std::unordered_set<NodeId>* restrict;  // nullptr: whole graph
  std::unordered_map<LinkId, int32_t> linkRank;
  std::unordered_map<NodeId, int32_t> nodeRank;
  std::deque<NodeId> queue;
  int32_t nextLink = 0, nextNode = 0;

  Canon(const Graph& graph, const std::unordered_set<NodeId>* r) : g(graph), restrict(r) {}

  bool allowed(NodeId n) const { return !restrict || restrict->count(n); }

  void rankLink(LinkId l) {
    if (l == kNone) return;
    if (linkRank.emplace(l, nextLink).second) ++nextLink;
  }

  void discover(NodeId n) {
    if (!allowed(n)) return;
    if (nodeRank.emplace(n, nextNode).second) {
      ++nextNode;
      queue.push_back(n);
    }
  }

  void follow(LinkId l, NodeId from) {
    const Link& lk = g.link(l);
    if (lk.up.isNode() && lk.up.id != from) discover(lk.up.id);
    if (lk.down.isNode() && lk.down.id != from) discover(lk.down.id);
  }

  void run(LinkId entry) {
    rankLink(entry);
    const Link& e = g.link(entry);
    if (e.up.isNode()) discover(e.up.id);
    while (!queue.empty()) {
      NodeId n = queue.front();
      queue.pop_front();
      const Node& nd = g.node(n);
      if (nd.kind == NodeKind::Contract) {
        // Output first; inputs are ranked from their source side only, so
        // their stored order never influences the canonical form.
        rankLink(nd.p0);
        follow(nd.p0, n);
        continue;
      }
      for (int32_t p = 0; p < portCount(nd); ++p) {
        LinkId l = g.portLink(n, p);
        rankLink(l);
        follow(l, n);
      }
    }
  }

  std::string lr(LinkId l) const {
    auto it = linkRank.find(l);
    return it == linkRank.end() ? "?" : std::to_string(it->second);
  }

  void emitNodes(std::ostringstream& os) const {
    std::vector<std::pair<int32_t, NodeId>> order;
    order.reserve(nodeRank.size());
    for (auto& [n, r] : nodeRank) order.push_back({r, n});
    std::sort(order.begin(), order.end());
    for (auto& [r, n] : order) {
      const Node& nd = g.node(n);
      os << 'n' << r << '=' << nodeKindName(nd.kind);
      if (nd.kind == NodeKind::Contract) {
        os << nd.arity() << '(' << lr(nd.p0) << ";in:";
        std::vector<std::string> ins;
        for (LinkId l : nd.cins) ins.push_back(lr(l));
        std::sort(ins.begin(), ins.end(), [](const std::string& a, const std::string& b) {
          if (a.size() != b.size()) return a.size() < b.size();
          return a < b;
        });
        for (size_t i = 0; i < ins.size(); ++i) os << (i ? "," : "") << ins[i];
        os << ')';
      } else {
        os << '(';
        for (int32_t p = 0; p < portCount(nd); ++p)
          os << (p ? "," : "") << lr(g.portLink(n, p));
        os << ')';
      }
      os << ';';
    }
  }

  void emitBoxes(std::ostringstream& os) const {
    std::vector<std::pair<int32_t, BoxId>> order;
    for (BoxId b = 0; b < static_cast<BoxId>(g.boxes.size()); ++b) {
      const Box& bx = g.boxes[static_cast<size_t>(b)];
      if (bx.dead) continue;
      auto it = nodeRank.find(bx.bang);
      if (it == nodeRank.end()) continue;  // unreachable box
      order.push_back({it->second, b});
    }
    std::sort(order.begin(), order.end());
    for (auto& [r, b] : order) {
      const Box& bx = g.boxes[static_cast<size_t>(b)];
      os << 'b' << r << "[d:";
      std::vector<int32_t> doors;
      for (NodeId q : bx.quests) {
        auto it = nodeRank.find(q);
        if (it != nodeRank.end()) doors.push_back(it->second);
      }
      std::sort(doors.begin(), doors.end());
      for (size_t i = 0; i < doors.size(); ++i) os << (i ? "," : "") << doors[i];
      os << "|m:";
      std::vector<int32_t> ms;
      for (NodeId m : bx.members) {
        auto it = nodeRank.find(m);
        if (it != nodeRank.end()) ms.push_back(it->second);
      }
      std::sort(ms.begin(), ms.end());
      for (size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms[i];
      os << "];";
    }
  }
};

}  // namespace

std::string canonicalForm(const Graph& g) {
  assert(!g.hasLinkLinkEdge());
  Canon c(g, nullptr);
  c.run(g.root);
  std::ostringstream os;
  os << "i(" << c.lr(g.root);
  for (LinkId l : g.outputs) os << ',' << c.lr(l);
  os << ");";
  c.emitNodes(os);
  c.emitBoxes(os);
  return os.str();
}

bool graphEq(const Graph& a, const Graph& b) {
  if (a.outputs.size() != b.outputs.size()) return false;
  return canonicalForm(a) == canonicalForm(b);
}

std::string canonicalBoxContent(const Graph& g, BoxId b) {
  const Box& bx = g.boxes[static_cast<size_t>(b)];
  std::unordered_set<NodeId> members(bx.members.begin(), bx.members.end());
  Canon c(g, &members);
  LinkId rootLink = g.node(bx.bang).p1;
  c.run(rootLink);
  std::ostringstream os;
  os << "i(" << c.lr(rootLink) << ";out:";
  std::vector<std::string> outs;
  for (NodeId q : bx.quests) outs.push_back(c.lr(g.node(q).p0));
  std::sort(outs.begin(), outs.end(), [](const std::string& x, const std::string& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  for (size_t i = 0; i < outs.size(); ++i) os << (i ? "," : "") << outs[i];
  os << ");";
  c.emitNodes(os);
  c.emitBoxes(os);
  return os.str();
}

}  // namespace goim
