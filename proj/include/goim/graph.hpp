// Directed graphs of proper nodes and link nodes. Every edge has at least
// one link endpoint; each link is the source of at most one edge and the
// target of at most one edge. Boxes mark duplicable sub-graphs: one Bang
// principal door below, m Quest auxiliary doors above.
//
// Fixed ports per node kind (adjacency is bidirectional; a port stores its
// link, the link stores the (node, port) endpoint back):
//   Lambda:   0 in (root side), 1 body out, 2 binder in
//   App*:     0 in, 1 composition out, 2 argument out
//   Bang:     0 in, 1 out (into the box content root)
//   Quest:    0 in (from the box content), 1 out
//   Deref:    0 in, 1 out
//   Contract: 0 out; inputs are ports 1..arity (dynamic)

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "goim/term.hpp"

namespace goim {

using NodeId = int32_t;
using LinkId = int32_t;
using BoxId = int32_t;
constexpr int32_t kNone = -1;

enum class NodeKind : uint8_t { Lambda, AppNeed, AppLV, AppRV, Bang, Quest, Deref, Contract };

const char* nodeKindName(NodeKind k);
NodeKind appNodeKind(Strategy s);

struct Node;
int32_t portCount(const Node& n);
bool portIsInput(NodeKind k, int32_t port);

// One endpoint of an edge as seen from a link: nothing (interface), a node
// port, or another link (transient, removed by fuseLinks).
struct EndRef {
  enum class Kind : uint8_t { None, Node, Link };
  Kind kind = Kind::None;
  int32_t id = kNone;
  int32_t port = kNone;  // node endpoints only

  static EndRef none() { return {}; }
  static EndRef node(NodeId n, int32_t p) { return {Kind::Node, n, p}; }
  static EndRef link(LinkId l) { return {Kind::Link, l, kNone}; }
  bool isNone() const { return kind == Kind::None; }
  bool isNode() const { return kind == Kind::Node; }
  bool isLink() const { return kind == Kind::Link; }
  bool operator==(const EndRef&) const = default;
};

struct Node {
  NodeKind kind;
  bool dead = false;
  LinkId p0 = kNone, p1 = kNone, p2 = kNone;  // fixed ports
  std::vector<LinkId> cins;                   // Contract inputs (ports 1..n)

  int32_t arity() const { return static_cast<int32_t>(cins.size()); }
};

struct Link {
  bool dead = false;
  EndRef down;            // source of the edge pointing into this link
  EndRef up;              // target of the edge leaving this link
  LinkId forward = kNone;  // set when fusion absorbs this link into another
};

struct Box {
  NodeId bang = kNone;
  std::vector<NodeId> quests;   // auxiliary doors, one per content output
  std::vector<NodeId> members;  // content nodes (nested doors included, own doors excluded)
  bool dead = false;
};

class Graph {
 public:
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<Box> boxes;
  LinkId root = kNone;
  std::vector<LinkId> outputs;
  std::unordered_map<NodeId, BoxId> boxOfBang;

  NodeId addNode(NodeKind k);
  LinkId addLink();
  BoxId addBox(NodeId bang, std::vector<NodeId> quests, std::vector<NodeId> members);

  Node& node(NodeId n) { return nodes[static_cast<size_t>(n)]; }
  const Node& node(NodeId n) const { return nodes[static_cast<size_t>(n)]; }
  Link& link(LinkId l) { return links[static_cast<size_t>(l)]; }
  const Link& link(LinkId l) const { return links[static_cast<size_t>(l)]; }

  LinkId portLink(NodeId n, int32_t port) const;
  void setPortLink(NodeId n, int32_t port, LinkId l);

  // Edge builders; each fixes both directions of the adjacency.
  void edgeNodeToLink(NodeId n, int32_t port, LinkId l);  // node output into l
  void edgeLinkToNode(LinkId l, NodeId n, int32_t port);  // l into node input
  void edgeLinkToLink(LinkId a, LinkId b);                // a into b

  int32_t contractAddInput(NodeId c, LinkId l);           // returns the new port
  void contractRemoveInput(NodeId c, int32_t port);       // swap-removes, fixes backrefs

  // Rewires whatever oldUp.up pointed at so it now hangs above newL.
  void moveUpEndpoint(LinkId oldL, LinkId newL);
  // Rewires whatever oldL.down pointed from so it now feeds newL.
  void moveDownEndpoint(LinkId oldL, LinkId newL);

  void killLink(LinkId l);
  void killNode(NodeId n);

  // Follows fusion forwarding to the live link standing in for l.
  LinkId resolveLink(LinkId l) const;

  size_t aliveNodeCount() const;
  size_t aliveLinkCount() const;

  bool hasLinkLinkEdge() const;
};

// Structural checks; returns one message per violation, empty if valid.
// When requireFused is set, link-link edges are violations too.
std::vector<std::string> validate(const Graph& g, bool requireFused = true);

// Collapses every chain of consecutive links into a single link. Keeps the
// source-side link of each fused pair, so the root always survives.
// Idempotent.
void fuseLinks(Graph& g);

struct BoxView {
  BoxId id;
  LinkId rootLink;               // the Bang's out link
  std::vector<LinkId> outLinks;  // each Quest's in link
};
std::vector<BoxView> boxSubgraphs(const Graph& g);

// Inserts a fresh disjoint copy of the box owned by bangId and hangs it
// above target (target's up edge is redirected to the copy's Bang). Door
// copies are wired into the same Contract nodes as the originals. Returns
// the new Bang. Aborts (std::logic_error) on malformed boxes.
NodeId copyBox(Graph& g, NodeId bangId, LinkId target);

// Deterministic text form of the graph, stable across runs.
std::string dumpGraph(const Graph& g);

}  // namespace goim
