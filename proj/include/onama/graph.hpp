#ifndef ONAMA_GRAPH_HPP
#define ONAMA_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "onama/types.hpp"

namespace onama {

// Undirected conflict graph: nodes are contention entities, edges mark pairs
// that interfere if activated simultaneously. No self-loops, symmetric
// adjacency. What a node "means" (node or link of the real network) is the
// caller's business.
class ConflictGraph {
public:
    void add_node(NodeId id);
    void remove_node(NodeId id);  // also removes incident edges
    void add_edge(NodeId a, NodeId b);
    void remove_edge(NodeId a, NodeId b);

    bool has_node(NodeId id) const { return adj_.count(id) != 0; }
    bool has_edge(NodeId a, NodeId b) const;
    const std::set<NodeId>& neighbors(NodeId id) const;

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const;
    std::vector<NodeId> nodes() const;

    bool operator==(const ConflictGraph&) const = default;

private:
    // Ordered containers keep iteration deterministic.
    std::map<NodeId, std::set<NodeId>> adj_;
};

// Immutable copy of a graph's adjacency at a given slot. All queries against
// one snapshot are mutually consistent.
class GraphSnapshot {
public:
    GraphSnapshot(const ConflictGraph& graph, Slot taken_at)
        : taken_at_(taken_at), graph_(graph) {}

    Slot taken_at() const { return taken_at_; }
    bool has_node(NodeId id) const { return graph_.has_node(id); }
    bool has_edge(NodeId a, NodeId b) const { return graph_.has_edge(a, b); }
    const std::set<NodeId>& neighbors(NodeId id) const { return graph_.neighbors(id); }
    std::size_t node_count() const { return graph_.node_count(); }
    std::size_t edge_count() const { return graph_.edge_count(); }
    std::vector<NodeId> nodes() const { return graph_.nodes(); }
    const ConflictGraph& graph() const { return graph_; }

private:
    Slot taken_at_;
    ConflictGraph graph_;
};

inline GraphSnapshot snapshot(const ConflictGraph& graph, Slot slot) {
    return GraphSnapshot(graph, slot);
}

// A single topology change, due at `slot`.
struct GraphEvent {
    enum class Kind { AddNode, RemoveNode, AddEdge, RemoveEdge };
    Slot slot = 0;
    Kind kind = Kind::AddNode;
    NodeId a = 0;
    NodeId b = 0;  // unused for node events

    bool operator==(const GraphEvent&) const = default;
};

// Applies one event in place. Throws std::invalid_argument on events that
// reference unknown nodes, duplicate an existing edge, or remove a missing
// node/edge (malformed scenario file).
void apply_graph_event(ConflictGraph& graph, const GraphEvent& event);

// Topology file: `node <id>` / `edge <a> <b>` records, `#` comments.
ConflictGraph parse_topology(std::istream& in);
ConflictGraph load_topology(const std::string& path);
void write_topology(const ConflictGraph& graph, std::ostream& out);
void save_topology(const ConflictGraph& graph, const std::string& path);

// Event file: `<slot> add-node|remove-node|add-edge|remove-edge <args>`.
// Returned list is sorted by slot (stable for equal slots).
std::vector<GraphEvent> parse_events(std::istream& in);
std::vector<GraphEvent> load_events(const std::string& path);

}  // namespace onama

#endif
