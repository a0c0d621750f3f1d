#include "onama/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace onama {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

}  // namespace

void ConflictGraph::add_node(NodeId id) {
    auto [it, inserted] = adj_.try_emplace(id);
    if (!inserted) fail("add-node: node " + std::to_string(id) + " already exists");
}

void ConflictGraph::remove_node(NodeId id) {
    auto it = adj_.find(id);
    if (it == adj_.end()) fail("remove-node: unknown node " + std::to_string(id));
    for (NodeId n : it->second) adj_[n].erase(id);
    adj_.erase(it);
}

void ConflictGraph::add_edge(NodeId a, NodeId b) {
    if (a == b) fail("add-edge: self-loop on node " + std::to_string(a));
    auto ia = adj_.find(a);
    auto ib = adj_.find(b);
    if (ia == adj_.end() || ib == adj_.end())
        fail("add-edge: unknown endpoint in (" + std::to_string(a) + "," + std::to_string(b) + ")");
    if (ia->second.count(b))
        fail("add-edge: duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    ia->second.insert(b);
    ib->second.insert(a);
}

void ConflictGraph::remove_edge(NodeId a, NodeId b) {
    auto ia = adj_.find(a);
    if (ia == adj_.end() || !ia->second.count(b))
        fail("remove-edge: no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    ia->second.erase(b);
    adj_[b].erase(a);
}

bool ConflictGraph::has_edge(NodeId a, NodeId b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) != 0;
}

const std::set<NodeId>& ConflictGraph::neighbors(NodeId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) fail("neighbors: unknown node " + std::to_string(id));
    return it->second;
}

std::size_t ConflictGraph::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& [id, ns] : adj_) degree_sum += ns.size();
    return degree_sum / 2;
}

std::vector<NodeId> ConflictGraph::nodes() const {
    std::vector<NodeId> out;
    out.reserve(adj_.size());
    for (const auto& [id, ns] : adj_) out.push_back(id);
    return out;
}

void apply_graph_event(ConflictGraph& graph, const GraphEvent& event) {
    switch (event.kind) {
        case GraphEvent::Kind::AddNode: graph.add_node(event.a); break;
        case GraphEvent::Kind::RemoveNode: graph.remove_node(event.a); break;
        case GraphEvent::Kind::AddEdge: graph.add_edge(event.a, event.b); break;
        case GraphEvent::Kind::RemoveEdge: graph.remove_edge(event.a, event.b); break;
    }
}

ConflictGraph parse_topology(std::istream& in) {
    ConflictGraph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "node") {
            NodeId id;
            if (!(ls >> id)) fail("topology line " + std::to_string(lineno) + ": bad node record");
            g.add_node(id);
        } else if (kw == "edge") {
            NodeId a, b;
            if (!(ls >> a >> b)) fail("topology line " + std::to_string(lineno) + ": bad edge record");
            g.add_edge(a, b);
        } else {
            fail("topology line " + std::to_string(lineno) + ": unknown record '" + kw + "'");
        }
    }
    return g;
}

ConflictGraph load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open topology file: " + path);
    return parse_topology(in);
}

void write_topology(const ConflictGraph& graph, std::ostream& out) {
    for (NodeId id : graph.nodes()) out << "node " << id << "\n";
    for (NodeId id : graph.nodes())
        for (NodeId n : graph.neighbors(id))
            if (id < n) out << "edge " << id << " " << n << "\n";
}

void save_topology(const ConflictGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("cannot write topology file: " + path);
    write_topology(graph, out);
}

std::vector<GraphEvent> parse_events(std::istream& in) {
    std::vector<GraphEvent> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        GraphEvent ev;
        std::string kw;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!(ls >> ev.slot)) fail("event line " + std::to_string(lineno) + ": bad slot");
        if (!(ls >> kw)) fail("event line " + std::to_string(lineno) + ": missing kind");
        bool needs_b = false;
        if (kw == "add-node") ev.kind = GraphEvent::Kind::AddNode;
        else if (kw == "remove-node") ev.kind = GraphEvent::Kind::RemoveNode;
        else if (kw == "add-edge") { ev.kind = GraphEvent::Kind::AddEdge; needs_b = true; }
        else if (kw == "remove-edge") { ev.kind = GraphEvent::Kind::RemoveEdge; needs_b = true; }
        else fail("event line " + std::to_string(lineno) + ": unknown kind '" + kw + "'");
        if (!(ls >> ev.a)) fail("event line " + std::to_string(lineno) + ": missing node id");
        if (needs_b && !(ls >> ev.b)) fail("event line " + std::to_string(lineno) + ": missing second node id");
        events.push_back(ev);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const GraphEvent& x, const GraphEvent& y) { return x.slot < y.slot; });
    return events;
}

std::vector<GraphEvent> load_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open event file: " + path);
    return parse_events(in);
}

}  // namespace onama
