#include "onama/dmis.hpp"

#include <algorithm>
#include <utility>

namespace onama {

bool nama_decision(NodeId node, const std::set<NodeId>& neighbors, Slot slot,
                   const PriorityFn& priority) {
    const Priority own = priority(node, slot);
    for (NodeId m : neighbors)
        if (priority(m, slot) > own) return false;
    return true;
}

std::set<NodeId> nama_active_set(const GraphSnapshot& snap, Slot slot,
                                 const PriorityFn& priority) {
    std::set<NodeId> active;
    for (NodeId v : snap.nodes())
        if (nama_decision(v, snap.neighbors(v), slot, priority)) active.insert(v);
    return active;
}

DmisComputation::DmisComputation(NodeId owner, Slot target_slot,
                                 std::set<NodeId> snapshot_neighbors, Slot snapshot_slot)
    : owner_(owner), target_slot_(target_slot), snapshot_slot_(snapshot_slot) {
    for (NodeId n : snapshot_neighbors)
        neighbor_view_.emplace(n, NodeState::Undecided);
}

void DmisComputation::receive(const StateAnnouncement& ann) {
    if (ann.target_slot != target_slot_) {
        ++dropped_;
        return;
    }
    auto it = neighbor_view_.find(ann.sender);
    if (it == neighbor_view_.end()) {
        // Sender is not a neighbor in the snapshot this computation runs on.
        ++dropped_;
        return;
    }
    it->second = ann.state;
}

void DmisComputation::transition(const PriorityFn& priority) {
    if (local_state_ != NodeState::Undecided) return;
    const Priority own = priority(owner_, target_slot_);
    bool higher_active = false;
    bool higher_undecided = false;
    for (const auto& [n, state] : neighbor_view_) {
        if (!(priority(n, target_slot_) > own)) continue;
        if (state == NodeState::Active) higher_active = true;
        else if (state == NodeState::Undecided) higher_undecided = true;
    }
    if (higher_active)
        local_state_ = NodeState::Inactive;
    else if (!higher_undecided)
        local_state_ = NodeState::Active;
    ++phase_;
}

namespace {

// Shared setup for the synchronous runners: node array, per-node neighbor
// index lists, and priorities precomputed once for the slot.
struct SyncLayout {
    std::vector<NodeId> nodes;
    std::vector<Priority> prio;
    std::vector<std::vector<std::uint32_t>> nbrs;
};

SyncLayout make_layout(const GraphSnapshot& snap, Slot slot, const PriorityFn& priority) {
    SyncLayout lay;
    lay.nodes = snap.nodes();
    const std::size_t n = lay.nodes.size();
    std::map<NodeId, std::uint32_t> index;
    for (std::size_t i = 0; i < n; ++i) index[lay.nodes[i]] = static_cast<std::uint32_t>(i);
    lay.prio.resize(n);
    lay.nbrs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lay.prio[i] = priority(lay.nodes[i], slot);
        for (NodeId m : snap.neighbors(lay.nodes[i]))
            lay.nbrs[i].push_back(index.at(m));
    }
    return lay;
}

NodeState next_state(const SyncLayout& lay, const std::vector<NodeState>& cur, std::size_t i) {
    bool higher_active = false;
    bool higher_undecided = false;
    for (std::uint32_t j : lay.nbrs[i]) {
        if (!(lay.prio[j] > lay.prio[i])) continue;
        if (cur[j] == NodeState::Active) higher_active = true;
        else if (cur[j] == NodeState::Undecided) higher_undecided = true;
    }
    if (higher_active) return NodeState::Inactive;
    if (!higher_undecided) return NodeState::Active;
    return NodeState::Undecided;
}

DmisResult collect(const SyncLayout& lay, const std::vector<NodeState>& st,
                   std::uint32_t phases) {
    DmisResult res;
    res.phases = phases;
    for (std::size_t i = 0; i < lay.nodes.size(); ++i)
        if (st[i] == NodeState::Active) res.active.insert(lay.nodes[i]);
    return res;
}

}  // namespace

DmisResult dmis_run_synchronous(const GraphSnapshot& snap, Slot slot,
                                const PriorityFn& priority) {
    SyncLayout lay = make_layout(snap, slot, priority);
    const std::size_t n = lay.nodes.size();
    std::vector<NodeState> cur(n, NodeState::Undecided);
    std::vector<NodeState> next(n);
    std::uint32_t phases = 0;
    std::size_t undecided = n;
    while (undecided > 0) {
        ++phases;
        undecided = 0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = cur[i] == NodeState::Undecided ? next_state(lay, cur, i) : cur[i];
            if (next[i] == NodeState::Undecided) ++undecided;
        }
        std::swap(cur, next);
    }
    return collect(lay, cur, phases);
}

DmisResult dmis_run_synchronous_parallel(const GraphSnapshot& snap, Slot slot,
                                         const PriorityFn& priority) {
    SyncLayout lay = make_layout(snap, slot, priority);
    const std::int64_t n = static_cast<std::int64_t>(lay.nodes.size());
    std::vector<NodeState> cur(n, NodeState::Undecided);
    std::vector<NodeState> next(n);
    std::uint32_t phases = 0;
    std::int64_t undecided = n;
    while (undecided > 0) {
        ++phases;
        undecided = 0;
#pragma omp parallel for schedule(static) reduction(+ : undecided)
        for (std::int64_t i = 0; i < n; ++i) {
            next[i] = cur[i] == NodeState::Undecided
                          ? next_state(lay, cur, static_cast<std::size_t>(i))
                          : cur[i];
            if (next[i] == NodeState::Undecided) ++undecided;
        }
        std::swap(cur, next);
    }
    return collect(lay, cur, phases);
}

std::set<NodeId> greedy_mis_oracle(const GraphSnapshot& snap, Slot slot,
                                   const PriorityFn& priority) {
    std::vector<NodeId> order = snap.nodes();
    std::map<NodeId, Priority> by_id;
    for (NodeId v : order) by_id[v] = priority(v, slot);
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return by_id[a] > by_id[b]; });
    std::set<NodeId> mis;
    for (NodeId v : order) {
        bool blocked = false;
        for (NodeId m : snap.neighbors(v))
            if (mis.count(m)) { blocked = true; break; }
        if (!blocked) mis.insert(v);
    }
    return mis;
}

}  // namespace onama
