#ifndef ONAMA_DMIS_HPP
#define ONAMA_DMIS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "onama/graph.hpp"
#include "onama/priority.hpp"
#include "onama/types.hpp"

namespace onama {

// One state announcement, as carried (aggregated) in control packets.
// Priorities are never exchanged; receivers recompute them locally.
struct StateAnnouncement {
    NodeId sender = 0;
    Slot target_slot = 0;
    NodeState state = NodeState::Undecided;
};

// NAMA's local rule: active iff own priority beats every conflicting
// neighbor's. Needs no message exchange.
bool nama_decision(NodeId node, const std::set<NodeId>& neighbors, Slot slot,
                   const PriorityFn& priority);

std::set<NodeId> nama_active_set(const GraphSnapshot& snap, Slot slot,
                                 const PriorityFn& priority);

// One node's in-flight MIS computation for one target slot. The neighbor
// view holds the last-known state per snapshot neighbor, initially
// UNDECIDED for all of them. local_state changes at most once.
class DmisComputation {
public:
    DmisComputation(NodeId owner, Slot target_slot, std::set<NodeId> snapshot_neighbors,
                    Slot snapshot_slot);

    NodeId owner() const { return owner_; }
    Slot target_slot() const { return target_slot_; }
    Slot snapshot_slot() const { return snapshot_slot_; }
    std::uint32_t phase() const { return phase_; }
    NodeState local_state() const { return local_state_; }
    const std::map<NodeId, NodeState>& neighbor_view() const { return neighbor_view_; }
    std::uint64_t dropped_announcements() const { return dropped_; }

    // Records a neighbor's announced state. Announcements from nodes outside
    // the snapshot neighbor set are dropped and counted (stale topology).
    void receive(const StateAnnouncement& ann);

    // One phase step. A node joins the MIS when no higher-priority neighbor
    // is still ACTIVE or UNDECIDED in its view; it bows out when a
    // higher-priority neighbor is ACTIVE. Terminal states pass through
    // unchanged.
    void transition(const PriorityFn& priority);

private:
    NodeId owner_;
    Slot target_slot_;
    Slot snapshot_slot_;
    std::uint32_t phase_ = 0;
    NodeState local_state_ = NodeState::Undecided;
    std::map<NodeId, NodeState> neighbor_view_;
    std::uint64_t dropped_ = 0;
};

struct DmisResult {
    std::set<NodeId> active;
    std::uint32_t phases = 0;
};

// Runs DMIS with perfectly reliable, synchronous state exchange until no
// node is UNDECIDED. Serial reference implementation.
DmisResult dmis_run_synchronous(const GraphSnapshot& snap, Slot slot,
                                const PriorityFn& priority);

// Same computation with the per-phase node updates parallelized (OpenMP).
// Produces identical output to the serial reference.
DmisResult dmis_run_synchronous_parallel(const GraphSnapshot& snap, Slot slot,
                                         const PriorityFn& priority);

// Centralized ground truth: visits nodes in strictly decreasing priority
// order, adding each node iff no already-added neighbor.
std::set<NodeId> greedy_mis_oracle(const GraphSnapshot& snap, Slot slot,
                                   const PriorityFn& priority);

}  // namespace onama

#endif
