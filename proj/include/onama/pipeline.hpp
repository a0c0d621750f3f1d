#ifndef ONAMA_PIPELINE_HPP
#define ONAMA_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "onama/dmis.hpp"
#include "onama/graph.hpp"
#include "onama/priority.hpp"
#include "onama/types.hpp"

namespace onama {

struct PipelineConfig {
    std::uint32_t depth_m = 8;           // lookahead in slots
    std::uint32_t snapshot_period_g = 1; // slots between snapshots
    std::uint32_t subslots_s = 2;        // 1 data subslot + (S-1) control subslots
    std::uint32_t neighbor_capacity_l = 1024;

    bool operator==(const PipelineConfig&) const = default;

    // Throws std::invalid_argument on out-of-range parameters.
    void validate() const;

    // Per-node footprint implied by the knobs: one neighbor bit per live
    // snapshot, one state entry per (neighbor, in-flight computation).
    std::uint64_t max_live_snapshots() const {
        return (depth_m + snapshot_period_g - 1) / snapshot_period_g;
    }
    std::uint64_t snapshot_bits() const { return max_live_snapshots() * neighbor_capacity_l; }
    std::uint64_t state_entries() const {
        return static_cast<std::uint64_t>(neighbor_capacity_l) * depth_m;
    }
};

// Aggregated control packet: the sender's states for all in-flight target
// slots, entry k covering target base_slot + 1 + k.
struct ControlPacket {
    NodeId sender = 0;
    Slot base_slot = 0;
    std::vector<NodeState> states;

    bool operator==(const ControlPacket&) const = default;

    // Wire format: sender (4 bytes BE), base_slot (8 bytes BE), count
    // (1 byte), then states packed 2 bits each MSB-first (00 UNDECIDED,
    // 01 ACTIVE, 10 INACTIVE), zero-padded to a byte boundary.
    std::vector<std::uint8_t> encode() const;
    static std::optional<ControlPacket> decode(std::span<const std::uint8_t> bytes);
};

// Per-node pipelined precomputation engine: M in-flight DMIS computations,
// snapshots of the owner's neighborhood every G slots, and a ring of
// finalized decisions served at their deadline.
class PipelineEngine {
public:
    PipelineEngine(NodeId owner, PipelineConfig config, PriorityFn priority);

    // Advances to `slot` (must be called once per slot, in increasing order
    // from 0): retires computations whose deadline passed, snapshots the
    // owner's neighborhood when due, opens the computation for slot+M, steps
    // every undecided in-flight computation one phase, and returns the
    // aggregated control packet.
    ControlPacket start_slot(const ConflictGraph& graph, Slot slot);

    // Routes each packet entry to the matching in-flight computation.
    // Entries for unknown or finished targets are ignored; packets whose
    // state vector exceeds M are dropped whole.
    void receive(const ControlPacket& pkt);

    // The activation decision for the current slot. Warm-up slots (< M) and
    // computations still UNDECIDED at deadline yield INACTIVE; the latter
    // also bumps miss_count.
    NodeState lookup(Slot slot);

    NodeId owner() const { return owner_; }
    const PipelineConfig& config() const { return cfg_; }
    std::uint64_t miss_count() const { return miss_count_; }
    std::uint64_t malformed_drops() const { return malformed_drops_; }
    std::uint64_t stale_drops() const;  // non-neighbor/stale announcements

    std::size_t inflight_count() const { return inflight_.size(); }
    std::size_t live_snapshot_count() const { return neighbor_snaps_.size(); }
    std::vector<Slot> inflight_targets() const;

    // Snapshot slot backing the computation for `target`: the largest
    // snapshot slot <= target - M.
    Slot snapshot_slot_for(Slot target) const;

private:
    NodeId owner_;
    PipelineConfig cfg_;
    PriorityFn priority_;
    std::map<Slot, DmisComputation> inflight_;           // keyed by target slot
    std::map<Slot, NodeState> finalized_;                // schedule ring
    std::map<Slot, std::set<NodeId>> neighbor_snaps_;    // snapshot slot -> owner's neighbors
    std::uint64_t miss_count_ = 0;
    std::uint64_t malformed_drops_ = 0;
    std::uint64_t retired_drops_ = 0;
    std::optional<Slot> current_slot_;

    void prune_snapshots();
};

}  // namespace onama

#endif
