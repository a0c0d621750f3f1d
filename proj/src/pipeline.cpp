#include "onama/pipeline.hpp"

#include <stdexcept>
#include <utility>

namespace onama {

void PipelineConfig::validate() const {
    if (depth_m < 1) throw std::invalid_argument("M must be >= 1");
    if (depth_m > 255) throw std::invalid_argument("M must be <= 255 (1-byte packet count)");
    if (snapshot_period_g < 1) throw std::invalid_argument("G must be >= 1");
    if (snapshot_period_g > depth_m) throw std::invalid_argument("G must be <= M");
    if (subslots_s < 2) throw std::invalid_argument("S must be >= 2");
    if (neighbor_capacity_l < 1) throw std::invalid_argument("L must be >= 1");
}

std::vector<std::uint8_t> ControlPacket::encode() const {
    std::vector<std::uint8_t> out;
    out.reserve(13 + (states.size() * 2 + 7) / 8);
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(sender >> (8 * (3 - i))));
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(base_slot >> (8 * (7 - i))));
    out.push_back(static_cast<std::uint8_t>(states.size()));
    std::uint8_t byte = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        byte |= static_cast<std::uint8_t>(states[k]) << (6 - 2 * (k % 4));
        if (k % 4 == 3) {
            out.push_back(byte);
            byte = 0;
        }
    }
    if (states.size() % 4 != 0) out.push_back(byte);
    return out;
}

std::optional<ControlPacket> ControlPacket::decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 13) return std::nullopt;
    ControlPacket pkt;
    for (int i = 0; i < 4; ++i) pkt.sender = (pkt.sender << 8) | bytes[i];
    for (int i = 4; i < 12; ++i) pkt.base_slot = (pkt.base_slot << 8) | bytes[i];
    const std::size_t count = bytes[12];
    if (bytes.size() != 13 + (count * 2 + 7) / 8) return std::nullopt;
    pkt.states.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::uint8_t v = (bytes[13 + k / 4] >> (6 - 2 * (k % 4))) & 0x3;
        if (v > 2) return std::nullopt;
        pkt.states.push_back(static_cast<NodeState>(v));
    }
    // Padding bits must be zero.
    if (count % 4 != 0) {
        std::uint8_t tail = bytes.back();
        std::uint8_t mask = static_cast<std::uint8_t>(0xFF >> (2 * (count % 4)));
        if (tail & mask) return std::nullopt;
    }
    return pkt;
}

PipelineEngine::PipelineEngine(NodeId owner, PipelineConfig config, PriorityFn priority)
    : owner_(owner), cfg_(config), priority_(std::move(priority)) {
    cfg_.validate();
}

ControlPacket PipelineEngine::start_slot(const ConflictGraph& graph, Slot slot) {
    if (current_slot_ && slot != *current_slot_ + 1)
        throw std::logic_error("start_slot must be called once per slot, in order");
    const bool first_call = !current_slot_.has_value();
    current_slot_ = slot;

    // Retire computations whose deadline has arrived; lookup() serves them.
    for (auto it = inflight_.begin(); it != inflight_.end() && it->first <= slot;) {
        retired_drops_ += it->second.dropped_announcements();
        finalized_[it->first] = it->second.local_state();
        it = inflight_.erase(it);
    }

    if (first_call || slot % cfg_.snapshot_period_g == 0) {
        std::set<NodeId> nbrs;
        if (graph.has_node(owner_)) nbrs = graph.neighbors(owner_);
        if (nbrs.size() > cfg_.neighbor_capacity_l)
            throw std::runtime_error("neighbor table overflow: degree " +
                                     std::to_string(nbrs.size()) + " exceeds L=" +
                                     std::to_string(cfg_.neighbor_capacity_l));
        neighbor_snaps_[slot] = std::move(nbrs);
    }

    const Slot target = slot + cfg_.depth_m;
    const Slot snap_slot = snapshot_slot_for(target);
    inflight_.emplace(target, DmisComputation(owner_, target, neighbor_snaps_.at(snap_slot),
                                              snap_slot));
    prune_snapshots();

    for (auto& [t, comp] : inflight_)
        if (comp.local_state() == NodeState::Undecided) comp.transition(priority_);

    ControlPacket pkt;
    pkt.sender = owner_;
    pkt.base_slot = inflight_.begin()->first - 1;
    for (const auto& [t, comp] : inflight_) pkt.states.push_back(comp.local_state());
    return pkt;
}

void PipelineEngine::receive(const ControlPacket& pkt) {
    if (pkt.states.size() > cfg_.depth_m) {
        ++malformed_drops_;
        return;
    }
    for (std::size_t k = 0; k < pkt.states.size(); ++k) {
        const Slot target = pkt.base_slot + 1 + k;
        auto it = inflight_.find(target);
        if (it == inflight_.end()) continue;  // finished or not yet opened here
        it->second.receive(StateAnnouncement{pkt.sender, target, pkt.states[k]});
    }
}

NodeState PipelineEngine::lookup(Slot slot) {
    finalized_.erase(finalized_.begin(), finalized_.lower_bound(slot));
    auto it = finalized_.find(slot);
    if (it == finalized_.end()) return NodeState::Inactive;  // warm-up
    if (it->second == NodeState::Undecided) {
        // Deadline fallback: an unconverged computation never activates.
        ++miss_count_;
        it->second = NodeState::Inactive;
    }
    return it->second;
}

std::uint64_t PipelineEngine::stale_drops() const {
    std::uint64_t total = retired_drops_;
    for (const auto& [t, comp] : inflight_) total += comp.dropped_announcements();
    return total;
}

std::vector<Slot> PipelineEngine::inflight_targets() const {
    std::vector<Slot> out;
    out.reserve(inflight_.size());
    for (const auto& [t, comp] : inflight_) out.push_back(t);
    return out;
}

Slot PipelineEngine::snapshot_slot_for(Slot target) const {
    const Slot limit = target - cfg_.depth_m;
    auto it = neighbor_snaps_.upper_bound(limit);
    if (it == neighbor_snaps_.begin())
        throw std::logic_error("no snapshot available for target slot");
    return std::prev(it)->first;
}

void PipelineEngine::prune_snapshots() {
    // Binding always selects the largest snapshot slot <= the current slot,
    // and the current slot only grows, so only the newest snapshot can ever
    // be consulted again. In-flight computations carry their own copy of
    // their neighbor view, so dropping older snapshots cannot affect them.
    while (neighbor_snaps_.size() > 1) neighbor_snaps_.erase(neighbor_snaps_.begin());
}

}  // namespace onama
