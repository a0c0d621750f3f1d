#ifndef ONAMA_SIM_HPP
#define ONAMA_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "onama/graph.hpp"
#include "onama/pipeline.hpp"
#include "onama/types.hpp"

namespace onama {

enum class Protocol { Nama, Onama, Oracle };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

// Lossy broadcast: each control packet reaches each neighbor independently
// with probability control_delivery_prob.
struct ChannelModel {
    double control_delivery_prob = 1.0;

    bool operator==(const ChannelModel&) const = default;
};

// Bernoulli arrivals of one data packet per node per slot with probability
// lambda; FIFO queues, unbounded by default (0 = unbounded).
struct TrafficModel {
    double arrival_prob = 1.0;
    std::uint64_t queue_capacity = 0;

    bool operator==(const TrafficModel&) const = default;
};

struct SimulationConfig {
    ConflictGraph topology;
    std::vector<GraphEvent> events;  // sorted by slot
    Protocol protocol = Protocol::Onama;
    PipelineConfig pipeline;
    ChannelModel channel;
    TrafficModel traffic;
    Slot total_slots = 100;
    std::uint64_t rng_seed = 0;
    bool record_active_sets = false;  // keeps per-slot active sets in Metrics

    // Throws std::invalid_argument with a diagnostic naming the bad field.
    void validate() const;
};

struct SlotRecord {
    Slot slot = 0;
    std::uint32_t concurrency = 0;
    std::uint32_t delivered = 0;
    std::uint64_t queue_total = 0;
    std::uint64_t misses = 0;  // pipeline misses surfaced this slot
    std::uint32_t violations_snapshot = 0;
    std::uint32_t violations_instant = 0;
};

struct Metrics {
    std::vector<SlotRecord> slots;
    std::vector<std::uint64_t> delay_samples;  // slots from generation to transmission
    std::uint64_t miss_count = 0;
    std::uint64_t control_drops = 0;  // stale/non-neighbor + malformed
    std::vector<std::set<NodeId>> active_sets;  // filled iff record_active_sets

    double mean_concurrency() const;
    double throughput() const;  // delivered data packets per slot, network-wide
    double mean_delay() const;
    std::uint64_t total_violations_snapshot() const;
    std::uint64_t total_violations_instant() const;
    std::uint64_t total_delivered() const;
};

// One slot's bookkeeping: concurrency, safety violations evaluated against
// the instantaneous graph and the snapshot backing this slot's decision.
void record_slot(Metrics& metrics, Slot slot, const std::set<NodeId>& active,
                 const ConflictGraph& graph_now, const GraphSnapshot& snapshot_used);

// Delivery draw for one packet: returns the reached subset, one uniform
// draw per neighbor in ascending id order.
std::set<NodeId> broadcast_control(const ControlPacket& pkt,
                                   const std::set<NodeId>& neighbors,
                                   const ChannelModel& channel, std::mt19937_64& rng);

// Runs the slot loop. Deterministic per (config, seed): one RNG stream,
// draws ordered as documented in run_simulation's implementation.
Metrics run_simulation(const SimulationConfig& config);

// CSV: header then one row per slot
// (slot,protocol,concurrency,delivered,queue_total,misses,
//  violations_snapshot,violations_instant).
void write_metrics_csv(const Metrics& metrics, Protocol protocol, std::ostream& out);
std::string metrics_csv_string(const Metrics& metrics, Protocol protocol);

}  // namespace onama

#endif
