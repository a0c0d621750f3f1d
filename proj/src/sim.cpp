#include "onama/sim.hpp"

#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "onama/dmis.hpp"

namespace onama {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::Nama: return "NAMA";
        case Protocol::Onama: return "ONAMA";
        case Protocol::Oracle: return "ORACLE";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "NAMA") return Protocol::Nama;
    if (s == "ONAMA") return Protocol::Onama;
    if (s == "ORACLE") return Protocol::Oracle;
    throw std::invalid_argument("unknown protocol: " + s);
}

void SimulationConfig::validate() const {
    if (channel.control_delivery_prob < 0.0 || channel.control_delivery_prob > 1.0)
        throw std::invalid_argument("channel.control_delivery_prob must be in [0,1]");
    if (traffic.arrival_prob < 0.0 || traffic.arrival_prob > 1.0)
        throw std::invalid_argument("traffic.arrival_prob must be in [0,1]");
    if (total_slots < 1) throw std::invalid_argument("total_slots must be >= 1");
    pipeline.validate();
    if (protocol == Protocol::Onama) {
        for (NodeId v : topology.nodes())
            if (topology.neighbors(v).size() > pipeline.neighbor_capacity_l)
                throw std::invalid_argument("node " + std::to_string(v) +
                                            " degree exceeds neighbor capacity L");
    }
    // Replay the event list on a scratch copy so malformed scenarios fail
    // before slot 0.
    ConflictGraph scratch = topology;
    for (std::size_t i = 0; i + 1 < events.size(); ++i)
        if (events[i].slot > events[i + 1].slot)
            throw std::invalid_argument("events must be sorted by slot");
    for (const GraphEvent& ev : events) apply_graph_event(scratch, ev);
}

double Metrics::mean_concurrency() const {
    if (slots.empty()) return 0.0;
    double sum = 0;
    for (const SlotRecord& r : slots) sum += r.concurrency;
    return sum / static_cast<double>(slots.size());
}

double Metrics::throughput() const {
    if (slots.empty()) return 0.0;
    return static_cast<double>(total_delivered()) / static_cast<double>(slots.size());
}

double Metrics::mean_delay() const {
    if (delay_samples.empty()) return 0.0;
    double sum = 0;
    for (std::uint64_t d : delay_samples) sum += static_cast<double>(d);
    return sum / static_cast<double>(delay_samples.size());
}

std::uint64_t Metrics::total_violations_snapshot() const {
    std::uint64_t n = 0;
    for (const SlotRecord& r : slots) n += r.violations_snapshot;
    return n;
}

std::uint64_t Metrics::total_violations_instant() const {
    std::uint64_t n = 0;
    for (const SlotRecord& r : slots) n += r.violations_instant;
    return n;
}

std::uint64_t Metrics::total_delivered() const {
    std::uint64_t n = 0;
    for (const SlotRecord& r : slots) n += r.delivered;
    return n;
}

void record_slot(Metrics& metrics, Slot slot, const std::set<NodeId>& active,
                 const ConflictGraph& graph_now, const GraphSnapshot& snapshot_used) {
    SlotRecord rec;
    rec.slot = slot;
    rec.concurrency = static_cast<std::uint32_t>(active.size());
    for (auto it = active.begin(); it != active.end(); ++it)
        for (auto jt = std::next(it); jt != active.end(); ++jt) {
            if (graph_now.has_node(*it) && graph_now.has_edge(*it, *jt))
                ++rec.violations_instant;
            if (snapshot_used.has_node(*it) && snapshot_used.has_edge(*it, *jt))
                ++rec.violations_snapshot;
        }
    metrics.slots.push_back(rec);
}

namespace {

// Uniform in [0,1) from the top 53 bits; avoids distribution objects whose
// draw counts vary between standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

std::set<NodeId> broadcast_control(const ControlPacket& pkt,
                                   const std::set<NodeId>& neighbors,
                                   const ChannelModel& channel, std::mt19937_64& rng) {
    (void)pkt;
    std::set<NodeId> reached;
    for (NodeId n : neighbors)
        if (uniform01(rng) < channel.control_delivery_prob) reached.insert(n);
    return reached;
}

Metrics run_simulation(const SimulationConfig& config) {
    config.validate();

    ConflictGraph graph = config.topology;
    Metrics metrics;
    std::mt19937_64 rng(config.rng_seed);
    const PriorityFn priority = hash_priority_fn();
    const std::uint32_t M = config.pipeline.depth_m;
    const std::uint32_t G = config.pipeline.snapshot_period_g;

    std::map<NodeId, PipelineEngine> engines;
    std::map<NodeId, std::deque<Slot>> queues;
    std::map<Slot, GraphSnapshot> sim_snaps;  // snapshot history (ONAMA accounting)
    std::uint64_t removed_engine_drops = 0;
    std::uint64_t removed_engine_misses = 0;
    std::uint64_t prev_miss_total = 0;

    if (config.protocol == Protocol::Onama)
        for (NodeId v : graph.nodes())
            engines.emplace(v, PipelineEngine(v, config.pipeline, priority));
    for (NodeId v : graph.nodes()) queues.emplace(v, std::deque<Slot>());

    std::size_t next_event = 0;

    for (Slot t = 0; t < config.total_slots; ++t) {
        // 1. Topology events due this slot.
        while (next_event < config.events.size() && config.events[next_event].slot == t) {
            const GraphEvent& ev = config.events[next_event++];
            apply_graph_event(graph, ev);
            if (ev.kind == GraphEvent::Kind::AddNode) {
                queues.emplace(ev.a, std::deque<Slot>());
                if (config.protocol == Protocol::Onama)
                    engines.emplace(ev.a, PipelineEngine(ev.a, config.pipeline, priority));
            } else if (ev.kind == GraphEvent::Kind::RemoveNode) {
                queues.erase(ev.a);
                auto it = engines.find(ev.a);
                if (it != engines.end()) {
                    removed_engine_drops +=
                        it->second.stale_drops() + it->second.malformed_drops();
                    removed_engine_misses += it->second.miss_count();
                    prev_miss_total -= it->second.miss_count();
                    engines.erase(it);
                }
            }
        }

        // 2. Traffic generation, ascending node id.
        for (auto& [v, q] : queues) {
            if (uniform01(rng) < config.traffic.arrival_prob) {
                if (config.traffic.queue_capacity == 0 ||
                    q.size() < config.traffic.queue_capacity)
                    q.push_back(t);
            }
        }

        // 3. Protocol decision.
        std::set<NodeId> active;
        std::optional<GraphSnapshot> snap_used;
        switch (config.protocol) {
            case Protocol::Nama: {
                snap_used.emplace(graph, t);
                active = nama_active_set(*snap_used, t, priority);
                break;
            }
            case Protocol::Oracle: {
                snap_used.emplace(graph, t);
                active = dmis_run_synchronous(*snap_used, t, priority).active;
                break;
            }
            case Protocol::Onama: {
                if (t % G == 0) sim_snaps.emplace(t, GraphSnapshot(graph, t));
                // Each node opens/advances its pipeline and emits one
                // aggregated control packet.
                std::vector<ControlPacket> packets;
                packets.reserve(engines.size());
                for (auto& [v, eng] : engines) packets.push_back(eng.start_slot(graph, t));
                // Lossy broadcast, ascending (sender, receiver) order.
                for (const ControlPacket& pkt : packets) {
                    if (!graph.has_node(pkt.sender)) continue;
                    std::set<NodeId> reached =
                        broadcast_control(pkt, graph.neighbors(pkt.sender), config.channel, rng);
                    for (NodeId r : reached) {
                        auto it = engines.find(r);
                        if (it != engines.end()) it->second.receive(pkt);
                    }
                }
                for (auto& [v, eng] : engines)
                    if (eng.lookup(t) == NodeState::Active) active.insert(v);
                // Accounting snapshot: the one backing this slot's decisions.
                if (t >= M) {
                    auto it = sim_snaps.upper_bound(t - M);
                    if (it != sim_snaps.begin()) snap_used.emplace(std::prev(it)->second);
                    // Drop history no future slot can reference.
                    auto needed = sim_snaps.upper_bound(t + 1 - M);
                    if (needed != sim_snaps.begin())
                        sim_snaps.erase(sim_snaps.begin(), std::prev(needed));
                }
                if (!snap_used) snap_used.emplace(graph, t);  // warm-up
                break;
            }
        }

        // 4. Data subslot: each active node transmits its head-of-line packet.
        std::uint32_t delivered = 0;
        for (NodeId v : active) {
            auto it = queues.find(v);
            if (it == queues.end() || it->second.empty()) continue;
            metrics.delay_samples.push_back(t - it->second.front());
            it->second.pop_front();
            ++delivered;
        }

        // 5. Record.
        record_slot(metrics, t, active, graph, *snap_used);
        SlotRecord& rec = metrics.slots.back();
        rec.delivered = delivered;
        for (const auto& [v, q] : queues) rec.queue_total += q.size();
        std::uint64_t miss_total = 0;
        for (const auto& [v, eng] : engines) miss_total += eng.miss_count();
        rec.misses = miss_total - prev_miss_total;
        prev_miss_total = miss_total;
        if (config.record_active_sets) metrics.active_sets.push_back(active);
    }

    metrics.miss_count = prev_miss_total + removed_engine_misses;
    metrics.control_drops = removed_engine_drops;
    for (const auto& [v, eng] : engines)
        metrics.control_drops += eng.stale_drops() + eng.malformed_drops();
    return metrics;
}

void write_metrics_csv(const Metrics& metrics, Protocol protocol, std::ostream& out) {
    out << "slot,protocol,concurrency,delivered,queue_total,misses,"
           "violations_snapshot,violations_instant\n";
    const char* proto = to_string(protocol);
    for (const SlotRecord& r : metrics.slots)
        out << r.slot << ',' << proto << ',' << r.concurrency << ',' << r.delivered << ','
            << r.queue_total << ',' << r.misses << ',' << r.violations_snapshot << ','
            << r.violations_instant << '\n';
}

std::string metrics_csv_string(const Metrics& metrics, Protocol protocol) {
    std::ostringstream ss;
    write_metrics_csv(metrics, protocol, ss);
    return ss.str();
}

}  // namespace onama
