#include "doctest.h"

#include <map>
#include <random>
#include <set>
#include <vector>

#include "onama/dmis.hpp"
#include "onama/topology_gen.hpp"

using namespace onama;

namespace {

// Test-only priority injection: rank table, id as tie-break.
PriorityFn table_priority(std::map<NodeId, std::uint64_t> ranks) {
    return [ranks = std::move(ranks)](NodeId id, Slot) {
        return Priority{ranks.at(id), id};
    };
}

bool is_independent(const GraphSnapshot& snap, const std::set<NodeId>& s) {
    for (NodeId a : s)
        for (NodeId b : s)
            if (a < b && snap.has_edge(a, b)) return false;
    return true;
}

bool is_maximal(const GraphSnapshot& snap, const std::set<NodeId>& s) {
    for (NodeId v : snap.nodes()) {
        if (s.count(v)) continue;
        bool covered = false;
        for (NodeId m : snap.neighbors(v))
            if (s.count(m)) { covered = true; break; }
        if (!covered) return false;
    }
    return true;
}

// Exhaustive check for small graphs: the set is independent and no strict
// superset is. Independent of every implementation path under test.
bool brute_force_is_mis(const GraphSnapshot& snap, const std::set<NodeId>& s) {
    if (!is_independent(snap, s)) return false;
    std::vector<NodeId> nodes = snap.nodes();
    REQUIRE(nodes.size() <= 20);
    for (NodeId v : nodes) {
        if (s.count(v)) continue;
        std::set<NodeId> bigger = s;
        bigger.insert(v);
        if (is_independent(snap, bigger)) return false;
    }
    return true;
}

// The two-level star fixture with explicit rank-by-id priorities: node k has
// priority rank k.
struct RankedFixture {
    ConflictGraph graph;
    PriorityFn priority = table_priority({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}});
};

RankedFixture ranked_fixture() {
    RankedFixture fx;
    for (NodeId v = 1; v <= 7; ++v) fx.graph.add_node(v);
    fx.graph.add_edge(7, 5);
    fx.graph.add_edge(7, 6);
    fx.graph.add_edge(5, 1);
    fx.graph.add_edge(5, 2);
    fx.graph.add_edge(6, 3);
    fx.graph.add_edge(6, 4);
    return fx;
}

}  // namespace

TEST_CASE("nama_decision") {
    const PriorityFn prio = hash_priority_fn();

    SUBCASE("isolated node wins vacuously") {
        CHECK(nama_decision(3, {}, 17, prio));
    }

    SUBCASE("exactly one of two adjacent nodes wins") {
        for (Slot t = 0; t < 50; ++t) {
            bool a = nama_decision(1, {2}, t, prio);
            bool b = nama_decision(2, {1}, t, prio);
            CHECK(a != b);
        }
    }

    SUBCASE("two-level star: only the hub wins") {
        RankedFixture fx = ranked_fixture();
        GraphSnapshot snap = snapshot(fx.graph, 0);
        for (NodeId v = 1; v <= 7; ++v)
            CHECK(nama_decision(v, snap.neighbors(v), 0, fx.priority) == (v == 7));
    }
}

TEST_CASE("DmisComputation::receive") {
    DmisComputation comp(1, 10, {2, 3}, 0);

    SUBCASE("updates the view") {
        comp.receive({2, 10, NodeState::Active});
        CHECK(comp.neighbor_view().at(2) == NodeState::Active);
        CHECK(comp.neighbor_view().at(3) == NodeState::Undecided);
    }

    SUBCASE("duplicate announcement is idempotent") {
        comp.receive({2, 10, NodeState::Active});
        auto view = comp.neighbor_view();
        comp.receive({2, 10, NodeState::Active});
        CHECK(comp.neighbor_view() == view);
        CHECK(comp.dropped_announcements() == 0);
    }

    SUBCASE("non-snapshot neighbor dropped and counted") {
        comp.receive({9, 10, NodeState::Active});
        CHECK(comp.neighbor_view().count(9) == 0);
        CHECK(comp.dropped_announcements() == 1);
    }

    SUBCASE("wrong target slot dropped") {
        comp.receive({2, 11, NodeState::Active});
        CHECK(comp.neighbor_view().at(2) == NodeState::Undecided);
        CHECK(comp.dropped_announcements() == 1);
    }
}

TEST_CASE("DmisComputation::transition") {
    const PriorityFn prio = table_priority({{1, 1}, {2, 2}, {3, 3}});

    SUBCASE("local maximum joins immediately") {
        DmisComputation comp(3, 0, {1, 2}, 0);
        comp.transition(prio);
        CHECK(comp.local_state() == NodeState::Active);
        CHECK(comp.phase() == 1);
    }

    SUBCASE("higher ACTIVE neighbor forces INACTIVE") {
        DmisComputation comp(1, 0, {2}, 0);
        comp.receive({2, 0, NodeState::Active});
        comp.transition(prio);
        CHECK(comp.local_state() == NodeState::Inactive);
    }

    SUBCASE("higher UNDECIDED neighbor defers the decision") {
        DmisComputation comp(1, 0, {2}, 0);
        comp.transition(prio);
        CHECK(comp.local_state() == NodeState::Undecided);
        CHECK(comp.phase() == 1);
    }

    SUBCASE("higher neighbor INACTIVE, rest lower: joins") {
        DmisComputation comp(2, 0, {1, 3}, 0);
        comp.receive({3, 0, NodeState::Inactive});
        comp.transition(prio);
        CHECK(comp.local_state() == NodeState::Active);
    }

    SUBCASE("terminal states pass through unchanged") {
        DmisComputation comp(3, 0, {1, 2}, 0);
        comp.transition(prio);
        REQUIRE(comp.local_state() == NodeState::Active);
        const auto phase = comp.phase();
        comp.transition(prio);
        CHECK(comp.local_state() == NodeState::Active);
        CHECK(comp.phase() == phase);
    }
}

TEST_CASE("state machine is monotone under random traffic") {
    std::mt19937_64 rng(23);
    const PriorityFn prio = hash_priority_fn();
    for (int trial = 0; trial < 200; ++trial) {
        std::set<NodeId> nbrs;
        for (NodeId v = 1; v <= 6; ++v)
            if (rng() % 2) nbrs.insert(v);
        DmisComputation comp(0, trial, nbrs, 0);
        int changes = 0;
        NodeState prev = comp.local_state();
        for (int step = 0; step < 20; ++step) {
            if (rng() % 2 && !nbrs.empty()) {
                auto it = nbrs.begin();
                std::advance(it, rng() % nbrs.size());
                comp.receive({*it, static_cast<Slot>(trial),
                              static_cast<NodeState>(rng() % 3)});
            } else {
                comp.transition(prio);
            }
            if (comp.local_state() != prev) {
                ++changes;
                CHECK(prev == NodeState::Undecided);
                prev = comp.local_state();
            }
        }
        CHECK(changes <= 1);
    }
}

TEST_CASE("dmis_run_synchronous on fixed cases") {
    SUBCASE("empty graph") {
        ConflictGraph g;
        DmisResult res = dmis_run_synchronous(snapshot(g, 0), 0, hash_priority_fn());
        CHECK(res.active.empty());
        CHECK(res.phases == 0);
    }

    SUBCASE("single node") {
        ConflictGraph g;
        g.add_node(5);
        DmisResult res = dmis_run_synchronous(snapshot(g, 0), 0, hash_priority_fn());
        CHECK(res.active == std::set<NodeId>{5});
        CHECK(res.phases == 1);
    }

    SUBCASE("3-path with middle priority highest") {
        ConflictGraph g;
        g.add_node(1);
        g.add_node(2);
        g.add_node(3);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        const PriorityFn prio = table_priority({{1, 10}, {2, 30}, {3, 20}});
        DmisResult res = dmis_run_synchronous(snapshot(g, 0), 0, prio);
        CHECK(res.active == std::set<NodeId>{2});
        CHECK(res.phases == 2);
        CHECK(brute_force_is_mis(snapshot(g, 0), res.active));
    }

    SUBCASE("two-level star: hub plus all four leaves, 3 phases") {
        RankedFixture fx = ranked_fixture();
        GraphSnapshot snap = snapshot(fx.graph, 0);
        DmisResult res = dmis_run_synchronous(snap, 0, fx.priority);
        CHECK(res.active == std::set<NodeId>{7, 1, 2, 3, 4});
        CHECK(res.phases == 3);
        CHECK(brute_force_is_mis(snap, res.active));
    }
}

TEST_CASE("greedy_mis_oracle on fixed cases") {
    SUBCASE("empty graph") {
        ConflictGraph g;
        CHECK(greedy_mis_oracle(snapshot(g, 0), 0, hash_priority_fn()).empty());
    }

    SUBCASE("two-level star") {
        RankedFixture fx = ranked_fixture();
        CHECK(greedy_mis_oracle(snapshot(fx.graph, 0), 0, fx.priority) ==
              std::set<NodeId>{7, 1, 2, 3, 4});
    }

    SUBCASE("K5 admits exactly the top-priority node") {
        ConflictGraph g = generate_topology(TopologySpec::complete(5));
        const Slot slot = 99;
        auto mis = greedy_mis_oracle(snapshot(g, slot), slot, hash_priority_fn());
        REQUIRE(mis.size() == 1);
        NodeId top = 0;
        for (NodeId v = 1; v < 5; ++v)
            if (compute_priority(v, slot) > compute_priority(top, slot)) top = v;
        CHECK(mis.count(top) == 1);
    }
}

TEST_CASE("randomized: independence, maximality, oracle equivalence, containment") {
    std::mt19937_64 rng(31);
    const PriorityFn prio = hash_priority_fn();
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint32_t n = 2 + rng() % 40;
        const double p = static_cast<double>(rng() % 100) / 100.0;
        ConflictGraph g = generate_topology(TopologySpec::erdos_renyi(n, p, rng()));
        const Slot slot = rng();
        GraphSnapshot snap = snapshot(g, slot);

        DmisResult res = dmis_run_synchronous(snap, slot, prio);
        CHECK(is_independent(snap, res.active));
        CHECK(is_maximal(snap, res.active));
        CHECK(res.phases <= n);
        CHECK(res.active == greedy_mis_oracle(snap, slot, prio));

        // NAMA winners are phase-1 joiners.
        for (NodeId v : nama_active_set(snap, slot, prio))
            CHECK(res.active.count(v) == 1);
    }
}

TEST_CASE("parallel runner matches the serial reference") {
    std::mt19937_64 rng(37);
    const PriorityFn prio = hash_priority_fn();
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint32_t n = 50 + rng() % 200;
        ConflictGraph g =
            generate_topology(TopologySpec::erdos_renyi(n, 6.0 / (n - 1), rng()));
        const Slot slot = rng();
        GraphSnapshot snap = snapshot(g, slot);
        DmisResult serial = dmis_run_synchronous(snap, slot, prio);
        DmisResult parallel = dmis_run_synchronous_parallel(snap, slot, prio);
        CHECK(serial.active == parallel.active);
        CHECK(serial.phases == parallel.phases);
    }
}
