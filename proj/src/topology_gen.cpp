#include "onama/topology_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "onama/priority.hpp"

namespace onama {

TopologySpec TopologySpec::file(std::string path) {
    TopologySpec s;
    s.kind = Kind::File;
    s.path = std::move(path);
    return s;
}

TopologySpec TopologySpec::fixture7() {
    return TopologySpec{};
}

TopologySpec TopologySpec::random_geometric(std::uint32_t n, double radius,
                                            std::uint64_t seed) {
    TopologySpec s;
    s.kind = Kind::RandomGeometric;
    s.n = n;
    s.radius = radius;
    s.seed = seed;
    return s;
}

TopologySpec TopologySpec::erdos_renyi(std::uint32_t n, double p, std::uint64_t seed) {
    TopologySpec s;
    s.kind = Kind::ErdosRenyi;
    s.n = n;
    s.p = p;
    s.seed = seed;
    return s;
}

TopologySpec TopologySpec::complete(std::uint32_t n) {
    TopologySpec s;
    s.kind = Kind::Complete;
    s.n = n;
    return s;
}

TopologySpec TopologySpec::path_graph(std::uint32_t n) {
    TopologySpec s;
    s.kind = Kind::Path;
    s.n = n;
    return s;
}

std::string TopologySpec::kind_name() const {
    switch (kind) {
        case Kind::File: return "file";
        case Kind::Fixture7: return "fig1";
        case Kind::RandomGeometric: return "random-geometric";
        case Kind::ErdosRenyi: return "erdos-renyi";
        case Kind::Complete: return "complete";
        case Kind::Path: return "path";
    }
    return "?";
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

void require_n(std::uint32_t n, const char* kind) {
    if (n == 0) throw std::invalid_argument(std::string(kind) + ": n must be >= 1");
}

}  // namespace

ConflictGraph generate_topology(const TopologySpec& spec) {
    ConflictGraph g;
    switch (spec.kind) {
        case TopologySpec::Kind::File:
            return load_topology(spec.path);
        case TopologySpec::Kind::Fixture7:
            return make_fixture7().graph;
        case TopologySpec::Kind::Complete: {
            require_n(spec.n, "complete");
            for (NodeId v = 0; v < spec.n; ++v) g.add_node(v);
            for (NodeId a = 0; a < spec.n; ++a)
                for (NodeId b = a + 1; b < spec.n; ++b) g.add_edge(a, b);
            return g;
        }
        case TopologySpec::Kind::Path: {
            require_n(spec.n, "path");
            for (NodeId v = 0; v < spec.n; ++v) g.add_node(v);
            for (NodeId v = 0; v + 1 < spec.n; ++v) g.add_edge(v, v + 1);
            return g;
        }
        case TopologySpec::Kind::ErdosRenyi: {
            require_n(spec.n, "erdos-renyi");
            if (spec.p < 0.0 || spec.p > 1.0)
                throw std::invalid_argument("erdos-renyi: p must be in [0,1]");
            std::mt19937_64 rng(spec.seed);
            for (NodeId v = 0; v < spec.n; ++v) g.add_node(v);
            for (NodeId a = 0; a < spec.n; ++a)
                for (NodeId b = a + 1; b < spec.n; ++b)
                    if (uniform01(rng) < spec.p) g.add_edge(a, b);
            return g;
        }
        case TopologySpec::Kind::RandomGeometric: {
            require_n(spec.n, "random-geometric");
            if (spec.radius < 0.0)
                throw std::invalid_argument("random-geometric: radius must be >= 0");
            std::mt19937_64 rng(spec.seed);
            std::vector<double> x(spec.n), y(spec.n);
            for (NodeId v = 0; v < spec.n; ++v) {
                g.add_node(v);
                x[v] = uniform01(rng);
                y[v] = uniform01(rng);
            }
            const double r2 = spec.radius * spec.radius;
            for (NodeId a = 0; a < spec.n; ++a)
                for (NodeId b = a + 1; b < spec.n; ++b) {
                    const double dx = x[a] - x[b];
                    const double dy = y[a] - y[b];
                    if (dx * dx + dy * dy <= r2) g.add_edge(a, b);
                }
            return g;
        }
    }
    throw std::invalid_argument("unknown topology kind");
}

Fixture7 make_fixture7(Slot pinned_slot) {
    Fixture7 fx;
    fx.pinned_slot = pinned_slot;
    // Rank seven small ids by their hashed priority at the pinned slot and
    // wire the structure by rank. Any id set works; the ranking makes the
    // priority order land where the construction needs it.
    std::array<NodeId, 7> ids = {1, 2, 3, 4, 5, 6, 7};
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
        return compute_priority(a, pinned_slot) < compute_priority(b, pinned_slot);
    });
    fx.role_ids = ids;  // role_ids[r-1] has priority rank r
    const NodeId hub = ids[6];
    const NodeId center_a = ids[4];  // rank 5
    const NodeId center_b = ids[5];  // rank 6
    for (NodeId v : ids) fx.graph.add_node(v);
    fx.graph.add_edge(hub, center_a);
    fx.graph.add_edge(hub, center_b);
    fx.graph.add_edge(center_a, ids[0]);  // ranks 1, 2 under center 5
    fx.graph.add_edge(center_a, ids[1]);
    fx.graph.add_edge(center_b, ids[2]);  // ranks 3, 4 under center 6
    fx.graph.add_edge(center_b, ids[3]);
    return fx;
}

}  // namespace onama
