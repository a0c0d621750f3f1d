#ifndef ONAMA_TOPOLOGY_GEN_HPP
#define ONAMA_TOPOLOGY_GEN_HPP

#include <array>
#include <cstdint>
#include <string>

#include "onama/graph.hpp"
#include "onama/types.hpp"

namespace onama {

// Synthetic topology families for experiments. `file` loads a topology
// written in the line-oriented text format.
struct TopologySpec {
    enum class Kind { File, Fixture7, RandomGeometric, ErdosRenyi, Complete, Path };
    Kind kind = Kind::Fixture7;
    std::string path;       // File
    std::uint32_t n = 0;    // node count for synthetic kinds
    double p = 0.0;         // ErdosRenyi edge probability
    double radius = 0.0;    // RandomGeometric connection radius (unit square)
    std::uint64_t seed = 0; // generator seed

    static TopologySpec file(std::string path);
    static TopologySpec fixture7();
    static TopologySpec random_geometric(std::uint32_t n, double radius, std::uint64_t seed);
    static TopologySpec erdos_renyi(std::uint32_t n, double p, std::uint64_t seed);
    static TopologySpec complete(std::uint32_t n);
    static TopologySpec path_graph(std::uint32_t n);

    std::string kind_name() const;

    bool operator==(const TopologySpec&) const = default;
};

ConflictGraph generate_topology(const TopologySpec& spec);

// The 7-node two-level star on which the local-maximum rule activates one
// node while a maximal independent set activates five. Node ids are
// assigned so that at `pinned_slot` the hashed priorities order the nodes
// exactly as the construction requires: the hub outranks both centers, and
// the four leaves rank below everything else.
struct Fixture7 {
    ConflictGraph graph;
    Slot pinned_slot = 0;
    // role_ids[r-1] holds the id with priority rank r (1 = lowest) at
    // pinned_slot. Rank 7 is the hub; ranks 5 and 6 the star centers;
    // ranks 1-4 the leaves.
    std::array<NodeId, 7> role_ids{};
};

inline constexpr Slot kFixture7Slot = 20;

Fixture7 make_fixture7(Slot pinned_slot = kFixture7Slot);

}  // namespace onama

#endif
