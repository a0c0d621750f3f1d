#ifndef ONAMA_TYPES_HPP
#define ONAMA_TYPES_HPP

#include <cstdint>
#include <string>

namespace onama {

// Contention entity identifier. Unique and stable within one run.
using NodeId = std::uint32_t;

// Time in slots, starting at 0.
using Slot = std::uint64_t;

// Per-computation node state. UNDECIDED is the only non-terminal state;
// a node moves to ACTIVE or INACTIVE exactly once per computation.
enum class NodeState : std::uint8_t {
    Undecided = 0,
    Active = 1,
    Inactive = 2,
};

inline const char* to_string(NodeState s) {
    switch (s) {
        case NodeState::Undecided: return "UNDECIDED";
        case NodeState::Active: return "ACTIVE";
        case NodeState::Inactive: return "INACTIVE";
    }
    return "?";
}

}  // namespace onama

#endif
