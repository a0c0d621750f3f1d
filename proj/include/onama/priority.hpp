#ifndef ONAMA_PRIORITY_HPP
#define ONAMA_PRIORITY_HPP

#include <compare>
#include <cstdint>
#include <functional>

#include "onama/types.hpp"

namespace onama {

// Per-slot priority. The id suffix makes priorities distinct even when the
// hash field collides; comparison is lexicographic (hash first, then id).
struct Priority {
    std::uint64_t hash = 0;
    NodeId id = 0;

    auto operator<=>(const Priority&) const = default;
};

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len);

// FNV-1a over the 12-byte big-endian concatenation of id (4 bytes) and
// slot (8 bytes), passed through a 64-bit finalizing mix, paired with the
// id. Pure and bit-exact across platforms.
Priority compute_priority(NodeId id, Slot slot);

// Pluggable priority source. Tests inject fixed tables through this; the
// simulator always uses compute_priority.
using PriorityFn = std::function<Priority(NodeId, Slot)>;

PriorityFn hash_priority_fn();

}  // namespace onama

#endif
