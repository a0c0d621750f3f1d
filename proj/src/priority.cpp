#include "onama/priority.hpp"

namespace onama {

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

Priority compute_priority(NodeId id, Slot slot) {
    std::uint8_t buf[12];
    for (int i = 0; i < 4; ++i)
        buf[i] = static_cast<std::uint8_t>(id >> (8 * (3 - i)));
    for (int i = 0; i < 8; ++i)
        buf[4 + i] = static_cast<std::uint8_t>(slot >> (8 * (7 - i)));
    // FNV-1a alone has weak high-bit avalanche when only the trailing slot
    // bytes change, which would leave the priority ordering nearly constant
    // across consecutive slots. The finalizer restores full diffusion so the
    // schedule rotates every slot.
    return Priority{mix64(fnv1a64(buf, sizeof(buf))), id};
}

PriorityFn hash_priority_fn() {
    return [](NodeId id, Slot slot) { return compute_priority(id, slot); };
}

}  // namespace onama
