#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gridembed {

/// Thrown when a documented precondition or contract is violated.
/// The message carries enough context to locate the offending call.
class contract_error : public std::runtime_error {
public:
    explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw contract_error(msg);
}

/// Packed identifier of a host-grid node (mixed-radix index in the root grid).
using NodeId = std::int64_t;

/// Key for an undirected host edge: endpoints normalized so a < b.
using EdgeKey = std::uint64_t;

inline EdgeKey edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<EdgeKey>(a) << 32) | static_cast<EdgeKey>(b);
}

inline std::pair<NodeId, NodeId> edge_key_split(EdgeKey k) {
    return {static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffULL)};
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

} // namespace gridembed
