#pragma once

#include <cstdint>
#include <vector>

#include "revealment/butterfly.hpp"

namespace revealment {

/// A directed cycle in canonical rotation: it starts at its slice-0 vertex
/// with the smallest h and lists vertices in traversal order.
struct Cycle {
    std::vector<VertexId> vertices;
    std::uint32_t winding = 0;             // length / W
    std::vector<std::uint32_t> slice0;     // h-coordinates at t = 0, ascending

    friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Cycles ordered by the h of their first vertex.
struct CycleSet {
    std::vector<Cycle> cycles;

    bool empty() const { return cycles.empty(); }
    std::size_t size() const { return cycles.size(); }
    /// Smallest h over all slice-0 vertices on any cycle, or -1 when empty.
    std::int64_t min_slice0() const;
    bool contains_slice0(std::uint32_t h) const;
    std::uint64_t total_length() const;

    friend bool operator==(const CycleSet&, const CycleSet&) = default;
};

/// Builds a canonical Cycle from a closed vertex walk (first vertex not repeated at the end).
Cycle make_cycle(const ButterflyParams& p, std::vector<VertexId> walk);
/// Sorts cycles into canonical order and drops duplicates.
void canonicalize(CycleSet& set);

/// Result of one evaluator run. The set of positions read lives on the tape's ReadLog.
struct EvalOutcome {
    int value = 0;                       // -1 or +1
    std::vector<std::uint32_t> t0;       // initial slice, one per experiment
    std::vector<VertexId> starts;        // Monte Carlo start vertices (empty for Las Vegas)
    std::uint64_t bits_read = 0;
};

inline int to_pm1(int bit) { return bit ? 1 : -1; }
inline int to_bit(int pm1) { return pm1 > 0 ? 1 : 0; }

}  // namespace revealment
