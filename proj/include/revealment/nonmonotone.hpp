#pragma once

// Out-degree-one ensemble: each vertex's routing bit picks its single
// outgoing edge, so the random subgraph is a functional graph and always
// contains at least one directed cycle.

#include <cstdint>
#include <span>
#include <vector>

#include "revealment/butterfly.hpp"
#include "revealment/cycles.hpp"
#include "revealment/tape.hpp"

namespace revealment::nonmonotone {

/// Routing bit of v: its own bit, or the parity of its four slot bits in the
/// symmetric layout. Reads every bit it uses.
int routing_bit(const ButterflyParams& p, VertexId v, InputTape& tape);

VertexId out_vertex(const ButterflyParams& p, VertexId v, InputTape& tape);

/// 1 iff the four bits hold exactly one or two ones and the ones are
/// cyclically adjacent. Symmetric under rotation/reflection and independent
/// of parity.
int bprime(int b0, int b1, int b2, int b3);

/// Follows all H paths forward from slice t0 with coalescing until they
/// return to t0, then expands every orbit of the first-return map into a
/// full cycle. Reads exactly the routing bits of vertices on traced paths.
/// When `active_counts` is given it receives the number of distinct active
/// paths at slices t0, t0+1, ..., t0+W (W+1 entries).
CycleSet find_all_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                         std::vector<std::uint32_t>* active_counts = nullptr);

/// Value of the ensemble's function on a known cycle set: the bit of the
/// smallest slice-0 cycle vertex (nonmonotone), or the XOR of bprime over all
/// cycle vertices (symmetric). Reads the bits it consults.
int value_from_cycles(const ButterflyParams& p, const CycleSet& cycles, InputTape& tape);

/// Lexicographic-cycle function, computed from slice 0. Requires the
/// nonmonotone layout.
int f_lex(const ButterflyParams& p, InputTape& tape);
/// XOR-of-bprime function. Requires the symmetric layout.
int f_symmetric(const ButterflyParams& p, InputTape& tape);
/// Dispatches on the ensemble.
int f_direct(const ButterflyParams& p, InputTape& tape);

/// Zero-error evaluator with a given initial slice.
EvalOutcome evaluate_las_vegas_at(const ButterflyParams& p, InputTape& tape, std::uint32_t t0);
/// Zero-error evaluator; t0 is uniform given the coin seed.
EvalOutcome evaluate_las_vegas(const ButterflyParams& p, InputTape& tape, std::uint64_t seed);

/// Follows the path from each start (all in slice t0) until it meets its own
/// trace, closing a new cycle, or another path's trace, where it stops.
/// Discovered cycles are a subset of the true cycles.
CycleSet discover_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                         std::span<const std::uint32_t> start_heights);

EvalOutcome evaluate_monte_carlo_from(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                                      std::span<const std::uint32_t> start_heights);
/// Monte Carlo evaluator: uniform t0 and m starts drawn with replacement.
/// Throws ParameterError for m < 1. Designed for W = H but runs for any W.
EvalOutcome evaluate_monte_carlo(const ButterflyParams& p, InputTape& tape, std::uint32_t m,
                                 std::uint64_t seed);

}  // namespace revealment::nonmonotone
