#pragma once

// Topology of the wrapped extended butterfly: H = 2^d points per time slice,
// W time slices, edges (h,t) -> (2h+b mod H, t+1 mod W).

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace revealment {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Ensemble {
    nonmonotone,
    nonmonotone_symmetric,
    monotone,
    monotone_pair,
};

std::string_view to_string(Ensemble e);
Ensemble parse_ensemble(std::string_view name);

/// Number of input bits attached to each vertex of one experiment.
int slots_per_vertex(Ensemble e);
/// Number of disjoint copies of the graph read by one function (2 for the
/// balanced monotone pair, otherwise 1).
int experiments(Ensemble e);

struct VertexId {
    std::uint32_t h = 0;
    std::uint32_t t = 0;

    friend bool operator==(const VertexId&, const VertexId&) = default;
    friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

/// Where a single input bit lives.
struct BitLocation {
    VertexId vertex;
    int slot = 0;
    int experiment = 0;

    friend bool operator==(const BitLocation&, const BitLocation&) = default;
};

class ButterflyParams {
public:
    static constexpr int max_d = 24;

    /// Throws ParameterError unless 1 <= d <= max_d, W >= 1 and the ensemble's
    /// width requirement holds (W > d for the nonmonotone ensembles, W >= d
    /// for the monotone ones).
    ButterflyParams(int d, std::uint32_t W, Ensemble ensemble);

    /// Same, but takes H and checks it is a power of two.
    static ButterflyParams from_height(std::uint32_t H, std::uint32_t W, Ensemble ensemble);

    int d() const { return d_; }
    std::uint32_t H() const { return H_; }
    std::uint32_t W() const { return W_; }
    Ensemble ensemble() const { return ensemble_; }

    std::uint64_t vertex_count() const { return std::uint64_t{H_} * W_; }
    /// Total input bits n for the ensemble.
    std::uint64_t n() const { return n_; }
    /// Bits per experiment (n / experiments).
    std::uint64_t bits_per_experiment() const { return vertex_count() * slots_per_vertex(ensemble_); }

    bool valid(VertexId v) const { return v.h < H_ && v.t < W_; }
    void check(VertexId v) const;

    std::uint64_t flat(VertexId v) const { return v.h + std::uint64_t{H_} * v.t; }
    VertexId vertex(std::uint64_t flat_index) const;

    friend bool operator==(const ButterflyParams&, const ButterflyParams&) = default;

private:
    int d_;
    std::uint32_t H_;
    std::uint32_t W_;
    Ensemble ensemble_;
    std::uint64_t n_;
};

/// (2h+b mod H, t+1 mod W).
VertexId successor(const ButterflyParams& p, VertexId v, int b);

/// Both in-neighbours, ordered by h: (h/2, t-1) and (h/2 + H/2, t-1).
std::array<VertexId, 2> predecessors(const ButterflyParams& p, VertexId v);

/// Canonical bit position of (vertex, slot) in the given experiment.
std::uint64_t bit_index(const ButterflyParams& p, VertexId v, int slot, int experiment = 0);
BitLocation bit_location(const ButterflyParams& p, std::uint64_t index);

}  // namespace revealment
