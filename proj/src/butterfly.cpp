#include "revealment/butterfly.hpp"

#include <bit>

namespace revealment {

std::string_view to_string(Ensemble e) {
    switch (e) {
        case Ensemble::nonmonotone: return "nonmonotone";
        case Ensemble::nonmonotone_symmetric: return "symmetric";
        case Ensemble::monotone: return "monotone";
        case Ensemble::monotone_pair: return "monotone-pair";
    }
    return "?";
}

Ensemble parse_ensemble(std::string_view name) {
    if (name == "nonmonotone") return Ensemble::nonmonotone;
    if (name == "symmetric" || name == "nonmonotone-symmetric") return Ensemble::nonmonotone_symmetric;
    if (name == "monotone") return Ensemble::monotone;
    if (name == "monotone-pair" || name == "monotone-balanced-pair") return Ensemble::monotone_pair;
    throw ParameterError("unknown ensemble '" + std::string(name) + "'");
}

int slots_per_vertex(Ensemble e) {
    switch (e) {
        case Ensemble::nonmonotone: return 1;
        case Ensemble::nonmonotone_symmetric: return 4;
        case Ensemble::monotone:
        case Ensemble::monotone_pair: return 2;
    }
    return 1;
}

int experiments(Ensemble e) { return e == Ensemble::monotone_pair ? 2 : 1; }

ButterflyParams::ButterflyParams(int d, std::uint32_t W, Ensemble ensemble)
    : d_(d), H_(0), W_(W), ensemble_(ensemble), n_(0) {
    if (d < 1 || d > max_d) {
        throw ParameterError("d must lie in [1, " + std::to_string(max_d) + "], got " + std::to_string(d));
    }
    if (W < 1) throw ParameterError("W must be positive");
    H_ = std::uint32_t{1} << d;
    const bool monotone = ensemble == Ensemble::monotone || ensemble == Ensemble::monotone_pair;
    if (monotone && W < static_cast<std::uint32_t>(d)) {
        throw ParameterError("monotone ensembles need W >= d (W=" + std::to_string(W) +
                             ", d=" + std::to_string(d) + ")");
    }
    if (!monotone && W <= static_cast<std::uint32_t>(d)) {
        throw ParameterError("nonmonotone ensembles need W > d (W=" + std::to_string(W) +
                             ", d=" + std::to_string(d) + ")");
    }
    n_ = vertex_count() * slots_per_vertex(ensemble) * experiments(ensemble);
}

ButterflyParams ButterflyParams::from_height(std::uint32_t H, std::uint32_t W, Ensemble ensemble) {
    if (H < 2 || !std::has_single_bit(H)) {
        throw ParameterError("H must be a power of two >= 2, got " + std::to_string(H));
    }
    return ButterflyParams(std::countr_zero(H), W, ensemble);
}

void ButterflyParams::check(VertexId v) const {
    if (!valid(v)) {
        throw ParameterError("vertex (" + std::to_string(v.h) + "," + std::to_string(v.t) +
                             ") outside H=" + std::to_string(H_) + ", W=" + std::to_string(W_));
    }
}

VertexId ButterflyParams::vertex(std::uint64_t flat_index) const {
    if (flat_index >= vertex_count()) throw ParameterError("flat vertex index out of range");
    return {static_cast<std::uint32_t>(flat_index % H_), static_cast<std::uint32_t>(flat_index / H_)};
}

VertexId successor(const ButterflyParams& p, VertexId v, int b) {
    p.check(v);
    const std::uint32_t h = (2 * v.h + static_cast<std::uint32_t>(b & 1)) & (p.H() - 1);
    const std::uint32_t t = v.t + 1 == p.W() ? 0 : v.t + 1;
    return {h, t};
}

std::array<VertexId, 2> predecessors(const ButterflyParams& p, VertexId v) {
    p.check(v);
    const std::uint32_t t = v.t == 0 ? p.W() - 1 : v.t - 1;
    return {VertexId{v.h / 2, t}, VertexId{v.h / 2 + p.H() / 2, t}};
}

std::uint64_t bit_index(const ButterflyParams& p, VertexId v, int slot, int experiment) {
    p.check(v);
    const int slots = slots_per_vertex(p.ensemble());
    if (slot < 0 || slot >= slots) {
        throw ParameterError("slot " + std::to_string(slot) + " out of range for " +
                             std::string(to_string(p.ensemble())));
    }
    if (experiment < 0 || experiment >= experiments(p.ensemble())) {
        throw ParameterError("experiment index out of range");
    }
    return experiment * p.bits_per_experiment() + slots * p.flat(v) + slot;
}

BitLocation bit_location(const ButterflyParams& p, std::uint64_t index) {
    if (index >= p.n()) throw ParameterError("bit index out of range");
    const int slots = slots_per_vertex(p.ensemble());
    const auto experiment = static_cast<int>(index / p.bits_per_experiment());
    const std::uint64_t local = index % p.bits_per_experiment();
    return {p.vertex(local / slots), static_cast<int>(local % slots), experiment};
}

}  // namespace revealment
