#include "doctest.h"

#include <set>
#include <vector>

#include "revealment/butterfly.hpp"

using namespace revealment;

TEST_CASE("successor examples") {
    const ButterflyParams p(2, 3, Ensemble::nonmonotone);
    CHECK(successor(p, {1, 0}, 0) == VertexId{2, 1});
    CHECK(successor(p, {1, 0}, 1) == VertexId{3, 1});
    CHECK(successor(p, {3, 2}, 1) == VertexId{3, 0});
    CHECK(successor(p, {2, 1}, 0) == VertexId{0, 2});
    CHECK_THROWS_AS(successor(p, {4, 0}, 0), ParameterError);
    CHECK_THROWS_AS(successor(p, {0, 3}, 0), ParameterError);
}

TEST_CASE("predecessors invert successor") {
    for (int d = 1; d <= 6; ++d) {
        const ButterflyParams p(d, d + 1, Ensemble::nonmonotone);
        for (std::uint32_t t = 0; t < p.W(); ++t) {
            for (std::uint32_t h = 0; h < p.H(); ++h) {
                const VertexId v{h, t};
                const auto preds = predecessors(p, v);
                CHECK(preds[0].h < preds[1].h);
                for (const auto& u : preds) {
                    const bool hit = successor(p, u, 0) == v || successor(p, u, 1) == v;
                    CHECK(hit);
                }
                for (int b = 0; b < 2; ++b) {
                    const auto w = successor(p, v, b);
                    const auto back = predecessors(p, w);
                    CHECK((back[0] == v || back[1] == v));
                }
            }
        }
    }
}

TEST_CASE("in-degree is two everywhere") {
    const ButterflyParams p(4, 5, Ensemble::monotone);
    std::vector<int> indeg(p.vertex_count(), 0);
    for (std::uint64_t f = 0; f < p.vertex_count(); ++f) {
        for (int b = 0; b < 2; ++b) ++indeg[p.flat(successor(p, p.vertex(f), b))];
    }
    for (int c : indeg) CHECK(c == 2);
}

TEST_CASE("bit index layouts") {
    const ButterflyParams nm(2, 3, Ensemble::nonmonotone);
    CHECK(nm.n() == 12);
    CHECK(bit_index(nm, {1, 2}, 0) == 1 + 4 * 2);

    const ButterflyParams sym(2, 3, Ensemble::nonmonotone_symmetric);
    CHECK(sym.n() == 48);
    CHECK(bit_index(sym, {1, 2}, 3) == 4 * 9 + 3);

    const ButterflyParams mono(1, 2, Ensemble::monotone);
    CHECK(mono.n() == 8);
    CHECK(bit_index(mono, {1, 1}, 1) == 2 * 3 + 1);

    const ButterflyParams pair(1, 2, Ensemble::monotone_pair);
    CHECK(pair.n() == 16);
    CHECK(pair.bits_per_experiment() == 8);
    CHECK(bit_index(pair, {1, 1}, 1, 1) == 8 + 7);
}

TEST_CASE("bit index is a bijection") {
    for (auto e : {Ensemble::nonmonotone, Ensemble::nonmonotone_symmetric, Ensemble::monotone, Ensemble::monotone_pair}) {
        const ButterflyParams p(3, 5, e);
        std::set<std::uint64_t> seen;
        for (int ex = 0; ex < experiments(e); ++ex) {
            for (std::uint64_t f = 0; f < p.vertex_count(); ++f) {
                for (int s = 0; s < slots_per_vertex(e); ++s) {
                    const auto i = bit_index(p, p.vertex(f), s, ex);
                    CHECK(i < p.n());
                    seen.insert(i);
                    const auto loc = bit_location(p, i);
                    CHECK(loc == BitLocation{p.vertex(f), s, ex});
                }
            }
        }
        CHECK(seen.size() == p.n());
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ButterflyParams(0, 3, Ensemble::nonmonotone), ParameterError);
    CHECK_THROWS_AS(ButterflyParams(2, 2, Ensemble::nonmonotone), ParameterError);
    CHECK_NOTHROW(ButterflyParams(2, 2, Ensemble::monotone));
    CHECK_THROWS_AS(ButterflyParams(3, 2, Ensemble::monotone), ParameterError);
    CHECK_THROWS_AS(ButterflyParams(25, 30, Ensemble::monotone), ParameterError);
    CHECK_THROWS_AS(ButterflyParams::from_height(6, 8, Ensemble::monotone), ParameterError);
    CHECK(ButterflyParams::from_height(64, 12, Ensemble::monotone).d() == 6);
    CHECK_THROWS_AS(bit_index(ButterflyParams(1, 2, Ensemble::monotone), {0, 0}, 2), ParameterError);
    CHECK_THROWS_AS(bit_index(ButterflyParams(1, 2, Ensemble::monotone), {0, 0}, 0, 1), ParameterError);
}

TEST_CASE("ensemble names round trip") {
    for (auto e : {Ensemble::nonmonotone, Ensemble::nonmonotone_symmetric, Ensemble::monotone, Ensemble::monotone_pair}) {
        CHECK(parse_ensemble(to_string(e)) == e);
    }
    CHECK_THROWS_AS(parse_ensemble("ladder"), ParameterError);
}
