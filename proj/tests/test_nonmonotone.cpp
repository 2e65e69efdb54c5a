#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "revealment/analysis.hpp"
#include "revealment/nonmonotone.hpp"
#include "revealment/rng.hpp"

using namespace revealment;
namespace nm = revealment::nonmonotone;

namespace {

// Brute-force oracles working on raw bit positions only.
int oracle_bprime(int b0, int b1, int b2, int b3) {
    const int b[4] = {b0, b1, b2, b3};
    const int w = b0 + b1 + b2 + b3;
    if (w == 1) return 1;
    if (w != 2) return 0;
    for (int j = 0; j < 4; ++j) {
        if (b[j] && b[(j + 1) % 4]) return 1;
    }
    return 0;
}

struct Oracle {
    ButterflyParams p;
    const InputTape& tape;

    bool symmetric() const { return p.ensemble() == Ensemble::nonmonotone_symmetric; }

    int slot(std::uint64_t v, int j) const { return tape.peek(symmetric() ? 4 * v + j : v); }

    std::uint64_t next(std::uint64_t v) const {
        int b = slot(v, 0);
        if (symmetric()) b = slot(v, 0) ^ slot(v, 1) ^ slot(v, 2) ^ slot(v, 3);
        const std::uint64_t h = v % p.H(), t = v / p.H();
        return ((2 * h + b) % p.H()) + p.H() * ((t + 1) % p.W());
    }

    bool on_cycle(std::uint64_t v) const {
        std::uint64_t u = v;
        for (std::uint64_t s = 0; s < p.vertex_count(); ++s) {
            u = next(u);
            if (u == v) return true;
        }
        return false;
    }

    int value() const {
        if (!symmetric()) {
            for (std::uint64_t h = 0; h < p.H(); ++h) {
                if (on_cycle(h)) return to_pm1(slot(h, 0));
            }
            FAIL("no cycle through slice 0");
        }
        int x = 0;
        for (std::uint64_t v = 0; v < p.vertex_count(); ++v) {
            if (on_cycle(v)) x ^= oracle_bprime(slot(v, 0), slot(v, 1), slot(v, 2), slot(v, 3));
        }
        return to_pm1(x);
    }

    std::set<std::uint64_t> cycle_vertices() const {
        std::set<std::uint64_t> s;
        for (std::uint64_t v = 0; v < p.vertex_count(); ++v) {
            if (on_cycle(v)) s.insert(v);
        }
        return s;
    }
};

std::set<std::uint64_t> flatten(const ButterflyParams& p, const CycleSet& cs) {
    std::set<std::uint64_t> s;
    for (const auto& c : cs.cycles) {
        for (const auto& v : c.vertices) s.insert(p.flat(v));
    }
    return s;
}

std::uint64_t count_ones(const ButterflyParams& p) {
    const auto table = analysis::truth_table([&](InputTape& t) { return nm::f_direct(p, t); }, static_cast<int>(p.n()));
    return analysis::fourier(table).ones;
}

}  // namespace

TEST_CASE("bprime matches its definition on all 16 patterns") {
    int ones = 0;
    for (int x = 0; x < 16; ++x) {
        const int b0 = x & 1, b1 = (x >> 1) & 1, b2 = (x >> 2) & 1, b3 = (x >> 3) & 1;
        CHECK(nm::bprime(b0, b1, b2, b3) == oracle_bprime(b0, b1, b2, b3));
        // rotation and reflection
        CHECK(nm::bprime(b0, b1, b2, b3) == nm::bprime(b1, b2, b3, b0));
        CHECK(nm::bprime(b0, b1, b2, b3) == nm::bprime(b3, b2, b1, b0));
        ones += nm::bprime(b0, b1, b2, b3);
    }
    // four singletons and four adjacent pairs
    CHECK(ones == 8);
}

TEST_CASE("exact balance at every small admissible size") {
    const std::pair<int, int> sizes[] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}};
    for (auto [d, W] : sizes) {
        const ButterflyParams p(d, W, Ensemble::nonmonotone);
        CAPTURE(d);
        CAPTURE(W);
        CHECK(count_ones(p) == (std::uint64_t{1} << (p.n() - 1)));
    }
    CHECK(count_ones(ButterflyParams(1, 2, Ensemble::nonmonotone)) == 8);
    CHECK(count_ones(ButterflyParams(2, 3, Ensemble::nonmonotone)) == 2048);
    CHECK(count_ones(ButterflyParams(1, 2, Ensemble::nonmonotone_symmetric)) == 32768);
}

TEST_CASE("functions agree with the brute-force oracle") {
    for (std::uint64_t x = 0; x < 4096; ++x) {
        const ButterflyParams p(2, 3, Ensemble::nonmonotone);
        auto tape = InputTape::from_integer(p.n(), x);
        CHECK(nm::f_lex(p, tape) == Oracle{p, tape}.value());
    }
    for (std::uint64_t x = 0; x < 65536; x += 7) {
        const ButterflyParams p(1, 2, Ensemble::nonmonotone_symmetric);
        auto tape = InputTape::from_integer(p.n(), x);
        CHECK(nm::f_symmetric(p, tape) == Oracle{p, tape}.value());
    }
    for (auto e : {Ensemble::nonmonotone, Ensemble::nonmonotone_symmetric}) {
        const ButterflyParams p(3, 10, e);
        for (std::uint64_t trial = 0; trial < 300; ++trial) {
            auto tape = InputTape::pseudorandom(p.n(), 21, trial);
            CHECK(nm::f_direct(p, tape) == Oracle{p, tape}.value());
        }
    }
}

TEST_CASE("cycle set does not depend on the discovery slice") {
    const ButterflyParams p(2, 3, Ensemble::nonmonotone);
    for (std::uint64_t x = 0; x < 4096; ++x) {
        auto tape = InputTape::from_integer(p.n(), x);
        const auto base = nm::find_all_cycles(p, tape, 0);
        CHECK_FALSE(base.empty());
        CHECK(base.min_slice0() >= 0);
        CHECK(flatten(p, base) == Oracle{p, tape}.cycle_vertices());
        for (std::uint32_t t0 = 1; t0 < p.W(); ++t0) CHECK(nm::find_all_cycles(p, tape, t0) == base);
    }
    const ButterflyParams big(5, 40, Ensemble::nonmonotone_symmetric);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        auto tape = InputTape::pseudorandom(big.n(), 22, trial);
        const auto base = nm::find_all_cycles(big, tape, 0);
        CHECK(flatten(big, base) == Oracle{big, tape}.cycle_vertices());
        CHECK(nm::find_all_cycles(big, tape, 17) == base);
        for (const auto& c : base.cycles) {
            CHECK(c.vertices.size() == c.winding * big.W());
            CHECK(c.vertices.front().t == 0);
            CHECK(c.vertices.front().h == c.slice0.front());
        }
    }
}

TEST_CASE("Las Vegas is exact for every input and start slice") {
    for (auto [d, W, e] : {std::tuple{2, 3, Ensemble::nonmonotone}, std::tuple{2, 4, Ensemble::nonmonotone},
                           std::tuple{1, 2, Ensemble::nonmonotone_symmetric}}) {
        const ButterflyParams p(d, W, e);
        std::uint64_t disagreements = 0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << p.n()); ++x) {
            auto tape = InputTape::from_integer(p.n(), x);
            const int truth = nm::f_direct(p, tape);
            for (std::uint32_t t0 = 0; t0 < p.W(); ++t0) {
                tape.clear_log();
                const auto out = nm::evaluate_las_vegas_at(p, tape, t0);
                disagreements += out.value != truth;
                CHECK(out.bits_read == tape.read_count());
            }
        }
        CHECK(disagreements == 0);
    }
}

TEST_CASE("exact read frequencies at H=4, W=3") {
    const auto ev = make_evaluator({ButterflyParams(2, 3, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    const auto r = analysis::exact_revealment(ev);
    CHECK(r.trials == 4096 * 3);
    CHECK(*std::max_element(r.read_counts.begin(), r.read_counts.end()) == 9664);
    CHECK(r.delta_max == doctest::Approx(151.0 / 192.0));
    CHECK(r.errors == 0);
}

TEST_CASE("Las Vegas reads only routing bits of traced paths") {
    const ButterflyParams p(4, 30, Ensemble::nonmonotone);
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        auto tape = InputTape::pseudorandom(p.n(), 23, trial);
        std::vector<std::uint32_t> active;
        nm::find_all_cycles(p, tape, 5, &active);
        REQUIRE(active.size() == p.W() + 1);
        CHECK(active.front() == p.H());
        for (std::size_t i = 1; i < active.size(); ++i) CHECK(active[i] <= active[i - 1]);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < p.W(); ++i) total += active[i];
        // every active path reads one routing bit per step
        CHECK(tape.read_count() >= total);
        CHECK(tape.read_count() <= total + p.vertex_count());
    }
}

TEST_CASE("symmetric function is invariant under a common slot rotation or reflection") {
    const ButterflyParams p(2, 5, Ensemble::nonmonotone_symmetric);
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto tape = InputTape::pseudorandom(p.n(), 24, trial);
        const auto words = tape.words();
        auto bit = [&](std::uint64_t i) { return (words[i / 64] >> (i % 64)) & 1; };
        for (int variant = 0; variant < 2; ++variant) {
            std::vector<std::uint8_t> bits(p.n());
            for (std::uint64_t v = 0; v < p.vertex_count(); ++v) {
                for (int j = 0; j < 4; ++j) {
                    const int src = variant == 0 ? (j + 1) % 4 : 3 - j;
                    bits[4 * v + j] = static_cast<std::uint8_t>(bit(4 * v + src));
                }
            }
            auto permuted = InputTape::from_bits(bits);
            CHECK(nm::f_symmetric(p, permuted) == nm::f_symmetric(p, tape));
        }
    }
}

TEST_CASE("Monte Carlo with every start recovers all cycles") {
    const ButterflyParams p(4, 16, Ensemble::nonmonotone);
    std::vector<std::uint32_t> all(p.H());
    for (std::uint32_t h = 0; h < p.H(); ++h) all[h] = h;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto tape = InputTape::pseudorandom(p.n(), 25, trial);
        const std::uint32_t t0 = static_cast<std::uint32_t>(trial % p.W());
        CHECK(nm::discover_cycles(p, tape, t0, all) == nm::find_all_cycles(p, tape, t0));
        CHECK(nm::evaluate_monte_carlo_from(p, tape, t0, all).value == nm::f_lex(p, tape));
    }
}

TEST_CASE("Monte Carlo discovers a subset of the true cycles") {
    const ButterflyParams p(4, 16, Ensemble::nonmonotone);
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        auto tape = InputTape::pseudorandom(p.n(), 26, trial);
        const auto truth = nm::find_all_cycles(p, tape, 0);
        SplitMix rng(trial);
        std::vector<std::uint32_t> starts;
        for (int i = 0; i < 3; ++i) starts.push_back(static_cast<std::uint32_t>(rng.below(p.H())));
        const auto found = nm::discover_cycles(p, tape, static_cast<std::uint32_t>(rng.below(p.W())), starts);
        CHECK_FALSE(found.empty());
        for (const auto& c : found.cycles) {
            CHECK(std::find(truth.cycles.begin(), truth.cycles.end(), c) != truth.cycles.end());
        }
    }
    auto tape = InputTape::pseudorandom(p.n(), 26, 0);
    CHECK_THROWS_AS(nm::evaluate_monte_carlo(p, tape, 0, 1), ParameterError);
}

TEST_CASE("Monte Carlo error falls with m") {
    const ButterflyParams p(4, 16, Ensemble::nonmonotone);
    double previous = 1.0, previous_se = 0.0;
    for (std::uint32_t m : {1u, 2u, 4u, 8u}) {
        const auto r = analysis::estimate_revealment(make_evaluator({p, Algo::monte_carlo, m, 1}), 10000, 27,
                                                     {Execution::parallel, true});
        CHECK(r.error_rate <= previous + 2 * std::hypot(previous_se, r.error_rate_se));
        previous = r.error_rate;
        previous_se = r.error_rate_se;
    }
}

TEST_CASE("a single Monte Carlo path visits fewer than 8W vertices on average") {
    for (int d : {4, 5, 6}) {
        const ButterflyParams p(d, 1u << d, Ensemble::nonmonotone);
        std::uint64_t visited = 0;
        const std::uint64_t trials = 2000;
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            auto tape = InputTape::pseudorandom(p.n(), 28, trial);
            visited += nm::evaluate_monte_carlo(p, tape, 1, trial).bits_read;
        }
        CHECK(double(visited) / trials < 8.0 * p.W());
    }
}
