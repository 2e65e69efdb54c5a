#include "doctest.h"

#include <cmath>

#include "revealment/rng.hpp"
#include "revealment/tape.hpp"

using namespace revealment;

TEST_CASE("hex parsing puts the least significant bit at position 0") {
    auto t = InputTape::from_hex(12, "0x5a5");
    const int expected[] = {1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0};
    for (int i = 0; i < 12; ++i) CHECK(t.peek(i) == expected[i]);
    CHECK(t.to_hex() == "5a5");
    CHECK(InputTape::from_hex(8, "3").peek(1) == 1);
    CHECK_THROWS(InputTape::from_hex(4, "1f"));
    CHECK_THROWS(InputTape::from_hex(8, "zz"));
}

TEST_CASE("reads are logged once, peeks not at all") {
    auto t = InputTape::from_integer(10, 0b1011001110);
    CHECK(t.peek(3) == 1);
    CHECK(t.read_count() == 0);
    CHECK(t.read(3) == 1);
    CHECK(t.read(3) == 1);
    CHECK(t.read(0) == 0);
    CHECK(t.read_count() == 2);
    CHECK(t.read_set() == std::vector<std::uint64_t>{0, 3});
    CHECK(std::vector<std::uint64_t>(t.log().positions().begin(), t.log().positions().end()) ==
          std::vector<std::uint64_t>{3, 0});
    t.clear_log();
    CHECK(t.read_count() == 0);
    CHECK_FALSE(t.log().was_read(3));
    CHECK(t.peek(3) == 1);
}

TEST_CASE("out of range reads throw") {
    InputTape empty;
    CHECK_THROWS_AS(empty.read(0), TapeError);
    auto t = InputTape::from_integer(5, 0);
    CHECK_THROWS_AS(t.read(5), TapeError);
    CHECK_THROWS_AS(t.peek(7), TapeError);
}

TEST_CASE("pseudorandom tapes are a function of seed and trial") {
    auto a = InputTape::pseudorandom(300, 9, 4);
    auto b = InputTape::pseudorandom(300, 9, 4);
    auto c = InputTape::pseudorandom(300, 9, 5);
    CHECK(a.words() == b.words());
    CHECK(a.words() != c.words());
    a.reseed(9, 5);
    CHECK(a.words() == c.words());
    // bits beyond n are zero in the materialized words
    CHECK((a.words().back() >> (300 % 64)) == 0);
}

TEST_CASE("pseudorandom bits are close to uniform") {
    const std::uint64_t n = 64, trials = 20000;
    std::vector<int> ones(n, 0);
    for (std::uint64_t r = 0; r < trials; ++r) {
        auto t = InputTape::pseudorandom(n, 3, r);
        for (std::uint64_t i = 0; i < n; ++i) ones[i] += t.peek(i);
    }
    const double se = std::sqrt(0.25 / trials);
    for (int c : ones) CHECK(std::abs(c / double(trials) - 0.5) < 5 * se);
}

TEST_CASE("splice copies x on the chosen positions") {
    const auto x = InputTape::from_integer(8, 0b11111111);
    const auto y = InputTape::from_integer(8, 0b00000000);
    const std::vector<std::uint64_t> pos{1, 6};
    const auto z = splice(x, pos, y);
    CHECK(z.words()[0] == 0b01000010);
    CHECK_THROWS(splice(x, pos, InputTape::from_integer(9, 0)));
}

TEST_CASE("an algorithm that only reads its read set cannot tell x from a splice") {
    // Reads bits until it sees two ones; output is their positions.
    auto run = [](InputTape& t) {
        std::vector<int> found;
        for (std::uint64_t i = 0; i < t.size() && found.size() < 2; ++i) {
            if (t.read(i)) found.push_back(static_cast<int>(i));
        }
        return found;
    };
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto x = InputTape::pseudorandom(40, 1, trial);
        const auto out = run(x);
        const auto reads = x.read_set();
        auto z = splice(x, reads, InputTape::pseudorandom(40, 2, trial));
        CHECK(run(z) == out);
        CHECK(z.read_set() == reads);
    }
}

TEST_CASE("counter-based generator") {
    CHECK(derive_seed(1, 2, Stream::input) != derive_seed(1, 2, Stream::coins));
    CHECK(derive_seed(1, 2, Stream::input) == derive_seed(1, 2, Stream::input));
    SplitMix rng(5);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
    for (int c : hist) CHECK(std::abs(c - 10000) < 500);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK((u >= 0.0 && u < 1.0));
    }
}
