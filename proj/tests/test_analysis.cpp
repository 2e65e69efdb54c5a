#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "revealment/analysis.hpp"
#include "revealment/rng.hpp"

using namespace revealment;
namespace an = revealment::analysis;

namespace {

int parity(InputTape& t) {
    int x = 0;
    for (std::uint64_t i = 0; i < t.size(); ++i) x ^= t.read(i);
    return to_pm1(x);
}

int majority3(InputTape& t) { return to_pm1(t.read(0) + t.read(1) + t.read(2) >= 2); }

// Reads one bit chosen by its coins, outputs it.
Evaluator random_bit_evaluator(std::uint64_t n) {
    Evaluator ev;
    ev.name = "random-bit";
    ev.n = n;
    ev.run = [n](InputTape& tape, std::uint64_t coins) {
        EvalOutcome out;
        out.value = to_pm1(tape.read(SplitMix(coins).below(n)));
        out.bits_read = 1;
        return out;
    };
    return ev;
}

}  // namespace

TEST_CASE("dictator") {
    const auto ev = dictator_evaluator(6, 2);
    const auto r = an::exact_revealment(ev);
    CHECK(r.mode == an::Mode::exact);
    CHECK(r.delta == std::vector<double>{0, 0, 1, 0, 0, 0});
    CHECK(r.delta_max == 1.0);
    CHECK(r.argmax == 2);
    const auto f = an::fourier(an::truth_table(ev.truth, 6));
    CHECK(f.empty == 0.0);
    CHECK(f.variance == 1.0);
    CHECK(f.level1[2] == 1.0);
    CHECK(f.influence[2] == 1.0);
    CHECK(f.influence[0] == 0.0);
    CHECK(f.monotone);
    const auto inequalities = an::check_inequalities(f, r);
    CHECK(inequalities.all_pass());
}

TEST_CASE("read-everything evaluator") {
    const auto ev = read_all_evaluator(5, majority3);
    const auto r = an::exact_revealment(ev);
    for (double d : r.delta) CHECK(d == 1.0);
    const auto f = an::fourier(an::truth_table(majority3, 5));
    const auto inequalities = an::check_inequalities(f, r);
    const auto* bound = inequalities.find("variance_revealment");
    REQUIRE(bound);
    CHECK(bound->right == doctest::Approx(std::accumulate(f.influence.begin(), f.influence.end(), 0.0)));
    CHECK(inequalities.all_pass());
}

TEST_CASE("parity and majority Fourier data") {
    const auto p = an::fourier(an::truth_table(parity, 8));
    for (double c : p.level1) CHECK(c == 0.0);
    for (double i : p.influence) CHECK(i == 1.0);
    CHECK(p.ones == 128);
    CHECK_FALSE(p.monotone);

    const auto m = an::fourier(an::truth_table(majority3, 3));
    for (int i = 0; i < 3; ++i) {
        CHECK(m.level1[i] == 0.5);
        CHECK(m.influence[i] == 0.5);
    }
    CHECK(m.monotone);
}

TEST_CASE("Fourier data round trip against the truth table") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const int n = 10;
        // a random but fixed function of the input
        auto f = [trial](InputTape& t) {
            std::uint64_t x = 0;
            for (std::uint64_t i = 0; i < t.size(); ++i) x |= std::uint64_t(t.read(i)) << i;
            return to_pm1(static_cast<int>(mix(trial, x) % 3 == 0));
        };
        const auto table = an::truth_table(f, n);
        const auto fr = an::fourier(table);
        double mean = 0, second = 0;
        for (auto v : table.values) {
            mean += v;
            second += v * v;
        }
        mean /= table.values.size();
        second /= table.values.size();
        CHECK(std::abs(fr.empty - mean) < 1e-12);
        CHECK(std::abs(fr.variance - (second - mean * mean)) < 1e-12);
        CHECK(std::abs(fr.balance - (1 + mean) / 2) < 1e-12);
        for (int i = 0; i < n; ++i) {
            double c = 0;
            for (std::uint64_t x = 0; x < table.values.size(); ++x) c += table.values[x] * (((x >> i) & 1) ? 1.0 : -1.0);
            CHECK(std::abs(fr.level1[i] - c / table.values.size()) < 1e-12);
        }
    }
}

TEST_CASE("influence equals the level-1 coefficient for the monotone function") {
    const auto f = an::fourier(
        an::truth_table(make_function({ButterflyParams(1, 2, Ensemble::monotone), Algo::las_vegas, 1, 1}), 8));
    CHECK(f.monotone);
    for (int i = 0; i < 8; ++i) CHECK(f.influence[i] == doctest::Approx(f.level1[i]).epsilon(1e-12));
}

TEST_CASE("exact inequality suite at H=4, W=3") {
    const auto ev = make_evaluator({ButterflyParams(2, 3, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    const auto r = an::exact_revealment(ev);
    const auto f = an::fourier(an::truth_table(ev.truth, 12));
    const auto report = an::check_inequalities(f, r);
    CHECK(report.all_pass());
    for (const char* name : {"level1_sum", "level1_weight", "variance_revealment", "error_lower_bound"}) {
        const auto* rec = report.find(name);
        REQUIRE(rec);
        CHECK(rec->exact.value_or(false));
        CHECK(rec->tolerance == an::exact_tolerance);
        CHECK(rec->slack == doctest::Approx(rec->right - rec->left));
    }
    CHECK(report.find("error_lower_bound")->left == doctest::Approx(std::sqrt(1.0 / 24)));
    CHECK(report.find("error_lower_bound")->right == doctest::Approx(151.0 / 192.0));
    // not monotone: no Var <= delta^{3/2} sqrt(n) record
    CHECK(report.find("monotone_variance_bound") == nullptr);
}

TEST_CASE("statistical inequality records carry a tolerance") {
    const auto ev = make_evaluator({ButterflyParams(2, 3, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    const auto r = an::estimate_revealment(ev, 5000, 41);
    const auto f = an::fourier(an::truth_table(ev.truth, 12));
    const auto report = an::check_inequalities(f, r);
    CHECK(report.all_pass());
    for (const auto& rec : report.records) {
        CHECK_FALSE(rec.exact.has_value());
        CHECK(rec.tolerance >= 0);
    }
}

TEST_CASE("mismatched sizes are rejected") {
    const auto f = an::fourier(an::truth_table(parity, 4));
    const auto r = an::exact_revealment(dictator_evaluator(5));
    CHECK_THROWS_AS(an::check_inequalities(f, r), std::invalid_argument);
}

TEST_CASE("sampled read frequencies converge to the exact ones") {
    const auto ev = make_evaluator({ButterflyParams(2, 3, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    const auto exact = an::exact_revealment(ev);
    int within = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = an::estimate_revealment(ev, 2000, seed);
        CHECK(r.trials == 2000);
        for (std::uint64_t i = 0; i < r.n; ++i) {
            within += std::abs(r.delta[i] - exact.delta[i]) <= 4 * r.se[i] + 1e-12;
            ++total;
        }
    }
    CHECK(within >= 0.95 * total);
}

TEST_CASE("Monte Carlo error measurement") {
    const auto ev = make_evaluator({ButterflyParams(4, 16, Ensemble::nonmonotone), Algo::monte_carlo, 1, 1});
    const auto r = an::estimate_revealment(ev, 4000, 42, {Execution::parallel, true});
    CHECK(r.errors_measured);
    CHECK(r.errors > 0);
    CHECK(r.error_rate == doctest::Approx(double(r.errors) / 4000));
    const auto lv = make_evaluator({ButterflyParams(4, 16, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    CHECK(an::estimate_revealment(lv, 4000, 42, {Execution::parallel, true}).errors == 0);
    CHECK_THROWS_AS(an::exact_revealment(ev), std::invalid_argument);
}

TEST_CASE("splice experiment") {
    SUBCASE("small overlaps exercise both replays") {
        const auto r = an::splice_experiment(random_bit_evaluator(50), 20000, 43);
        CHECK(r.replay_x_ok == r.trials);
        CHECK(r.replay_y_applicable > 0);
        CHECK(r.replay_y_ok == r.replay_y_applicable);
        CHECK(r.sum_delta_sq == doctest::Approx(1.0 / 50).epsilon(0.1));
        CHECK(std::abs(r.mean_overlap - r.sum_delta_sq) <= 4 * r.mean_overlap_se);
        CHECK(r.overlap_positive <= r.sum_delta_sq + 4 * r.overlap_positive_se);
    }
    SUBCASE("Las Vegas evaluator") {
        const auto ev = make_evaluator({ButterflyParams(3, 8, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
        const auto r = an::splice_experiment(ev, 2000, 44);
        CHECK(r.replay_x_ok == r.trials);
        CHECK(r.replay_y_ok == r.replay_y_applicable);
        CHECK(r.overlap_positive <= r.sum_delta_sq + 4 * r.overlap_positive_se);
        // a zero-error evaluator agrees with itself on the spliced input
        CHECK(r.agreement == 1.0);
    }
}

TEST_CASE("size guards") {
    CHECK_THROWS_AS(an::truth_table(parity, 25), an::ResourceError);
    const auto big = make_evaluator({ButterflyParams(3, 6, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    CHECK_THROWS_AS(an::exact_revealment(big), an::ResourceError);
    const auto ev = make_evaluator({ButterflyParams(2, 3, Ensemble::nonmonotone), Algo::las_vegas, 1, 1});
    ::setenv("REVEALMENT_MAX_ENUM", "1000", 1);
    CHECK(an::max_enumeration() == 1000);
    CHECK_THROWS_AS(an::exact_revealment(ev), an::ResourceError);
    ::unsetenv("REVEALMENT_MAX_ENUM");
    CHECK(an::max_enumeration() == an::default_max_enumeration);
    CHECK_NOTHROW(an::exact_revealment(ev));
    CHECK_THROWS_AS(an::estimate_revealment(ev, 0, 1), std::invalid_argument);
}
