#pragma once

// Measurement layer: per-bit read probabilities (sampled or exact), truth
// tables, level-0/1 Fourier data and influences, the inequality suite, and
// the two-run splice experiment.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "revealment/evaluator.hpp"
#include "revealment/parallel.hpp"
#include "revealment/tape.hpp"

namespace revealment::analysis {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Default cap on (inputs x internal choices) for exact enumeration; the
/// REVEALMENT_MAX_ENUM environment variable overrides it.
inline constexpr std::uint64_t default_max_enumeration = 1'000'000'000;
std::uint64_t max_enumeration();

enum class Mode { statistical, exact };

struct RevealmentReport {
    Mode mode = Mode::statistical;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;              // runs (inputs x choices in exact mode)
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> read_counts;
    std::vector<double> delta;             // per-bit read frequency
    std::vector<double> se;                // zero in exact mode
    double delta_max = 0;
    double delta_max_se = 0;
    std::uint64_t argmax = 0;
    double mean_read_fraction = 0;
    double mean_read_fraction_se = 0;
    std::uint64_t errors = 0;              // runs whose output differed from the true value
    bool errors_measured = false;
    double error_rate = 0;
    double error_rate_se = 0;
};

struct EstimateOptions {
    Execution execution = Execution::parallel;
    /// Compare every run with the full-information value (needs ev.truth).
    bool measure_error = false;
};

/// Runs the evaluator on `trials` fresh uniform tapes. Tape bits come from
/// stream `input` and coins from stream `coins` of (seed, trial).
RevealmentReport estimate_revealment(const Evaluator& ev, std::uint64_t trials, std::uint64_t seed,
                                     EstimateOptions options = {});

/// Exact read probabilities over all 2^n inputs and all internal choices.
/// Also counts disagreements with ev.truth when available.
RevealmentReport exact_revealment(const Evaluator& ev, Execution exec = Execution::parallel);

inline constexpr int max_table_bits = 24;

struct TruthTable {
    int n = 0;
    std::vector<std::int8_t> values;  // values[x] in {-1,+1}; bit i of x is input i
};

TruthTable truth_table(const std::function<int(InputTape&)>& f, int n, Execution exec = Execution::parallel);

/// Level-0 and level-1 Fourier data with x_i = +1 for bit 1, and exact
/// influences by bit-flip counting. Integer numerators are kept for exact checks.
struct FourierTable {
    int n = 0;
    std::uint64_t size = 0;                   // 2^n
    std::int64_t sum = 0;                     // sum_x f(x)
    std::vector<std::int64_t> level1_sum;     // sum_x f(x) x_i
    std::vector<std::uint64_t> flip_pairs;    // #{x : x_i = 0, f(x) != f(x ^ e_i)}
    double empty = 0;                         // f^(empty set)
    std::vector<double> level1;               // f^({i})
    std::vector<double> influence;            // I_i
    double variance = 0;                      // 1 - f^(empty)^2
    double balance = 0;                       // Pr[f = +1]
    std::uint64_t ones = 0;                   // #{x : f(x) = +1}
    bool monotone = false;
};

FourierTable fourier(const TruthTable& table, Execution exec = Execution::parallel);

struct InequalityRecord {
    std::string name;
    double left = 0;
    double right = 0;
    double slack = 0;        // right - left
    double tolerance = 0;
    bool pass = false;       // left <= right + tolerance
    std::optional<bool> exact;  // rational verdict, exact mode only
};

struct InequalityReport {
    std::vector<InequalityRecord> records;
    bool all_pass() const;
    const InequalityRecord* find(const std::string& name) const;
};

inline constexpr double exact_tolerance = 1e-9;
inline constexpr double statistical_sigmas = 4.0;

/// Level-1 sum bound, level-1 weight bound (k = 1), variance/revealment
/// bound, the error lower bound (as delta >= sqrt(Var/(2n)) when no errors
/// were observed) and, for monotone f, Var <= delta^{3/2} sqrt(n).
/// Throws std::invalid_argument when the two reports disagree on n.
InequalityReport check_inequalities(const FourierTable& f, const RevealmentReport& rev);

struct SpliceReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    double mean_overlap = 0;            // E[N], N = |reads(x-run) & reads(y-run)|
    double mean_overlap_se = 0;
    double overlap_positive = 0;        // Pr[N > 0]
    double overlap_positive_se = 0;
    double sum_delta_sq = 0;            // sum_i delta_i^2 from both runs
    double agreement = 0;               // Pr[A(r,z) = A(s,z)]
    double same_output = 0;             // Pr[A(r,x) = A(s,y)]
    std::uint64_t replay_x_ok = 0;      // A(r,z) = A(r,x) with the same reads
    std::uint64_t replay_y_ok = 0;      // A(s,z) = A(s,y) with the same reads, among N = 0
    std::uint64_t replay_y_applicable = 0;
};

SpliceReport splice_experiment(const Evaluator& ev, std::uint64_t trials, std::uint64_t seed,
                               Execution exec = Execution::parallel);

}  // namespace revealment::analysis
