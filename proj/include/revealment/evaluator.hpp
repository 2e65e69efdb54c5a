#pragma once

// Type-erased evaluator: what the measurement layer needs to run any
// algorithm on a tape, replay it with the same coins, and, for Las Vegas
// algorithms, enumerate its internal randomness exactly.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "revealment/butterfly.hpp"
#include "revealment/cycles.hpp"
#include "revealment/tape.hpp"

namespace revealment {

enum class Algo { las_vegas, monte_carlo };

std::string_view to_string(Algo a);
Algo parse_algo(std::string_view name);

struct Evaluator {
    std::string name;
    std::uint64_t n = 0;
    bool zero_error = false;
    /// One run with the given coin seed. Reads go to the tape's log.
    std::function<EvalOutcome(InputTape&, std::uint64_t coins)> run;
    /// Number of equally likely internal random choices; 0 if not enumerable.
    std::uint64_t choices = 0;
    std::function<EvalOutcome(InputTape&, std::uint64_t choice)> run_choice;
    /// Full-information function value; empty when unknown.
    std::function<int(InputTape&)> truth;
};

struct EvaluatorConfig {
    ButterflyParams params;
    Algo algo = Algo::las_vegas;
    std::uint32_t m = 1;  // Monte Carlo start count
    std::uint32_t k = 1;  // suitable-set size (monotone ensembles)
};

/// Builds the evaluator for the configured ensemble and algorithm.
Evaluator make_evaluator(const EvaluatorConfig& config);

/// Direct function value for the configured ensemble.
std::function<int(InputTape&)> make_function(const EvaluatorConfig& config);

/// Debug evaluators.
Evaluator dictator_evaluator(std::uint64_t n, std::uint64_t bit = 0);
Evaluator read_all_evaluator(std::uint64_t n, std::function<int(InputTape&)> f);

}  // namespace revealment
