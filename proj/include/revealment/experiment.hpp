#pragma once

// Reproducible experiment runner behind the command-line tool. Every command
// is a pure function of its configuration and master seed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revealment/butterfly.hpp"
#include "revealment/evaluator.hpp"
#include "revealment/parallel.hpp"

namespace revealment::experiment {

/// Parameter regimes: part1 nonmonotone Las Vegas with W = H*d, part2
/// nonmonotone Monte Carlo with W = H, part3/part4 the balanced monotone pair
/// with W = floor(c* sqrt(2H)) evaluated by Las Vegas / Monte Carlo.
enum class Preset { none, part1, part2, part3, part4 };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name);

enum class Format { automatic, csv, json, text };
Format parse_format(std::string_view name);

struct ExperimentConfig {
    std::string command;
    Preset preset = Preset::none;
    std::optional<Ensemble> ensemble;
    std::optional<int> d;
    std::optional<std::uint32_t> H;
    std::optional<std::uint32_t> W;  // empty = auto
    std::optional<Algo> algo;
    std::optional<std::uint32_t> m;
    std::optional<std::uint32_t> k;  // empty = auto (calibrated)
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint64_t trial = 0;         // eval: trial index of the pseudorandom input
    std::optional<std::string> input_hex;
    Format format = Format::automatic;
    std::string out = "-";
    bool exact = false;              // revealment: exhaustive instead of sampled
    bool per_bit = false;            // revealment csv: per-bit columns
    int d_min = 4;                   // scaling sweep
    int d_max = 8;
    std::uint64_t calibration_trials = 4000;
    bool measure_error = true;       // Monte Carlo rows report disagreement with the true value
    Execution execution = Execution::parallel;
};

/// Config with every "auto" field replaced by its value.
struct Resolved {
    ButterflyParams params;
    Algo algo = Algo::las_vegas;
    std::uint32_t m = 1;
    std::uint32_t k = 1;
    bool k_calibrated = false;
    std::vector<std::string> warnings;

    EvaluatorConfig evaluator() const { return {params, algo, m, k}; }
};

/// Resolves ensemble, W, algorithm, m and k. `d_override` replaces the
/// configured height (used by sweeps). Throws ParameterError.
Resolved resolve(const ExperimentConfig& config, std::optional<int> d_override = std::nullopt);

/// Runs the configured command and writes its artifacts to `out`
/// (diagnostics to `err`). Returns the process exit status.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace revealment::experiment
