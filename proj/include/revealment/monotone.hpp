#pragma once

// Edge-percolation ensemble: both outgoing edges of every vertex carry their
// own bit and are open iff that bit is 1. The functions here only consult
// winding cycles (length exactly W, one vertex per time slice).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "revealment/butterfly.hpp"
#include "revealment/cycles.hpp"
#include "revealment/tape.hpp"

namespace revealment::monotone {

/// Root of 1/(e^c + e^-c) = 1 - 1/sqrt(2).
inline constexpr double c_star = 1.12838;
/// Target probability that a suitable cycle exists, 1 - 1/sqrt(2).
inline const double suitable_target = 1.0 - 1.0 / std::sqrt(2.0);

/// floor(c_star * sqrt(2H)).
std::uint32_t default_width(std::uint32_t H);

/// Probability that the root of a binary tree with half-open edges connects
/// to depth t: S_0 = 1, S_{t+1} = S_t - S_t^2 / 4.
double s_recursion(std::uint64_t t);
/// (1/W) * sum_{t<W} S_t, the per-bit read bound of the Las Vegas evaluator.
double las_vegas_read_bound(std::uint32_t W);

bool edge_open(const ButterflyParams& p, VertexId v, int which, InputTape& tape, int experiment = 0);

/// Label-propagation frontier from every vertex of slice t0 for W steps,
/// reading both edge bits of each reached vertex, followed by enumeration of
/// the length-W cycles through each origin whose label came back to it.
/// Requires H <= 2^14 (dense label sets).
CycleSet winding_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0, int experiment = 0);

/// Length-W cycle selected by a circular string of W choice bits: the vertex
/// at slice t has h = the d choices preceding t read as a binary number.
std::vector<VertexId> cycle_of_string(const ButterflyParams& p, std::uint64_t bits);

enum class CountMethod { frontier, strings };

/// Number of open winding cycles N. The strings route checks all 2^W
/// candidates without touching the read log and needs W <= 24.
std::uint64_t count_winding_cycles(const ButterflyParams& p, InputTape& tape, CountMethod method,
                                   int experiment = 0);

struct MonotoneFunctionSpec {
    ButterflyParams params;  // monotone (single experiment) or monotone_pair
    std::uint32_t k = 1;     // suitable set {(0,0), ..., (k-1,0)}; marginal vertex (k-1,0)

    MonotoneFunctionSpec(ButterflyParams p, std::uint32_t k);
};

enum class Suitability { none, marginal, complete };

Suitability classify(const CycleSet& cycles, std::uint32_t k);

/// Combines per-experiment classifications. Single experiment: +1 iff a
/// suitable cycle exists. Pair: +1 if either is complete, -1 if neither has
/// a suitable cycle, otherwise +1 iff both have one.
int combine(std::span<const Suitability> parts);

/// Full-information value (cycles found from slice 0 in each experiment).
int f_monotone(const MonotoneFunctionSpec& spec, InputTape& tape);

EvalOutcome evaluate_las_vegas_at(const MonotoneFunctionSpec& spec, InputTape& tape,
                                  std::span<const std::uint32_t> t0s);
/// Zero-error evaluator; each experiment draws its own uniform t0.
EvalOutcome evaluate_las_vegas(const MonotoneFunctionSpec& spec, InputTape& tape, std::uint64_t seed);

/// Explores all open paths of length <= 2W from the seed vertices (flat
/// indices), reading both edge bits of every vertex reached at depth < 2W.
/// Returns the winding cycles through vertices reached at depth <= W.
CycleSet discover_winding_cycles(const ButterflyParams& p, InputTape& tape, int experiment,
                                 std::span<const std::uint64_t> seeds);

/// Monte Carlo evaluator with explicit seed sets, one per experiment.
EvalOutcome evaluate_monte_carlo_from(const MonotoneFunctionSpec& spec, InputTape& tape,
                                      std::span<const std::vector<std::uint64_t>> seed_sets);
/// Monte Carlo evaluator: every vertex joins the seed set with probability
/// min(1, m/H) independently. Throws ParameterError for m < 1.
EvalOutcome evaluate_monte_carlo(const MonotoneFunctionSpec& spec, InputTape& tape, std::uint32_t m,
                                 std::uint64_t seed);

struct Calibration {
    std::uint32_t k = 0;
    double estimate = 0;                 // Pr[suitable cycle exists] at k
    double se = 0;
    double target = 0;
    bool uncertain = false;              // 2*SE exceeds the 1/H resolution
    std::uint64_t trials = 0;
    std::vector<double> by_k;            // by_k[j] = estimate for k = j + 1
    std::vector<double> on_cycle;        // on_cycle[h] = Pr[(h,0) lies on a winding cycle]
};

/// Smallest k whose estimated suitable-cycle probability reaches
/// 1 - 1/sqrt(2), from `trials` single-experiment samples.
Calibration calibrate_k(std::uint32_t H, std::uint32_t W, std::uint64_t trials, std::uint64_t seed);

struct SecondMomentReport {
    std::uint32_t H = 0;
    std::uint32_t W = 0;
    double c = 0;  // W / sqrt(2H)
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_n = 0;
    double mean_n2 = 0;
    double freq_positive = 0;
    double mean_n_se = 0;
    double mean_n2_se = 0;
    double freq_positive_se = 0;
    double positive_lower_bound = 0;  // 1/(e^c + e^-c)
    double n2_upper_bound = 0;        // e^c + e^-c
};

SecondMomentReport second_moment_experiment(std::uint32_t H, std::uint32_t W, std::uint64_t trials,
                                            std::uint64_t seed, CountMethod method = CountMethod::frontier);

}  // namespace revealment::monotone
