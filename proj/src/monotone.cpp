#include "revealment/monotone.hpp"

#include <algorithm>
#include <limits>

#include "revealment/parallel.hpp"
#include "revealment/rng.hpp"

namespace revealment::monotone {
namespace {

constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t max_label_height = 1u << 14;

void require_monotone(const ButterflyParams& p) {
    if (p.ensemble() != Ensemble::monotone && p.ensemble() != Ensemble::monotone_pair) {
        throw ParameterError("expected a monotone layout, got " + std::string(to_string(p.ensemble())));
    }
}

std::uint32_t next_t(const ButterflyParams& p, std::uint32_t t) { return t + 1 == p.W() ? 0 : t + 1; }

// Position of the edge bit for (h, t, which) in experiment e; no validation.
std::uint64_t edge_bit(const ButterflyParams& p, std::uint32_t h, std::uint32_t t, int which, int e) {
    return e * p.bits_per_experiment() + 2 * (h + std::uint64_t{p.H()} * t) + static_cast<unsigned>(which);
}

// Enumerates every open path of length W from (u, t) back to (u, t). The last
// d choices are forced by u because W >= d. Reads go through the tape, so the
// caller must only use this where those bits were already read.
void enumerate_from(const ButterflyParams& p, InputTape& tape, int e, VertexId start, CycleSet& out) {
    const std::uint32_t W = p.W();
    const std::uint32_t d = static_cast<std::uint32_t>(p.d());
    std::vector<VertexId> path;
    path.reserve(W);
    auto dfs = [&](auto&& self, VertexId v, std::uint32_t step) -> void {
        if (step == W) {
            if (v == start) out.cycles.push_back(make_cycle(p, path));
            return;
        }
        path.push_back(v);
        for (int which = 0; which < 2; ++which) {
            // Step index i in [W-d, W) must emit bit (W-1-i) of start.h.
            if (step + d >= W && ((start.h >> (W - 1 - step)) & 1u) != static_cast<std::uint32_t>(which)) {
                continue;
            }
            if (!tape.read(edge_bit(p, v.h, v.t, which, e))) continue;
            self(self, VertexId{(2 * v.h + static_cast<std::uint32_t>(which)) & (p.H() - 1), next_t(p, v.t)},
                 step + 1);
        }
        path.pop_back();
    };
    dfs(dfs, start, 0);
}

void check_experiment(const ButterflyParams& p, int e) {
    if (e < 0 || e >= experiments(p.ensemble())) throw ParameterError("experiment index out of range");
}

}  // namespace

std::uint32_t default_width(std::uint32_t H) {
    return static_cast<std::uint32_t>(std::floor(c_star * std::sqrt(2.0 * H)));
}

double s_recursion(std::uint64_t t) {
    double s = 1.0;
    for (std::uint64_t i = 0; i < t; ++i) s -= 0.25 * s * s;
    return s;
}

double las_vegas_read_bound(std::uint32_t W) {
    double s = 1.0;
    double sum = 0.0;
    for (std::uint32_t t = 0; t < W; ++t) {
        sum += s;
        s -= 0.25 * s * s;
    }
    return sum / W;
}

bool edge_open(const ButterflyParams& p, VertexId v, int which, InputTape& tape, int experiment) {
    require_monotone(p);
    return tape.read(bit_index(p, v, which, experiment)) != 0;
}

CycleSet winding_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0, int experiment) {
    require_monotone(p);
    check_experiment(p, experiment);
    if (t0 >= p.W()) throw ParameterError("t0 out of range");
    const std::uint32_t H = p.H();
    if (H > max_label_height) throw ParameterError("winding_cycles supports H <= 2^14");
    const std::size_t words = (H + 63) / 64;

    std::vector<std::uint32_t> cur_h(H);
    std::vector<std::uint64_t> cur_bits(H * words, 0);
    for (std::uint32_t h = 0; h < H; ++h) {
        cur_h[h] = h;
        cur_bits[h * words + h / 64] |= std::uint64_t{1} << (h % 64);
    }
    std::vector<std::uint32_t> next_h;
    std::vector<std::uint64_t> next_bits;
    std::vector<std::uint32_t> slot(H, none);
    std::vector<std::uint32_t> stamp(H, none);

    std::uint32_t t = t0;
    for (std::uint32_t s = 0; s < p.W() && !cur_h.empty(); ++s) {
        next_h.clear();
        next_bits.clear();
        for (std::size_t k = 0; k < cur_h.size(); ++k) {
            const std::uint32_t h = cur_h[k];
            const int open[2] = {tape.read(edge_bit(p, h, t, 0, experiment)),
                                 tape.read(edge_bit(p, h, t, 1, experiment))};
            for (int which = 0; which < 2; ++which) {
                if (!open[which]) continue;
                const std::uint32_t nh = (2 * h + static_cast<std::uint32_t>(which)) & (H - 1);
                if (stamp[nh] != s) {
                    stamp[nh] = s;
                    slot[nh] = static_cast<std::uint32_t>(next_h.size());
                    next_h.push_back(nh);
                    next_bits.resize(next_bits.size() + words, 0);
                }
                std::uint64_t* dst = &next_bits[slot[nh] * words];
                const std::uint64_t* src = &cur_bits[k * words];
                for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
            }
        }
        cur_h.swap(next_h);
        cur_bits.swap(next_bits);
        t = next_t(p, t);
    }

    CycleSet out;
    for (std::size_t k = 0; k < cur_h.size(); ++k) {
        const std::uint32_t u = cur_h[k];
        if ((cur_bits[k * words + u / 64] >> (u % 64)) & 1u) {
            enumerate_from(p, tape, experiment, VertexId{u, t0}, out);
        }
    }
    canonicalize(out);
    return out;
}

std::vector<VertexId> cycle_of_string(const ButterflyParams& p, std::uint64_t bits) {
    const std::uint32_t W = p.W();
    const std::uint32_t d = static_cast<std::uint32_t>(p.d());
    if (W < d) throw ParameterError("winding strings need W >= d");
    std::vector<VertexId> cycle(W);
    for (std::uint32_t t = 0; t < W; ++t) {
        std::uint32_t h = 0;
        for (std::uint32_t j = 1; j <= d; ++j) {
            const std::uint32_t i = (t + W - j) % W;
            h |= static_cast<std::uint32_t>((bits >> i) & 1u) << (j - 1);
        }
        cycle[t] = VertexId{h, t};
    }
    return cycle;
}

std::uint64_t count_winding_cycles(const ButterflyParams& p, InputTape& tape, CountMethod method,
                                   int experiment) {
    require_monotone(p);
    check_experiment(p, experiment);
    if (method == CountMethod::frontier) return winding_cycles(p, tape, 0, experiment).size();

    const std::uint32_t W = p.W();
    if (W > 24) throw ParameterError("exact string counting needs W <= 24");
    const std::uint32_t d = static_cast<std::uint32_t>(p.d());
    const std::uint32_t mask = p.H() - 1;
    std::uint64_t count = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << W); ++bits) {
        // h at slice 0 is the d choices before it, circularly.
        std::uint32_t h = 0;
        for (std::uint32_t j = 1; j <= d; ++j) {
            h |= static_cast<std::uint32_t>((bits >> ((W - j) % W)) & 1u) << (j - 1);
        }
        bool open = true;
        for (std::uint32_t t = 0; t < W && open; ++t) {
            const int which = static_cast<int>((bits >> t) & 1u);
            open = tape.peek(edge_bit(p, h, t, which, experiment)) != 0;
            h = (2 * h + static_cast<std::uint32_t>(which)) & mask;
        }
        count += open ? 1 : 0;
    }
    return count;
}

MonotoneFunctionSpec::MonotoneFunctionSpec(ButterflyParams p, std::uint32_t k_) : params(p), k(k_) {
    require_monotone(params);
    if (k < 1 || k > params.H()) {
        throw ParameterError("suitable-set size k must lie in [1, H], got " + std::to_string(k));
    }
}

Suitability classify(const CycleSet& cycles, std::uint32_t k) {
    const std::int64_t h = cycles.min_slice0();
    if (h < 0 || h >= static_cast<std::int64_t>(k)) return Suitability::none;
    return h + 1 < static_cast<std::int64_t>(k) ? Suitability::complete : Suitability::marginal;
}

int combine(std::span<const Suitability> parts) {
    if (parts.size() == 1) return parts[0] == Suitability::none ? -1 : 1;
    if (parts.size() != 2) throw std::invalid_argument("expected one or two experiments");
    if (parts[0] == Suitability::complete || parts[1] == Suitability::complete) return 1;
    if (parts[0] == Suitability::none && parts[1] == Suitability::none) return -1;
    return parts[0] != Suitability::none && parts[1] != Suitability::none ? 1 : -1;
}

int f_monotone(const MonotoneFunctionSpec& spec, InputTape& tape) {
    const int count = experiments(spec.params.ensemble());
    std::vector<Suitability> parts;
    for (int e = 0; e < count; ++e) parts.push_back(classify(winding_cycles(spec.params, tape, 0, e), spec.k));
    return combine(parts);
}

EvalOutcome evaluate_las_vegas_at(const MonotoneFunctionSpec& spec, InputTape& tape,
                                  std::span<const std::uint32_t> t0s) {
    const int count = experiments(spec.params.ensemble());
    if (t0s.size() != static_cast<std::size_t>(count)) throw ParameterError("need one t0 per experiment");
    EvalOutcome out;
    std::vector<Suitability> parts;
    for (int e = 0; e < count; ++e) {
        parts.push_back(classify(winding_cycles(spec.params, tape, t0s[e], e), spec.k));
        out.t0.push_back(t0s[e]);
    }
    out.value = combine(parts);
    out.bits_read = tape.read_count();
    return out;
}

EvalOutcome evaluate_las_vegas(const MonotoneFunctionSpec& spec, InputTape& tape, std::uint64_t seed) {
    SplitMix rng(seed);
    std::vector<std::uint32_t> t0s(experiments(spec.params.ensemble()));
    for (auto& t0 : t0s) t0 = static_cast<std::uint32_t>(rng.below(spec.params.W()));
    return evaluate_las_vegas_at(spec, tape, t0s);
}

CycleSet discover_winding_cycles(const ButterflyParams& p, InputTape& tape, int experiment,
                                 std::span<const std::uint64_t> seeds) {
    require_monotone(p);
    check_experiment(p, experiment);
    const std::uint32_t W = p.W();
    const std::uint32_t H = p.H();
    std::vector<std::uint32_t> depth(p.vertex_count(), none);
    std::vector<std::uint64_t> layer;
    std::vector<std::uint64_t> next;
    std::vector<std::uint64_t> shallow;  // depth <= W
    for (auto f : seeds) {
        if (f >= p.vertex_count()) throw ParameterError("seed vertex out of range");
        if (depth[f] == none) {
            depth[f] = 0;
            layer.push_back(f);
        }
    }
    for (std::uint32_t j = 0; j < 2 * W && !layer.empty(); ++j) {
        next.clear();
        for (auto f : layer) {
            if (j <= W) shallow.push_back(f);
            const auto h = static_cast<std::uint32_t>(f % H);
            const auto t = static_cast<std::uint32_t>(f / H);
            const int open[2] = {tape.read(edge_bit(p, h, t, 0, experiment)),
                                 tape.read(edge_bit(p, h, t, 1, experiment))};
            for (int which = 0; which < 2; ++which) {
                if (!open[which]) continue;
                const std::uint64_t g = ((2 * h + static_cast<std::uint32_t>(which)) & (H - 1)) +
                                        std::uint64_t{H} * next_t(p, t);
                if (depth[g] == none) {
                    depth[g] = j + 1;
                    next.push_back(g);
                }
            }
        }
        layer.swap(next);
    }

    CycleSet out;
    for (auto f : shallow) enumerate_from(p, tape, experiment, p.vertex(f), out);
    canonicalize(out);
    return out;
}

EvalOutcome evaluate_monte_carlo_from(const MonotoneFunctionSpec& spec, InputTape& tape,
                                      std::span<const std::vector<std::uint64_t>> seed_sets) {
    const int count = experiments(spec.params.ensemble());
    if (seed_sets.size() != static_cast<std::size_t>(count)) {
        throw ParameterError("need one seed set per experiment");
    }
    EvalOutcome out;
    std::vector<Suitability> parts;
    for (int e = 0; e < count; ++e) {
        parts.push_back(classify(discover_winding_cycles(spec.params, tape, e, seed_sets[e]), spec.k));
        for (auto f : seed_sets[e]) out.starts.push_back(spec.params.vertex(f));
    }
    out.value = combine(parts);
    out.bits_read = tape.read_count();
    return out;
}

EvalOutcome evaluate_monte_carlo(const MonotoneFunctionSpec& spec, InputTape& tape, std::uint32_t m,
                                 std::uint64_t seed) {
    if (m < 1) throw ParameterError("Monte Carlo evaluation needs m >= 1");
    const ButterflyParams& p = spec.params;
    const double prob = std::min(1.0, static_cast<double>(m) / p.H());
    SplitMix rng(seed);
    std::vector<std::vector<std::uint64_t>> sets(experiments(p.ensemble()));
    for (auto& set : sets) {
        for (std::uint64_t f = 0; f < p.vertex_count(); ++f) {
            if (rng.uniform() < prob) set.push_back(f);
        }
    }
    return evaluate_monte_carlo_from(spec, tape, sets);
}

namespace {

struct CalibrationWorker {
    ButterflyParams params;
    std::uint64_t seed;
    std::vector<std::uint64_t> first_hit;  // first_hit[h]: trials whose smallest cycle vertex is h
    std::vector<std::uint64_t> on_cycle;
    InputTape tape;

    CalibrationWorker(ButterflyParams p, std::uint64_t s)
        : params(p), seed(s), first_hit(p.H(), 0), on_cycle(p.H(), 0),
          tape(InputTape::pseudorandom(p.n(), s, 0)) {}

    void operator()(std::uint64_t trial) {
        tape.reseed(derive_seed(seed, trial, Stream::input), trial);
        const CycleSet cycles = winding_cycles(params, tape, 0, 0);
        const std::int64_t h = cycles.min_slice0();
        if (h >= 0) ++first_hit[static_cast<std::size_t>(h)];
        for (const auto& c : cycles.cycles) {
            for (auto x : c.slice0) ++on_cycle[x];
        }
    }

    void merge(const CalibrationWorker& other) {
        for (std::size_t h = 0; h < first_hit.size(); ++h) {
            first_hit[h] += other.first_hit[h];
            on_cycle[h] += other.on_cycle[h];
        }
    }
};

struct MomentWorker {
    ButterflyParams params;
    std::uint64_t seed;
    CountMethod method;
    std::uint64_t sum_n = 0;
    unsigned __int128 sum_n2 = 0;
    unsigned __int128 sum_n4 = 0;
    std::uint64_t positive = 0;
    InputTape tape;

    MomentWorker(ButterflyParams p, std::uint64_t s, CountMethod m)
        : params(p), seed(s), method(m), tape(InputTape::pseudorandom(p.n(), s, 0)) {}

    void operator()(std::uint64_t trial) {
        tape.reseed(derive_seed(seed, trial, Stream::input), trial);
        const std::uint64_t n = count_winding_cycles(params, tape, method, 0);
        const unsigned __int128 n2 = static_cast<unsigned __int128>(n) * n;
        sum_n += n;
        sum_n2 += n2;
        sum_n4 += n2 * n2;
        positive += n > 0 ? 1 : 0;
    }

    void merge(const MomentWorker& other) {
        sum_n += other.sum_n;
        sum_n2 += other.sum_n2;
        sum_n4 += other.sum_n4;
        positive += other.positive;
    }
};

double standard_error(double mean, double mean_sq, std::uint64_t trials) {
    if (trials < 2) return 0.0;
    const double var = std::max(0.0, mean_sq - mean * mean) * trials / (trials - 1.0);
    return std::sqrt(var / trials);
}

}  // namespace

Calibration calibrate_k(std::uint32_t H, std::uint32_t W, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw ParameterError("calibration needs at least one trial");
    const ButterflyParams p = ButterflyParams::from_height(H, W, Ensemble::monotone);
    const auto total = run_trials(trials, [&] { return CalibrationWorker(p, seed); });

    Calibration cal;
    cal.trials = trials;
    cal.target = suitable_target;
    std::uint64_t cumulative = 0;
    cal.k = 0;
    for (std::uint32_t h = 0; h < H; ++h) {
        cumulative += total.first_hit[h];
        const double est = static_cast<double>(cumulative) / trials;
        cal.by_k.push_back(est);
        cal.on_cycle.push_back(static_cast<double>(total.on_cycle[h]) / trials);
        if (cal.k == 0 && est >= cal.target) cal.k = h + 1;
    }
    if (cal.k == 0) {
        cal.k = H;
        cal.uncertain = true;
    }
    cal.estimate = cal.by_k[cal.k - 1];
    cal.se = std::sqrt(cal.estimate * (1 - cal.estimate) / trials);
    if (2 * cal.se > 1.0 / H) cal.uncertain = true;
    return cal;
}

SecondMomentReport second_moment_experiment(std::uint32_t H, std::uint32_t W, std::uint64_t trials,
                                            std::uint64_t seed, CountMethod method) {
    if (trials < 1) throw ParameterError("second moment experiment needs at least one trial");
    const ButterflyParams p = ButterflyParams::from_height(H, W, Ensemble::monotone);
    if (method == CountMethod::strings && W > 24) throw ParameterError("exact string counting needs W <= 24");
    const auto total = run_trials(trials, [&] { return MomentWorker(p, seed, method); });

    SecondMomentReport r;
    r.H = H;
    r.W = W;
    r.c = W / std::sqrt(2.0 * H);
    r.trials = trials;
    r.seed = seed;
    const double R = static_cast<double>(trials);
    r.mean_n = total.sum_n / R;
    r.mean_n2 = static_cast<double>(total.sum_n2) / R;
    r.freq_positive = total.positive / R;
    r.mean_n_se = standard_error(r.mean_n, r.mean_n2, trials);
    r.mean_n2_se = standard_error(r.mean_n2, static_cast<double>(total.sum_n4) / R, trials);
    r.freq_positive_se = standard_error(r.freq_positive, r.freq_positive, trials);
    r.n2_upper_bound = std::exp(r.c) + std::exp(-r.c);
    r.positive_lower_bound = 1.0 / r.n2_upper_bound;
    return r;
}

}  // namespace revealment::monotone
