#include "revealment/nonmonotone.hpp"

#include <limits>
#include <unordered_map>

#include "revealment/rng.hpp"

namespace revealment::nonmonotone {
namespace {

constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

void require_nonmonotone(const ButterflyParams& p) {
    if (p.ensemble() != Ensemble::nonmonotone && p.ensemble() != Ensemble::nonmonotone_symmetric) {
        throw ParameterError("expected a nonmonotone layout, got " + std::string(to_string(p.ensemble())));
    }
}

// Unchecked routing for inner loops; (h, t) are known to be valid.
int route(const ButterflyParams& p, std::uint32_t h, std::uint32_t t, InputTape& tape) {
    const std::uint64_t f = h + std::uint64_t{p.H()} * t;
    if (p.ensemble() == Ensemble::nonmonotone_symmetric) {
        const std::uint64_t base = 4 * f;
        return tape.read(base) ^ tape.read(base + 1) ^ tape.read(base + 2) ^ tape.read(base + 3);
    }
    return tape.read(f);
}

std::uint32_t next_h(const ButterflyParams& p, std::uint32_t h, int b) {
    return (2 * h + static_cast<std::uint32_t>(b)) & (p.H() - 1);
}

std::uint32_t next_t(const ButterflyParams& p, std::uint32_t t) { return t + 1 == p.W() ? 0 : t + 1; }

}  // namespace

int routing_bit(const ButterflyParams& p, VertexId v, InputTape& tape) {
    require_nonmonotone(p);
    p.check(v);
    return route(p, v.h, v.t, tape);
}

VertexId out_vertex(const ButterflyParams& p, VertexId v, InputTape& tape) {
    return successor(p, v, routing_bit(p, v, tape));
}

int bprime(int b0, int b1, int b2, int b3) {
    const int b[4] = {b0 & 1, b1 & 1, b2 & 1, b3 & 1};
    const int weight = b[0] + b[1] + b[2] + b[3];
    if (weight == 1) return 1;
    if (weight != 2) return 0;
    for (int j = 0; j < 4; ++j) {
        if (b[j] && b[(j + 1) % 4]) return 1;
    }
    return 0;
}

CycleSet find_all_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                         std::vector<std::uint32_t>* active_counts) {
    require_nonmonotone(p);
    if (t0 >= p.W()) throw ParameterError("t0 out of range");
    const std::uint32_t H = p.H();
    const std::uint32_t W = p.W();

    // One node per distinct active vertex per step; steps are contiguous.
    // next[k] is the node at the following step that node k moves to.
    std::vector<std::uint32_t> node_h(H);
    std::vector<std::uint32_t> next;
    for (std::uint32_t h = 0; h < H; ++h) node_h[h] = h;
    std::vector<std::uint32_t> slot(H, none);
    std::vector<std::uint32_t> slot_stamp(H, none);

    if (active_counts) active_counts->assign(1, H);
    std::size_t begin = 0;
    std::size_t end = H;
    std::uint32_t t = t0;
    for (std::uint32_t s = 0; s < W; ++s) {
        next.resize(end);
        for (std::size_t k = begin; k < end; ++k) {
            const std::uint32_t nh = next_h(p, node_h[k], route(p, node_h[k], t, tape));
            if (slot_stamp[nh] != s) {
                slot_stamp[nh] = s;
                slot[nh] = static_cast<std::uint32_t>(node_h.size());
                node_h.push_back(nh);
            }
            next[k] = slot[nh];
        }
        begin = end;
        end = node_h.size();
        if (active_counts) active_counts->push_back(static_cast<std::uint32_t>(end - begin));
        t = next_t(p, t);
    }

    // Resolve every step-0 node to its position after W steps (back at t0).
    std::vector<std::uint32_t> final_h(node_h.size());
    for (std::size_t k = begin; k < end; ++k) final_h[k] = node_h[k];
    for (std::size_t k = begin; k-- > 0;) final_h[k] = final_h[next[k]];

    // Cyclic points of the first-return map F(u) = final_h[u].
    std::vector<std::uint8_t> state(H, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::uint32_t> stack;
    CycleSet out;
    for (std::uint32_t u = 0; u < H; ++u) {
        if (state[u]) continue;
        stack.clear();
        std::uint32_t x = u;
        while (state[x] == 0) {
            state[x] = 1;
            stack.push_back(x);
            x = final_h[x];
        }
        if (state[x] == 1) {
            // x starts a new orbit; expand it into a full vertex walk.
            std::vector<VertexId> walk;
            VertexId v{x, t0};
            do {
                walk.push_back(v);
                v = VertexId{next_h(p, v.h, route(p, v.h, v.t, tape)), next_t(p, v.t)};
            } while (!(v.h == x && v.t == t0));
            out.cycles.push_back(make_cycle(p, std::move(walk)));
        }
        for (auto y : stack) state[y] = 2;
    }
    canonicalize(out);
    return out;
}

int value_from_cycles(const ButterflyParams& p, const CycleSet& cycles, InputTape& tape) {
    require_nonmonotone(p);
    if (p.ensemble() == Ensemble::nonmonotone_symmetric) {
        int acc = 0;
        for (const auto& c : cycles.cycles) {
            for (const auto& v : c.vertices) {
                const std::uint64_t base = 4 * p.flat(v);
                acc ^= bprime(tape.read(base), tape.read(base + 1), tape.read(base + 2), tape.read(base + 3));
            }
        }
        return to_pm1(acc);
    }
    const std::int64_t h = cycles.min_slice0();
    if (h < 0) throw std::logic_error("cycle set has no slice-0 vertex");
    return to_pm1(tape.read(p.flat(VertexId{static_cast<std::uint32_t>(h), 0})));
}

int f_lex(const ButterflyParams& p, InputTape& tape) {
    if (p.ensemble() != Ensemble::nonmonotone) throw ParameterError("f_lex needs the nonmonotone layout");
    return value_from_cycles(p, find_all_cycles(p, tape, 0), tape);
}

int f_symmetric(const ButterflyParams& p, InputTape& tape) {
    if (p.ensemble() != Ensemble::nonmonotone_symmetric) {
        throw ParameterError("f_symmetric needs the symmetric layout");
    }
    return value_from_cycles(p, find_all_cycles(p, tape, 0), tape);
}

int f_direct(const ButterflyParams& p, InputTape& tape) {
    return value_from_cycles(p, find_all_cycles(p, tape, 0), tape);
}

EvalOutcome evaluate_las_vegas_at(const ButterflyParams& p, InputTape& tape, std::uint32_t t0) {
    EvalOutcome out;
    const CycleSet cycles = find_all_cycles(p, tape, t0);
    out.value = value_from_cycles(p, cycles, tape);
    out.t0 = {t0};
    out.bits_read = tape.read_count();
    return out;
}

EvalOutcome evaluate_las_vegas(const ButterflyParams& p, InputTape& tape, std::uint64_t seed) {
    SplitMix rng(seed);
    return evaluate_las_vegas_at(p, tape, static_cast<std::uint32_t>(rng.below(p.W())));
}

CycleSet discover_cycles(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                         std::span<const std::uint32_t> start_heights) {
    require_nonmonotone(p);
    if (t0 >= p.W()) throw ParameterError("t0 out of range");
    struct Visit {
        std::uint32_t path;
        std::uint32_t step;
    };
    std::unordered_map<std::uint64_t, Visit> visited;
    std::vector<VertexId> trace;
    CycleSet out;
    for (std::uint32_t j = 0; j < start_heights.size(); ++j) {
        if (start_heights[j] >= p.H()) throw ParameterError("start height out of range");
        trace.clear();
        VertexId v{start_heights[j], t0};
        for (;;) {
            const auto it = visited.find(p.flat(v));
            if (it != visited.end()) {
                if (it->second.path == j) {
                    std::vector<VertexId> walk(trace.begin() + it->second.step, trace.end());
                    out.cycles.push_back(make_cycle(p, std::move(walk)));
                }
                break;
            }
            visited.emplace(p.flat(v), Visit{j, static_cast<std::uint32_t>(trace.size())});
            trace.push_back(v);
            v = VertexId{next_h(p, v.h, route(p, v.h, v.t, tape)), next_t(p, v.t)};
        }
    }
    canonicalize(out);
    return out;
}

EvalOutcome evaluate_monte_carlo_from(const ButterflyParams& p, InputTape& tape, std::uint32_t t0,
                                      std::span<const std::uint32_t> start_heights) {
    if (start_heights.empty()) throw ParameterError("Monte Carlo evaluation needs at least one start");
    EvalOutcome out;
    const CycleSet cycles = discover_cycles(p, tape, t0, start_heights);
    out.value = value_from_cycles(p, cycles, tape);
    out.t0 = {t0};
    for (auto h : start_heights) out.starts.push_back(VertexId{h, t0});
    out.bits_read = tape.read_count();
    return out;
}

EvalOutcome evaluate_monte_carlo(const ButterflyParams& p, InputTape& tape, std::uint32_t m,
                                 std::uint64_t seed) {
    if (m < 1) throw ParameterError("Monte Carlo evaluation needs m >= 1");
    SplitMix rng(seed);
    const auto t0 = static_cast<std::uint32_t>(rng.below(p.W()));
    std::vector<std::uint32_t> starts(m);
    for (auto& h : starts) h = static_cast<std::uint32_t>(rng.below(p.H()));
    return evaluate_monte_carlo_from(p, tape, t0, starts);
}

}  // namespace revealment::nonmonotone
