#include "revealment/evaluator.hpp"

#include "revealment/monotone.hpp"
#include "revealment/nonmonotone.hpp"

namespace revealment {

std::string_view to_string(Algo a) { return a == Algo::las_vegas ? "lv" : "mc"; }

Algo parse_algo(std::string_view name) {
    if (name == "lv" || name == "las-vegas") return Algo::las_vegas;
    if (name == "mc" || name == "monte-carlo") return Algo::monte_carlo;
    throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

std::function<int(InputTape&)> make_function(const EvaluatorConfig& config) {
    const ButterflyParams p = config.params;
    switch (p.ensemble()) {
        case Ensemble::nonmonotone:
        case Ensemble::nonmonotone_symmetric:
            return [p](InputTape& tape) { return nonmonotone::f_direct(p, tape); };
        case Ensemble::monotone:
        case Ensemble::monotone_pair: {
            const monotone::MonotoneFunctionSpec spec(p, config.k);
            return [spec](InputTape& tape) { return monotone::f_monotone(spec, tape); };
        }
    }
    throw ParameterError("unsupported ensemble");
}

Evaluator make_evaluator(const EvaluatorConfig& config) {
    const ButterflyParams p = config.params;
    const std::uint32_t m = config.m;
    if (config.algo == Algo::monte_carlo && m < 1) throw ParameterError("Monte Carlo evaluation needs m >= 1");
    Evaluator ev;
    ev.n = p.n();
    ev.truth = make_function(config);
    ev.zero_error = config.algo == Algo::las_vegas;
    ev.name = std::string(to_string(p.ensemble())) + "-" + std::string(to_string(config.algo));

    const bool nonmono = p.ensemble() == Ensemble::nonmonotone || p.ensemble() == Ensemble::nonmonotone_symmetric;
    if (nonmono) {
        if (config.algo == Algo::las_vegas) {
            ev.run = [p](InputTape& tape, std::uint64_t coins) {
                return nonmonotone::evaluate_las_vegas(p, tape, coins);
            };
            ev.choices = p.W();
            ev.run_choice = [p](InputTape& tape, std::uint64_t choice) {
                return nonmonotone::evaluate_las_vegas_at(p, tape, static_cast<std::uint32_t>(choice));
            };
        } else {
            ev.run = [p, m](InputTape& tape, std::uint64_t coins) {
                return nonmonotone::evaluate_monte_carlo(p, tape, m, coins);
            };
        }
        return ev;
    }

    const monotone::MonotoneFunctionSpec spec(p, config.k);
    if (config.algo == Algo::las_vegas) {
        ev.run = [spec](InputTape& tape, std::uint64_t coins) {
            return monotone::evaluate_las_vegas(spec, tape, coins);
        };
        const std::uint64_t W = p.W();
        const int count = experiments(p.ensemble());
        ev.choices = count == 2 ? W * W : W;
        ev.run_choice = [spec, W, count](InputTape& tape, std::uint64_t choice) {
            std::vector<std::uint32_t> t0s;
            for (int e = 0; e < count; ++e, choice /= W) t0s.push_back(static_cast<std::uint32_t>(choice % W));
            return monotone::evaluate_las_vegas_at(spec, tape, t0s);
        };
    } else {
        ev.run = [spec, m](InputTape& tape, std::uint64_t coins) {
            return monotone::evaluate_monte_carlo(spec, tape, m, coins);
        };
    }
    return ev;
}

Evaluator dictator_evaluator(std::uint64_t n, std::uint64_t bit) {
    Evaluator ev;
    ev.name = "dictator";
    ev.n = n;
    ev.zero_error = true;
    auto once = [bit](InputTape& tape) {
        EvalOutcome out;
        out.value = to_pm1(tape.read(bit));
        out.bits_read = tape.read_count();
        return out;
    };
    ev.run = [once](InputTape& tape, std::uint64_t) { return once(tape); };
    ev.choices = 1;
    ev.run_choice = ev.run;
    ev.truth = [bit](InputTape& tape) { return to_pm1(tape.peek(bit)); };
    return ev;
}

Evaluator read_all_evaluator(std::uint64_t n, std::function<int(InputTape&)> f) {
    Evaluator ev;
    ev.name = "read-all";
    ev.n = n;
    ev.zero_error = true;
    ev.truth = f;
    ev.run = [n, f](InputTape& tape, std::uint64_t) {
        for (std::uint64_t i = 0; i < n; ++i) tape.read(i);
        EvalOutcome out;
        out.value = f(tape);
        out.bits_read = tape.read_count();
        return out;
    };
    ev.choices = 1;
    ev.run_choice = ev.run;
    return ev;
}

}  // namespace revealment
