#include "revealment/experiment.hpp"

#include <bit>
#include <fstream>
#include <ostream>
#include <sstream>

#include "revealment/analysis.hpp"
#include "revealment/monotone.hpp"
#include "revealment/report_io.hpp"
#include "revealment/rng.hpp"

namespace revealment::experiment {
namespace {

using io::json;

bool is_monotone(Ensemble e) { return e == Ensemble::monotone || e == Ensemble::monotone_pair; }

void report_warnings(const Resolved& r, std::ostream& err) {
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
}

Format pick(Format requested, Format fallback) { return requested == Format::automatic ? fallback : requested; }

json echo(const Resolved& r, const ExperimentConfig& c) {
    return json{{"preset", std::string(to_string(c.preset))},
                {"ensemble", std::string(to_string(r.params.ensemble()))},
                {"H", r.params.H()},
                {"W", r.params.W()},
                {"n", r.params.n()},
                {"algo", std::string(to_string(r.algo))},
                {"m", r.m},
                {"k", r.k},
                {"k_calibrated", r.k_calibrated},
                {"seed", c.seed}};
}

io::SummaryRow summary(const Resolved& r, const ExperimentConfig& c, const analysis::RevealmentReport& rev) {
    io::SummaryRow row;
    row.preset = std::string(to_string(c.preset));
    row.ensemble = std::string(to_string(r.params.ensemble()));
    row.H = r.params.H();
    row.W = r.params.W();
    row.n = r.params.n();
    row.algo = std::string(to_string(r.algo));
    row.m = r.m;
    row.k = r.k;
    row.trials = rev.trials;
    row.seed = c.seed;
    row.delta_max = rev.delta_max;
    row.delta_max_se = rev.delta_max_se;
    row.mean_read_fraction = rev.mean_read_fraction;
    row.error_rate = rev.error_rate;
    row.error_rate_se = rev.error_rate_se;
    return row;
}

analysis::RevealmentReport measure(const Resolved& r, const ExperimentConfig& c) {
    const Evaluator ev = make_evaluator(r.evaluator());
    if (c.exact) {
        if (ev.choices == 0) throw ParameterError("exact revealment is only available for Las Vegas evaluators");
        return analysis::exact_revealment(ev, c.execution);
    }
    analysis::EstimateOptions options;
    options.execution = c.execution;
    options.measure_error = c.measure_error && r.algo == Algo::monte_carlo;
    return analysis::estimate_revealment(ev, c.trials, c.seed, options);
}

int cmd_eval(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(c);
    report_warnings(r, err);
    const Evaluator ev = make_evaluator(r.evaluator());
    InputTape tape = c.input_hex ? InputTape::from_hex(r.params.n(), *c.input_hex)
                                 : InputTape::pseudorandom(r.params.n(), derive_seed(c.seed, c.trial, Stream::input),
                                                           c.trial);
    const EvalOutcome o = ev.run(tape, derive_seed(c.seed, c.trial, Stream::coins));
    json j{{"ensemble", std::string(to_string(r.params.ensemble()))},
           {"H", r.params.H()},
           {"W", r.params.W()},
           {"n", r.params.n()},
           {"algo", std::string(to_string(r.algo))},
           {"m", r.m},
           {"k", r.k},
           {"t0", o.t0},
           {"value", to_bit(o.value)},
           {"bits_read", o.bits_read},
           {"seed", c.seed},
           {"trial", c.trial}};
    if (pick(c.format, Format::json) == Format::text) {
        out << "value: " << to_bit(o.value) << "\nbits_read: " << o.bits_read << " of " << r.params.n() << '\n';
    } else {
        out << j.dump() << '\n';
    }
    return 0;
}

int cmd_revealment(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(c);
    report_warnings(r, err);
    const auto rev = measure(r, c);
    if (pick(c.format, Format::csv) == Format::json) {
        json j = echo(r, c);
        j["report"] = io::to_json(rev);
        out << j.dump(2) << '\n';
    } else if (c.per_bit) {
        io::write_per_bit_csv(out, rev);
    } else {
        out << io::summary_header << '\n';
        io::write_summary_csv(out, summary(r, c, rev));
    }
    return 0;
}

int cmd_scaling(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    if (c.d_min > c.d_max) throw ParameterError("scaling needs d_min <= d_max");
    const bool as_json = pick(c.format, Format::csv) == Format::json;
    json rows = json::array();
    if (!as_json) out << io::summary_header << '\n';
    for (int d = c.d_min; d <= c.d_max; ++d) {
        const Resolved r = resolve(c, d);
        report_warnings(r, err);
        const auto row = summary(r, c, measure(r, c));
        if (as_json) rows.push_back(io::to_json(row));
        else io::write_summary_csv(out, row);
    }
    if (as_json) out << rows.dump(2) << '\n';
    return 0;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    ExperimentConfig lv = c;
    lv.algo = Algo::las_vegas;
    const Resolved r = resolve(lv);
    report_warnings(r, err);
    const ButterflyParams& p = r.params;
    if (p.n() > static_cast<std::uint64_t>(analysis::max_table_bits)) {
        throw analysis::ResourceError("verify enumerates all inputs and needs n <= " +
                                      std::to_string(analysis::max_table_bits) + ", got n=" + std::to_string(p.n()));
    }
    const EvaluatorConfig ec = r.evaluator();
    const auto table = analysis::truth_table(make_function(ec), static_cast<int>(p.n()), c.execution);
    const auto fourier = analysis::fourier(table, c.execution);
    const Evaluator ev = make_evaluator(ec);
    const auto rev = analysis::exact_revealment(ev, c.execution);
    const auto ineq = analysis::check_inequalities(fourier, rev);

    const bool mono = is_monotone(p.ensemble());
    const bool balanced = 2 * fourier.ones == fourier.size;
    bool ok = rev.errors == 0 && ineq.all_pass();
    if (!mono) ok = ok && balanced;
    if (mono) ok = ok && fourier.monotone;

    const Format fmt = pick(c.format, Format::text);
    if (fmt == Format::json) {
        json j = echo(r, c);
        j["ones"] = fourier.ones;
        j["inputs"] = fourier.size;
        j["balance"] = fourier.balance;
        j["balanced"] = balanced;
        j["monotone"] = fourier.monotone;
        j["las_vegas_disagreements"] = rev.errors;
        j["las_vegas_runs"] = rev.trials;
        j["revealment"] = io::to_json(rev);
        j["inequalities"] = io::to_json(ineq);
        j["pass"] = ok;
        out << j.dump(2) << '\n';
    } else if (fmt == Format::csv) {
        analysis::InequalityReport all = ineq;
        auto extra = [&](std::string name, double left, double right, bool pass) {
            analysis::InequalityRecord rec;
            rec.name = std::move(name);
            rec.left = left;
            rec.right = right;
            rec.slack = right - left;
            rec.pass = pass;
            all.records.insert(all.records.begin(), rec);
        };
        extra("las_vegas_disagreements", static_cast<double>(rev.errors), 0.0, rev.errors == 0);
        if (mono) extra("monotone", fourier.monotone ? 0.0 : 1.0, 0.0, fourier.monotone);
        else extra("balanced_ones", static_cast<double>(fourier.ones), fourier.size / 2.0, balanced);
        io::write_inequality_csv(out, all);
    } else {
        auto verdict = [](bool b) { return b ? "pass" : "fail"; };
        out << "params: ensemble=" << to_string(p.ensemble()) << " H=" << p.H() << " W=" << p.W() << " n=" << p.n();
        if (mono) out << " k=" << r.k;
        out << '\n';
        if (mono) {
            out << "balance: " << fourier.ones << '/' << fourier.size << " (p=" << io::format_number(fourier.balance)
                << ")\n";
            out << "monotone: " << verdict(fourier.monotone) << '\n';
        } else {
            out << "balanced: " << fourier.ones << '/' << fourier.size << ", " << verdict(balanced) << '\n';
        }
        out << "las_vegas_exact: " << rev.errors << " disagreements over " << rev.trials << " runs, "
            << verdict(rev.errors == 0) << '\n';
        out << "delta_max: " << io::format_number(rev.delta_max) << " (exact)\n";
        for (const auto& rec : ineq.records) {
            out << rec.name << ": " << io::format_number(rec.left) << " <= " << io::format_number(rec.right) << ", "
                << verdict(rec.pass && rec.exact.value_or(true)) << '\n';
        }
        out << "overall: " << verdict(ok) << '\n';
    }
    return ok ? 0 : 1;
}

std::uint32_t height_of(const ExperimentConfig& c) {
    if (c.H) {
        if (*c.H < 2 || !std::has_single_bit(*c.H)) throw ParameterError("H must be a power of two >= 2");
        return *c.H;
    }
    return std::uint32_t{1} << c.d.value_or(6);
}

int cmd_secondmoment(const ExperimentConfig& c, std::ostream& out) {
    const std::uint32_t H = height_of(c);
    const std::uint32_t W = c.W.value_or(monotone::default_width(H));
    const auto rep = monotone::second_moment_experiment(H, W, c.trials, c.seed);
    json j = io::to_json(rep);
    j["mean_n_pass"] = std::abs(rep.mean_n - 1.0) <= analysis::statistical_sigmas * rep.mean_n_se;
    j["freq_positive_pass"] =
        rep.freq_positive >= rep.positive_lower_bound - analysis::statistical_sigmas * rep.freq_positive_se;
    j["mean_n2_pass"] = rep.mean_n2 <= rep.n2_upper_bound + analysis::statistical_sigmas * rep.mean_n2_se;
    if (pick(c.format, Format::json) == Format::csv) {
        out << "H,W,c,trials,seed,mean_n,mean_n_se,mean_n2,mean_n2_se,freq_n_positive,freq_n_positive_se,"
               "positive_lower_bound,n2_upper_bound\n";
        out << rep.H << ',' << rep.W << ',' << io::format_number(rep.c) << ',' << rep.trials << ',' << rep.seed << ','
            << io::format_number(rep.mean_n) << ',' << io::format_number(rep.mean_n_se) << ','
            << io::format_number(rep.mean_n2) << ',' << io::format_number(rep.mean_n2_se) << ','
            << io::format_number(rep.freq_positive) << ',' << io::format_number(rep.freq_positive_se) << ','
            << io::format_number(rep.positive_lower_bound) << ',' << io::format_number(rep.n2_upper_bound) << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_splice(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(c);
    report_warnings(r, err);
    const Evaluator ev = make_evaluator(r.evaluator());
    const auto rep = analysis::splice_experiment(ev, c.trials, c.seed, c.execution);
    json j = echo(r, c);
    j["report"] = io::to_json(rep);
    j["overlap_bound_pass"] =
        rep.overlap_positive <= rep.sum_delta_sq + analysis::statistical_sigmas * rep.overlap_positive_se;
    j["replay_pass"] = rep.replay_x_ok == rep.trials && rep.replay_y_ok == rep.replay_y_applicable;
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_calibrate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    const std::uint32_t H = height_of(c);
    const std::uint32_t W = c.W.value_or(monotone::default_width(H));
    const auto cal = monotone::calibrate_k(H, W, c.trials, c.seed);
    if (cal.uncertain) err << "warning: calibration cannot resolve 1/H increments with " << c.trials << " trials\n";
    json j = io::to_json(cal);
    j["H"] = H;
    j["W"] = W;
    j["seed"] = c.seed;
    out << j.dump(2) << '\n';
    return 0;
}

int dispatch(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    if (c.command == "eval") return cmd_eval(c, out, err);
    if (c.command == "revealment") return cmd_revealment(c, out, err);
    if (c.command == "scaling") return cmd_scaling(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "secondmoment") return cmd_secondmoment(c, out);
    if (c.command == "splice") return cmd_splice(c, out, err);
    if (c.command == "calibrate") return cmd_calibrate(c, out, err);
    throw ParameterError("unknown command '" + c.command + "'");
}

}  // namespace

std::string_view to_string(Preset p) {
    switch (p) {
        case Preset::none: return "none";
        case Preset::part1: return "part1";
        case Preset::part2: return "part2";
        case Preset::part3: return "part3";
        case Preset::part4: return "part4";
    }
    return "none";
}

Preset parse_preset(std::string_view name) {
    if (name == "none") return Preset::none;
    if (name == "part1") return Preset::part1;
    if (name == "part2") return Preset::part2;
    if (name == "part3") return Preset::part3;
    if (name == "part4") return Preset::part4;
    throw ParameterError("unknown preset '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    if (name == "text") return Format::text;
    if (name == "auto") return Format::automatic;
    throw ParameterError("unknown format '" + std::string(name) + "'");
}

Resolved resolve(const ExperimentConfig& c, std::optional<int> d_override) {
    Ensemble ensemble = Ensemble::nonmonotone;
    Algo algo = Algo::las_vegas;
    std::uint32_t m = 1;
    switch (c.preset) {
        case Preset::none: break;
        case Preset::part1: break;
        case Preset::part2: algo = Algo::monte_carlo; m = 8; break;
        case Preset::part3: ensemble = Ensemble::monotone_pair; break;
        case Preset::part4: ensemble = Ensemble::monotone_pair; algo = Algo::monte_carlo; m = 4; break;
    }
    if (c.ensemble) ensemble = *c.ensemble;
    if (c.algo) algo = *c.algo;
    if (c.m) m = *c.m;

    int d = 4;
    if (d_override) d = *d_override;
    else if (c.d) d = *c.d;
    else if (c.H) {
        if (*c.H < 2 || !std::has_single_bit(*c.H)) throw ParameterError("H must be a power of two >= 2");
        d = std::countr_zero(*c.H);
    }
    if (d < 1 || d > ButterflyParams::max_d) throw ParameterError("d out of range");
    const std::uint32_t H = std::uint32_t{1} << d;

    std::uint32_t W;
    if (c.W) W = *c.W;
    else if (is_monotone(ensemble)) W = monotone::default_width(H);
    else if (c.preset == Preset::part2) W = H;
    else W = H * static_cast<std::uint32_t>(d);

    Resolved r{ButterflyParams(d, W, ensemble), algo, algo == Algo::monte_carlo ? m : 0, 0, false, {}};
    if (algo == Algo::monte_carlo && !is_monotone(ensemble) && W != H) {
        r.warnings.push_back("nonmonotone Monte Carlo evaluation is designed for W = H (got W=" + std::to_string(W) +
                             ", H=" + std::to_string(H) + ")");
    }
    if (algo == Algo::monte_carlo && m < 1) throw ParameterError("m must be at least 1");
    if (is_monotone(ensemble)) {
        if (c.k) {
            r.k = *c.k;
        } else {
            const auto cal = monotone::calibrate_k(H, W, c.calibration_trials, derive_seed(c.seed, 0, Stream::spare));
            r.k = cal.k;
            r.k_calibrated = true;
            if (cal.uncertain) {
                r.warnings.push_back("calibration of k cannot resolve 1/H increments with " +
                                     std::to_string(c.calibration_trials) + " trials");
            }
        }
        if (r.k < 1 || r.k > H) throw ParameterError("k must lie in [1, H]");
    }
    return r;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.out == "-" || config.out.empty()) return dispatch(config, out, err);
        std::ostringstream buffer;
        const int status = dispatch(config, buffer, err);
        std::ofstream file(config.out, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << config.out << "'\n";
            return 2;
        }
        file << buffer.str();
        return status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace revealment::experiment
