#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "revealment/experiment.hpp"

using namespace revealment;
using experiment::ExperimentConfig;

namespace {

void add_common(CLI::App* sub, ExperimentConfig& cfg, std::string& preset, std::string& ensemble, std::string& algo,
                std::string& format, std::string& W, std::string& k) {
    sub->add_option("--preset", preset, "part1|part2|part3|part4");
    sub->add_option("--ensemble", ensemble, "nonmonotone|symmetric|monotone|monotone-pair");
    sub->add_option("--d", cfg.d, "log2 of H");
    sub->add_option("--H", cfg.H, "points per time slice (power of two)");
    sub->add_option("--W", W, "time slices, or 'auto'");
    sub->add_option("--algo", algo, "lv|mc");
    sub->add_option("--m", cfg.m, "Monte Carlo start count");
    sub->add_option("--k", k, "suitable-set size, or 'auto'");
    sub->add_option("--trials", cfg.trials, "number of trials");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--format", format, "csv|json|text");
    sub->add_option("--out", cfg.out, "output path ('-' for stdout)");
    sub->add_option("--calibration-trials", cfg.calibration_trials, "trials used to calibrate k");
    sub->add_flag("--serial", "run trials on one thread (reference path)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Revealment experiments on the wrapped extended butterfly"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string preset = "none";
    std::string ensemble;
    std::string algo;
    std::string format = "auto";
    std::string W = "auto";
    std::string k = "auto";

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"eval", "evaluate one input and print the value and number of bits read"},
        {"revealment", "per-bit read frequencies (sampled, or --exact)"},
        {"scaling", "sweep d and report delta and mean read fraction per size"},
        {"verify", "exhaustive balance, monotonicity, exactness and inequality checks"},
        {"secondmoment", "moments of the winding-cycle count N"},
        {"splice", "two-run overlap and splice experiment"},
        {"calibrate", "calibrate the suitable-set size k"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, cfg, preset, ensemble, algo, format, W, k);
        if (std::string(s.name) == "eval") {
            sub->add_option("--input-hex", cfg.input_hex, "explicit input, least significant bit = position 0");
            sub->add_option("--trial", cfg.trial, "trial index of the pseudorandom input");
        }
        if (std::string(s.name) == "revealment") {
            sub->add_flag("--exact", cfg.exact, "enumerate all inputs and internal choices");
            sub->add_flag("--per-bit", cfg.per_bit, "csv with columns i,delta_i,se");
        }
        if (std::string(s.name) == "scaling") {
            sub->add_option("--d-min", cfg.d_min, "smallest d");
            sub->add_option("--d-max", cfg.d_max, "largest d");
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.preset = experiment::parse_preset(preset);
        if (!ensemble.empty()) cfg.ensemble = parse_ensemble(ensemble);
        if (!algo.empty()) cfg.algo = parse_algo(algo);
        cfg.format = experiment::parse_format(format);
        if (W != "auto") cfg.W = static_cast<std::uint32_t>(std::stoul(W));
        if (k != "auto") cfg.k = static_cast<std::uint32_t>(std::stoul(k));
        if (app.get_subcommands().front()->count("--serial")) cfg.execution = Execution::serial;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return experiment::run(cfg, std::cout, std::cerr);
}
