// Serial reference vs OpenMP trial loop on the main measurement kernels.
// Usage: bench_trials [trials]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "revealment/analysis.hpp"
#include "revealment/monotone.hpp"

using namespace revealment;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void bench_revealment(const char* label, const EvaluatorConfig& cfg, std::uint64_t trials) {
    const Evaluator ev = make_evaluator(cfg);
    analysis::RevealmentReport serial, parallel;
    const double ts = time_ms([&] {
        serial = analysis::estimate_revealment(ev, trials, 7, {Execution::serial, false});
    });
    const double tp = time_ms([&] {
        parallel = analysis::estimate_revealment(ev, trials, 7, {Execution::parallel, false});
    });
    std::printf("%-28s trials=%-8llu serial %9.1f ms  parallel %9.1f ms  speedup %5.2fx  identical=%s\n", label,
                static_cast<unsigned long long>(trials), ts, tp, ts / tp,
                serial.read_counts == parallel.read_counts ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    std::printf("threads: %d\n", worker_threads());

    bench_revealment("nonmonotone lv H=64 W=384", {ButterflyParams(6, 384, Ensemble::nonmonotone), Algo::las_vegas, 0, 0},
                     trials);
    bench_revealment("nonmonotone mc H=W=64 m=8", {ButterflyParams(6, 64, Ensemble::nonmonotone), Algo::monte_carlo, 8, 0},
                     trials);
    bench_revealment("monotone-pair lv H=64 W=12",
                     {ButterflyParams(6, 12, Ensemble::monotone_pair), Algo::las_vegas, 0, 8}, trials);
    bench_revealment("monotone-pair mc H=64 m=4",
                     {ButterflyParams(6, 12, Ensemble::monotone_pair), Algo::monte_carlo, 4, 8}, trials);

    double serial_mean = 0;
    const double ts = time_ms([&] {
        serial_mean = monotone::second_moment_experiment(64, 12, trials, 3).mean_n;
    });
    std::printf("%-28s trials=%-8llu %9.1f ms  mean N %.4f\n", "second moment H=64 W=12",
                static_cast<unsigned long long>(trials), ts, serial_mean);
    return 0;
}
