#include "revealment/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "revealment/rng.hpp"

namespace revealment::analysis {
namespace {

using boost::multiprecision::cpp_int;

double se_of_mean(double sum, double sum_sq, std::uint64_t trials) {
    if (trials < 2) return 0.0;
    const double mean = sum / trials;
    const double var = std::max(0.0, sum_sq / trials - mean * mean) * trials / (trials - 1.0);
    return std::sqrt(var / trials);
}

double se_of_proportion(double p, std::uint64_t trials) {
    return trials == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1 - p)) / trials);
}

void finalize(RevealmentReport& r, std::uint64_t read_sum, unsigned __int128 read_sum_sq) {
    const double R = static_cast<double>(r.trials);
    r.delta.assign(r.n, 0.0);
    r.se.assign(r.n, 0.0);
    r.delta_max = 0;
    r.argmax = 0;
    for (std::uint64_t i = 0; i < r.n; ++i) {
        r.delta[i] = r.trials ? r.read_counts[i] / R : 0.0;
        if (r.mode == Mode::statistical) r.se[i] = se_of_proportion(r.delta[i], r.trials);
        if (r.delta[i] > r.delta_max) {
            r.delta_max = r.delta[i];
            r.argmax = i;
        }
    }
    r.delta_max_se = r.n ? r.se[r.argmax] : 0.0;
    if (r.n && r.trials) {
        r.mean_read_fraction = read_sum / R / r.n;
        if (r.mode == Mode::statistical) {
            r.mean_read_fraction_se =
                se_of_mean(static_cast<double>(read_sum), static_cast<double>(read_sum_sq), r.trials) / r.n;
        }
    }
    if (r.errors_measured && r.trials) {
        r.error_rate = r.errors / R;
        if (r.mode == Mode::statistical) r.error_rate_se = se_of_proportion(r.error_rate, r.trials);
    }
}

struct RevealmentWorker {
    const Evaluator* ev;
    std::uint64_t seed;
    bool measure_error;
    std::vector<std::uint64_t> counts;
    std::uint64_t read_sum = 0;
    unsigned __int128 read_sum_sq = 0;
    std::uint64_t errors = 0;
    InputTape tape;

    RevealmentWorker(const Evaluator& e, std::uint64_t s, bool measure)
        : ev(&e), seed(s), measure_error(measure), counts(e.n, 0), tape(InputTape::pseudorandom(e.n, s, 0)) {}

    void operator()(std::uint64_t trial) {
        tape.reseed(derive_seed(seed, trial, Stream::input), trial);
        const EvalOutcome out = ev->run(tape, derive_seed(seed, trial, Stream::coins));
        record(out);
        if (measure_error) {
            tape.clear_log();
            if (ev->truth(tape) != out.value) ++errors;
        }
    }

    void record(const EvalOutcome&) {
        const auto reads = tape.log().positions();
        for (auto i : reads) ++counts[i];
        read_sum += reads.size();
        read_sum_sq += static_cast<unsigned __int128>(reads.size()) * reads.size();
    }

    void merge(const RevealmentWorker& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        read_sum += o.read_sum;
        read_sum_sq += o.read_sum_sq;
        errors += o.errors;
    }
};

struct ExactWorker {
    const Evaluator* ev;
    std::vector<std::uint64_t> counts;
    std::uint64_t read_sum = 0;
    std::uint64_t errors = 0;
    InputTape tape;

    explicit ExactWorker(const Evaluator& e)
        : ev(&e), counts(e.n, 0), tape(InputTape::from_integer(e.n, 0)) {}

    void operator()(std::uint64_t x) {
        tape.assign_integer(x);
        const int truth = ev->truth ? ev->truth(tape) : 0;
        for (std::uint64_t c = 0; c < ev->choices; ++c) {
            tape.clear_log();
            const EvalOutcome out = ev->run_choice(tape, c);
            for (auto i : tape.log().positions()) ++counts[i];
            read_sum += tape.read_count();
            if (ev->truth && out.value != truth) ++errors;
        }
    }

    void merge(const ExactWorker& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        read_sum += o.read_sum;
        errors += o.errors;
    }
};

struct TableWorker {
    const std::function<int(InputTape&)>* f;
    std::vector<std::int8_t>* values;
    InputTape tape;

    TableWorker(const std::function<int(InputTape&)>& fn, std::vector<std::int8_t>& v, int n)
        : f(&fn), values(&v), tape(InputTape::from_integer(static_cast<std::uint64_t>(n), 0)) {}

    void operator()(std::uint64_t x) {
        tape.assign_integer(x);
        const int v = (*f)(tape);
        if (v != 1 && v != -1) throw std::logic_error("function value must be -1 or +1");
        (*values)[x] = static_cast<std::int8_t>(v);
    }

    void merge(const TableWorker&) {}
};

struct FourierWorker {
    const TruthTable* table;
    std::int64_t sum = 0;
    std::uint64_t ones = 0;
    std::vector<std::int64_t> level1;
    std::vector<std::uint64_t> flips;
    bool monotone = true;

    explicit FourierWorker(const TruthTable& t) : table(&t), level1(t.n, 0), flips(t.n, 0) {}

    void operator()(std::uint64_t x) {
        const int v = table->values[x];
        sum += v;
        ones += v > 0 ? 1 : 0;
        for (int i = 0; i < table->n; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            level1[i] += (x & bit) ? v : -v;
            if (!(x & bit)) {
                const int w = table->values[x | bit];
                if (w != v) ++flips[i];
                if (w < v) monotone = false;
            }
        }
    }

    void merge(const FourierWorker& o) {
        sum += o.sum;
        ones += o.ones;
        for (std::size_t i = 0; i < level1.size(); ++i) {
            level1[i] += o.level1[i];
            flips[i] += o.flips[i];
        }
        monotone = monotone && o.monotone;
    }
};

struct SpliceWorker {
    const Evaluator* ev;
    std::uint64_t seed;
    std::vector<std::uint64_t> counts;
    std::uint64_t overlap_sum = 0;
    std::uint64_t overlap_sq = 0;
    std::uint64_t positive = 0;
    std::uint64_t agree = 0;
    std::uint64_t same = 0;
    std::uint64_t replay_x = 0;
    std::uint64_t replay_y = 0;
    std::uint64_t replay_y_applicable = 0;

    SpliceWorker(const Evaluator& e, std::uint64_t s) : ev(&e), seed(s), counts(e.n, 0) {}

    void operator()(std::uint64_t trial) {
        InputTape x = InputTape::pseudorandom(ev->n, derive_seed(seed, trial, Stream::input), trial);
        InputTape y = InputTape::pseudorandom(ev->n, derive_seed(seed, trial, Stream::input_second), trial);
        const std::uint64_t r = derive_seed(seed, trial, Stream::coins);
        const std::uint64_t s = derive_seed(seed, trial, Stream::coins_second);

        const EvalOutcome ax = ev->run(x, r);
        const EvalOutcome ay = ev->run(y, s);
        const auto rx = x.read_set();
        const auto ry = y.read_set();
        for (auto i : rx) ++counts[i];
        for (auto i : ry) ++counts[i];

        std::uint64_t overlap = 0;
        for (auto i : ry) overlap += x.log().was_read(i) ? 1 : 0;
        overlap_sum += overlap;
        overlap_sq += overlap * overlap;
        positive += overlap > 0 ? 1 : 0;
        same += ax.value == ay.value ? 1 : 0;

        InputTape z = splice(x, rx, y);
        const EvalOutcome azr = ev->run(z, r);
        if (azr.value == ax.value && z.read_set() == rx) ++replay_x;
        InputTape z2 = splice(x, rx, y);
        const EvalOutcome azs = ev->run(z2, s);
        if (overlap == 0) {
            ++replay_y_applicable;
            if (azs.value == ay.value && z2.read_set() == ry) ++replay_y;
        }
        agree += azr.value == azs.value ? 1 : 0;
    }

    void merge(const SpliceWorker& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        overlap_sum += o.overlap_sum;
        overlap_sq += o.overlap_sq;
        positive += o.positive;
        agree += o.agree;
        same += o.same;
        replay_x += o.replay_x;
        replay_y += o.replay_y;
        replay_y_applicable += o.replay_y_applicable;
    }
};

cpp_int big(std::uint64_t v) { return cpp_int(v); }
cpp_int big_signed(std::int64_t v) { return cpp_int(v); }

}  // namespace

std::uint64_t max_enumeration() {
    if (const char* env = std::getenv("REVEALMENT_MAX_ENUM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return default_max_enumeration;
}

RevealmentReport estimate_revealment(const Evaluator& ev, std::uint64_t trials, std::uint64_t seed,
                                     EstimateOptions options) {
    if (trials < 1) throw std::invalid_argument("revealment estimation needs at least one trial");
    if (options.measure_error && !ev.truth) throw std::invalid_argument("error measurement needs a truth function");
    const auto total = run_trials(
        trials, [&] { return RevealmentWorker(ev, seed, options.measure_error); }, options.execution);
    RevealmentReport r;
    r.mode = Mode::statistical;
    r.n = ev.n;
    r.trials = trials;
    r.seed = seed;
    r.read_counts = total.counts;
    r.errors = total.errors;
    r.errors_measured = options.measure_error;
    finalize(r, total.read_sum, total.read_sum_sq);
    return r;
}

RevealmentReport exact_revealment(const Evaluator& ev, Execution exec) {
    if (ev.choices == 0 || !ev.run_choice) {
        throw std::invalid_argument("exact revealment needs an evaluator with enumerable randomness");
    }
    if (ev.n > 40) throw ResourceError("exact revealment: n=" + std::to_string(ev.n) + " is too large");
    const std::uint64_t inputs = std::uint64_t{1} << ev.n;
    const std::uint64_t limit = max_enumeration();
    if (ev.choices > limit / inputs) {
        throw ResourceError("exact revealment: 2^" + std::to_string(ev.n) + " x " + std::to_string(ev.choices) +
                            " runs exceed the enumeration limit " + std::to_string(limit));
    }
    const auto total = run_trials(inputs, [&] { return ExactWorker(ev); }, exec);
    RevealmentReport r;
    r.mode = Mode::exact;
    r.n = ev.n;
    r.trials = inputs * ev.choices;
    r.read_counts = total.counts;
    r.errors = total.errors;
    r.errors_measured = static_cast<bool>(ev.truth);
    finalize(r, total.read_sum, 0);
    return r;
}

TruthTable truth_table(const std::function<int(InputTape&)>& f, int n, Execution exec) {
    if (n < 0 || n > max_table_bits) {
        throw ResourceError("truth table needs n <= " + std::to_string(max_table_bits) + ", got " +
                            std::to_string(n));
    }
    TruthTable table;
    table.n = n;
    table.values.assign(std::size_t{1} << n, 0);
    run_trials(table.values.size(), [&] { return TableWorker(f, table.values, n); }, exec);
    return table;
}

FourierTable fourier(const TruthTable& table, Execution exec) {
    if (table.values.size() != (std::size_t{1} << table.n)) throw std::invalid_argument("truth table size mismatch");
    const auto total = run_trials(table.values.size(), [&] { return FourierWorker(table); }, exec);
    FourierTable f;
    f.n = table.n;
    f.size = table.values.size();
    f.sum = total.sum;
    f.ones = total.ones;
    f.level1_sum = total.level1;
    f.flip_pairs = total.flips;
    f.monotone = total.monotone;
    const double N = static_cast<double>(f.size);
    f.empty = f.sum / N;
    f.variance = 1.0 - f.empty * f.empty;
    f.balance = f.ones / N;
    for (int i = 0; i < f.n; ++i) {
        f.level1.push_back(f.level1_sum[i] / N);
        f.influence.push_back(2.0 * f.flip_pairs[i] / N);
    }
    return f;
}

bool InequalityReport::all_pass() const {
    return std::all_of(records.begin(), records.end(),
                       [](const InequalityRecord& r) { return r.pass && r.exact.value_or(true); });
}

const InequalityRecord* InequalityReport::find(const std::string& name) const {
    for (const auto& r : records) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

InequalityReport check_inequalities(const FourierTable& f, const RevealmentReport& rev) {
    if (static_cast<std::uint64_t>(f.n) != rev.n) {
        throw std::invalid_argument("Fourier table has n=" + std::to_string(f.n) + " but revealment report has n=" +
                                    std::to_string(rev.n));
    }
    const bool exact = rev.mode == Mode::exact;
    const double n = static_cast<double>(f.n);
    const double delta = rev.delta_max;
    const double se = rev.delta_max_se;
    const double k = statistical_sigmas;

    // Exact quantities: f^ = S/N, f^({i}) = L_i/N, I_i = 2 J_i / N,
    // delta_i = c_i / D, delta = c / D.
    const cpp_int N = big(f.size);
    const cpp_int N2 = N * N;
    const cpp_int S = big_signed(f.sum);
    const cpp_int var_num = N2 - S * S;  // Var = var_num / N^2
    const cpp_int D = big(rev.trials);
    const cpp_int c = rev.n ? big(rev.read_counts[rev.argmax]) : cpp_int(0);

    InequalityReport report;
    auto add = [&](std::string name, double left, double right, double tol, std::optional<bool> verdict) {
        InequalityRecord r;
        r.name = std::move(name);
        r.left = left;
        r.right = right;
        r.slack = right - left;
        r.tolerance = exact ? exact_tolerance : tol;
        r.pass = left <= right + r.tolerance;
        if (exact) r.exact = verdict;
        report.records.push_back(std::move(r));
    };

    {
        double left = 0;
        cpp_int L = 0;
        for (int i = 0; i < f.n; ++i) {
            left += f.level1[i];
            L += big_signed(f.level1_sum[i]);
        }
        const double right = std::sqrt(n * delta);
        const double tol = delta > 0 ? k * se * std::sqrt(n) / (2 * std::sqrt(delta)) : k * se;
        std::optional<bool> verdict;
        if (exact) verdict = L <= 0 || L * L * D <= big(f.n) * c * N2;
        add("level1_sum", left, right, tol, verdict);
    }
    {
        double left = 0;
        cpp_int L2 = 0;
        for (int i = 0; i < f.n; ++i) {
            left += f.level1[i] * f.level1[i];
            L2 += big_signed(f.level1_sum[i]) * big_signed(f.level1_sum[i]);
        }
        std::optional<bool> verdict;
        if (exact) verdict = L2 * D <= c * N2;
        add("level1_weight", left, delta, k * se, verdict);
    }
    {
        double right = 0;
        double var_right = 0;
        cpp_int weighted = 0;
        for (int i = 0; i < f.n; ++i) {
            right += rev.delta[i] * f.influence[i];
            var_right += std::pow(rev.se[i] * f.influence[i], 2);
            weighted += big(rev.read_counts[i]) * big(f.flip_pairs[i]);
        }
        std::optional<bool> verdict;
        if (exact) verdict = var_num * D <= 2 * N * weighted;
        add("variance_revealment", f.variance, right, k * std::sqrt(var_right), verdict);
    }
    if (rev.errors_measured && rev.errors > 0) {
        // Pr[wrong] >= Var/8 - n delta^2 / 4.
        const double left = f.variance / 8 - n * delta * delta / 4;
        const double tol = k * std::hypot(rev.error_rate_se, n * delta * se / 2);
        add("error_lower_bound", left, rev.error_rate, tol, std::nullopt);
        if (exact) report.records.back().exact.reset();
    } else {
        // Zero-error form: delta >= sqrt(Var / (2n)).
        std::optional<bool> verdict;
        if (exact) verdict = var_num * D * D <= 2 * big(f.n) * c * c * N2;
        add("error_lower_bound", std::sqrt(f.variance / (2 * n)), delta, k * se, verdict);
    }
    if (f.monotone) {
        const double right = std::pow(delta, 1.5) * std::sqrt(n);
        std::optional<bool> verdict;
        if (exact) verdict = var_num * var_num * D * D * D <= c * c * c * big(f.n) * N2 * N2;
        add("monotone_variance_bound", f.variance, right, k * se * 1.5 * std::sqrt(delta * n), verdict);
    }
    return report;
}

SpliceReport splice_experiment(const Evaluator& ev, std::uint64_t trials, std::uint64_t seed, Execution exec) {
    if (trials < 1) throw std::invalid_argument("splice experiment needs at least one trial");
    const auto total = run_trials(trials, [&] { return SpliceWorker(ev, seed); }, exec);
    SpliceReport r;
    r.trials = trials;
    r.seed = seed;
    r.n = ev.n;
    const double R = static_cast<double>(trials);
    r.mean_overlap = total.overlap_sum / R;
    r.mean_overlap_se = se_of_mean(static_cast<double>(total.overlap_sum), static_cast<double>(total.overlap_sq), trials);
    r.overlap_positive = total.positive / R;
    r.overlap_positive_se = se_of_proportion(r.overlap_positive, trials);
    double sq = 0;
    for (auto count : total.counts) {
        const double d = count / (2 * R);
        sq += d * d;
    }
    r.sum_delta_sq = sq;
    r.agreement = total.agree / R;
    r.same_output = total.same / R;
    r.replay_x_ok = total.replay_x;
    r.replay_y_ok = total.replay_y;
    r.replay_y_applicable = total.replay_y_applicable;
    return r;
}

}  // namespace revealment::analysis
