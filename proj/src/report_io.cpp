#include "revealment/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace revealment::io {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_summary_csv(std::ostream& os, const SummaryRow& r) {
    os << r.preset << ',' << r.ensemble << ',' << r.H << ',' << r.W << ',' << r.n << ',' << r.algo << ',' << r.m
       << ',' << r.k << ',' << r.trials << ',' << r.seed << ',' << format_number(r.delta_max) << ','
       << format_number(r.delta_max_se) << ',' << format_number(r.mean_read_fraction) << ','
       << format_number(r.error_rate) << ',' << format_number(r.error_rate_se) << '\n';
}

json to_json(const SummaryRow& r) {
    return json{{"preset", r.preset},
                {"ensemble", r.ensemble},
                {"H", r.H},
                {"W", r.W},
                {"n", r.n},
                {"algo", r.algo},
                {"m", r.m},
                {"k", r.k},
                {"trials", r.trials},
                {"seed", r.seed},
                {"delta_max", r.delta_max},
                {"delta_max_se", r.delta_max_se},
                {"mean_read_fraction", r.mean_read_fraction},
                {"error_rate", r.error_rate},
                {"error_rate_se", r.error_rate_se}};
}

json to_json(const analysis::RevealmentReport& r, bool per_bit) {
    json j{{"mode", r.mode == analysis::Mode::exact ? "exact" : "statistical"},
           {"n", r.n},
           {"trials", r.trials},
           {"seed", r.seed},
           {"delta_max", r.delta_max},
           {"delta_max_se", r.delta_max_se},
           {"argmax", r.argmax},
           {"mean_read_fraction", r.mean_read_fraction},
           {"mean_read_fraction_se", r.mean_read_fraction_se}};
    if (r.errors_measured) {
        j["errors"] = r.errors;
        j["error_rate"] = r.error_rate;
        j["error_rate_se"] = r.error_rate_se;
    }
    if (per_bit) {
        j["delta"] = r.delta;
        j["se"] = r.se;
        j["read_counts"] = r.read_counts;
    }
    return j;
}

json to_json(const analysis::InequalityReport& r) {
    json records = json::array();
    for (const auto& rec : r.records) {
        json j{{"name", rec.name},      {"left", rec.left},           {"right", rec.right},
               {"slack", rec.slack},    {"tolerance", rec.tolerance}, {"pass", rec.pass}};
        if (rec.exact) j["exact"] = *rec.exact;
        records.push_back(std::move(j));
    }
    return json{{"records", records}, {"all_pass", r.all_pass()}};
}

json to_json(const analysis::SpliceReport& r) {
    return json{{"trials", r.trials},
                {"seed", r.seed},
                {"n", r.n},
                {"mean_overlap", r.mean_overlap},
                {"mean_overlap_se", r.mean_overlap_se},
                {"overlap_positive", r.overlap_positive},
                {"overlap_positive_se", r.overlap_positive_se},
                {"sum_delta_sq", r.sum_delta_sq},
                {"agreement", r.agreement},
                {"same_output", r.same_output},
                {"replay_x_ok", r.replay_x_ok},
                {"replay_y_ok", r.replay_y_ok},
                {"replay_y_applicable", r.replay_y_applicable}};
}

json to_json(const monotone::SecondMomentReport& r) {
    return json{{"H", r.H},
                {"W", r.W},
                {"c", r.c},
                {"trials", r.trials},
                {"seed", r.seed},
                {"mean_n", r.mean_n},
                {"mean_n2", r.mean_n2},
                {"freq_n_positive", r.freq_positive},
                {"mean_n_se", r.mean_n_se},
                {"mean_n2_se", r.mean_n2_se},
                {"freq_n_positive_se", r.freq_positive_se},
                {"positive_lower_bound", r.positive_lower_bound},
                {"n2_upper_bound", r.n2_upper_bound}};
}

json to_json(const monotone::Calibration& c) {
    return json{{"k", c.k},
                {"estimate", c.estimate},
                {"se", c.se},
                {"target", c.target},
                {"uncertain", c.uncertain},
                {"trials", c.trials},
                {"by_k", c.by_k},
                {"on_cycle", c.on_cycle}};
}

void write_per_bit_csv(std::ostream& os, const analysis::RevealmentReport& r) {
    os << "i,delta_i,se\n";
    for (std::uint64_t i = 0; i < r.n; ++i) {
        os << i << ',' << format_number(r.delta[i]) << ',' << format_number(r.se[i]) << '\n';
    }
}

void write_inequality_csv(std::ostream& os, const analysis::InequalityReport& r) {
    os << "name,left,right,slack,pass\n";
    for (const auto& rec : r.records) {
        const bool pass = rec.pass && rec.exact.value_or(true);
        os << rec.name << ',' << format_number(rec.left) << ',' << format_number(rec.right) << ','
           << format_number(rec.slack) << ',' << (pass ? "true" : "false") << '\n';
    }
}

}  // namespace revealment::io
