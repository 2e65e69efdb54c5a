#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "revealment/analysis.hpp"
#include "revealment/monotone.hpp"

namespace revealment::io {

using nlohmann::json;

/// One row of the fixed sweep schema.
struct SummaryRow {
    std::string preset;
    std::string ensemble;
    std::uint32_t H = 0;
    std::uint32_t W = 0;
    std::uint64_t n = 0;
    std::string algo;
    std::uint32_t m = 0;
    std::uint32_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double delta_max = 0;
    double delta_max_se = 0;
    double mean_read_fraction = 0;
    double error_rate = 0;
    double error_rate_se = 0;
};

inline constexpr std::string_view summary_header =
    "preset,ensemble,H,W,n,algo,m,k,trials,seed,delta_max,delta_max_se,mean_read_fraction,error_rate,error_rate_se";

std::string format_number(double v);

void write_summary_csv(std::ostream& os, const SummaryRow& row);
json to_json(const SummaryRow& row);

json to_json(const analysis::RevealmentReport& r, bool per_bit = true);
json to_json(const analysis::InequalityReport& r);
json to_json(const analysis::SpliceReport& r);
json to_json(const monotone::SecondMomentReport& r);
json to_json(const monotone::Calibration& c);

/// Columns i,delta_i,se.
void write_per_bit_csv(std::ostream& os, const analysis::RevealmentReport& r);
/// Columns name,left,right,slack,pass.
void write_inequality_csv(std::ostream& os, const analysis::InequalityReport& r);

}  // namespace revealment::io
