#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ahq {

struct CheckResult {
    std::string group;
    std::string name;
    bool passed = false;
    double observed = 0.0;  // the measured error / quantity
    double tolerance = 0.0; // the bound it was held to
    std::string note;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int band_limit = 32;
    std::string only_group; // empty = all
    std::string inject_fault;
    // tolerance overrides, keyed by check group; missing = documented default
    std::vector<std::pair<std::string, double>> tol_overrides;
};

struct VerifyReport {
    std::vector<CheckResult> results;
    std::string trace_variant_selected; // g_ab_m2 or g_ab_m1, from the oracle fit
    std::string trace_variant_used;     // the one center_of_mass implements
    bool all_passed() const;
};

std::vector<std::string> verify_group_names();

VerifyReport run_verify(const VerifyOptions& opt);

// render as a fixed-order table, one line per check
std::string format_report(const VerifyReport& rep);

} // namespace ahq
