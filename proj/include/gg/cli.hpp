#pragma once

#include "gg/structfile.hpp"

namespace gg {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Report {
    std::string command;
    std::string target;
    std::uint64_t seed = 42;
    double tolerance = 1e-9;
    std::string bracket = "courant";
    std::vector<CheckReport> checks;
    std::map<std::string, bool> flags;
};

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 check failure
    Report report;
};

const std::vector<std::string>& command_names();

/// Runs one command on a structure file, or on a built-in entry for `catalog`
/// (whose target may also be a .gg file with an [entry] block).
/// Throws UsageError for bad commands or brackets and FileParseError for bad files.
RunResult run_command(const std::string& command, const std::string& target, const PlanOverrides& ov = {});

/// Byte-stable JSON: {command, seed, tolerance, checks: [{name, verdict, max_residual,
/// witness_point, witness_detail, parts?}], flags?}.
std::string report_json(const Report& r, int indent = 2);
std::string report_text(const Report& r);

}  // namespace gg
