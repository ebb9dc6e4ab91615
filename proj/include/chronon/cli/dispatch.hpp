#pragma once

#include "chronon/cli/config.hpp"
#include "chronon/cli/output.hpp"

#include <string>

namespace chronon::cli {

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
    ToleranceProfile profile = ToleranceProfile::Strict;
    int threads = 0;  // 0 keeps the OpenMP default
};

// One named pass/fail check reported in the diagnostics block.
struct Check {
    std::string name;
    double value;
    double limit;
    bool pass;
};

struct ResultEnvelope {
    Json metadata;     // version, subcommand, config echo; timestamp added by the writer
    Table data;        // may be empty for single-record results
    Json record;       // scalar results
    Json diagnostics;  // tolerances achieved, iteration counts
    std::vector<Check> checks;

    bool tolerance_ok() const;
};

// Runs the module pipeline for a validated config. Deterministic for a fixed
// config and seed. Module errors propagate as chronon::Error.
ResultEnvelope dispatch(const RunConfig& cfg, const RunOptions& opts = {});

// Record document: {"meta", "diagnostics", "checks", "record", "data"}.
Json envelope_to_json(const ResultEnvelope& env, bool with_timestamp);

// Process exit status for an error kind: Config 2, Numerical 3, Tolerance 4.
int exit_code_for(ErrorKind kind);

}  // namespace chronon::cli
