#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "grasslab/subspace.hpp"

namespace grasslab {

inline constexpr const char* kVersion = "0.1.0";

/// Effective configuration of one batch run.  Zero-valued numeric fields
/// mean "per-command default" and are resolved (and echoed) by run().
struct RunConfig {
    std::string command;
    double cluster_tol = 1e-8;
    double fd_step = 0.0;   // 0 -> command default
    double cert_tol = 0.0;  // 0 -> command default
    std::uint64_t seed = 0;
    int density = 0;        // 0 -> command default
    long samples = 0;       // 0 -> command default
    int ray_samples = 8;
    int subspace_dim = 3;   // m for random-pair commands
    int codim = 4;          // n for random-pair commands
    std::string object;
    std::string q0 = "coordinate";  // coordinate | inline
    std::string inline_path;        // frames file for inline input
    std::string out;                // empty -> stdout
    std::string format = "json";    // json | csv
};

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 contract failure, 2 config error
    nlohmann::ordered_json report;
};

/// Executes the command described by `config` and assembles the report
/// {command, config, records[], extremal, pass, timestamp}.  Throws
/// ConfigError on invalid configuration (callers map it to exit code 2).
RunResult run(const RunConfig& config);

/// Serializes the report to config.out (or stdout when empty) in the
/// configured format; returns the serialized payload.
std::string write_report(const RunResult& result, const RunConfig& config);

/// Parses whitespace-separated rows of decimals; blank lines split frames.
/// Each frame gives one subspace (rows are the frame vectors).
std::vector<Subspace> parse_inline_frames(const std::string& text);

/// Reads a frames file ("-" for stdin).
std::vector<Subspace> load_inline_frames(const std::string& path);

}  // namespace grasslab
