#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "motifcut/params.hpp"

namespace motifcut {

// Everything the driver needs to reproduce an invocation.  Defaults mirror
// the flag defaults; a parsed config serializes to JSON and parses back equal.
struct RunConfig {
    std::string subcommand;  // gen | run | baseline | eval | verify

    std::string input;
    std::string output;
    std::string report_path;
    std::string csv_path;

    // gen
    std::string model{"gnp"};  // gnp | complete | regular
    int n{0};
    double p{0.5};
    int degree{3};

    // privacy parameters
    double epsilon{1.0};
    double delta{1e-6};
    double beta{0.25};

    std::uint64_t seed{0};
    std::uint64_t seed_lo{0};
    std::uint64_t seed_hi{0};
    bool sweep{false};

    TuningConstants constants;

    // eval
    std::string cut_mode{"exhaustive"};  // exhaustive | sampled:<k>
    std::string other;                   // second graph for eval

    // baseline
    std::string baseline{"rr"};
    bool clip_negative{false};

    std::string format{"json"};  // json | csv-summary

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace motifcut
