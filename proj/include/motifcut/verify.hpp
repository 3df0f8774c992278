#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace motifcut {

struct CheckResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

// Desk-scale invariant suites, one per module; shared by the CLI `verify`
// subcommand and the test harness.  Each check is self-contained and seeded
// so the whole run is reproducible.
std::vector<CheckResult> verify_graph_core(std::uint64_t seed);
std::vector<CheckResult> verify_dp_primitives(std::uint64_t seed);
std::vector<CheckResult> verify_sdp(std::uint64_t seed);
std::vector<CheckResult> verify_mechanism(std::uint64_t seed);
std::vector<CheckResult> verify_eval(std::uint64_t seed);

std::vector<CheckResult> run_all_verifications(std::uint64_t seed);

}  // namespace motifcut
