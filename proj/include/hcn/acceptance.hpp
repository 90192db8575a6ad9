#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hcn {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;  // worst margin or failure description
};

struct AcceptanceOptions {
    std::vector<std::string> only;  // criterion ids to run; empty = all
    double trials_scale = 1.0;      // scales every Monte-Carlo budget
    double density_nudge = 1.0;     // multiplies the simulated density in A5 (negative control)
    std::uint64_t seed = 314159;
    int threads = 0;  // 0 = hardware concurrency
};

/// Runs the release gate: every registered criterion at its pinned tolerance.
/// One line per criterion goes to `progress` as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& progress);

std::vector<std::string> acceptance_ids();

}  // namespace hcn
