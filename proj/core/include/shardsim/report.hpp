#pragma once

#include "shardsim/runner.hpp"

namespace shardsim {

struct AssertionResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

// Byte-stable for a fixed (script, seed): canonical field order, two-space
// indent, no timestamps or host data.
std::string render_report(const RunOutcome& run, const std::vector<AssertionResult>& assertions);

// Evaluate a scenario's embedded expectations against a finished run.
std::vector<AssertionResult> evaluate_expectations(const RunOutcome& run, const ScenarioExpect& expect);

bool all_pass(const std::vector<AssertionResult>& assertions);

}  // namespace shardsim
