#pragma once

#include <string>
#include <vector>

namespace spinj {

struct VerifyOptions {
    int max_n = 30;
    /// Monte Carlo samples for the simulation checks.
    long mc_samples = 20000;
    int threads = 0;
    /// Test-only: corrupts one expected value so the harness must fail.
    bool inject_fault = false;
};

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the invariant and oracle suite with n capped at `max_n`.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace spinj
