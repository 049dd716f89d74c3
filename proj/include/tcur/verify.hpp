#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tcur {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst observed value of the checked quantity
    double threshold = 0.0;  // bound it must not exceed
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20250101;
    /// Name of a check whose computed result gets perturbed before comparison.
    /// Used to confirm the suite actually fails when an invariant breaks.
    std::string inject_fault;
};

/// Names of every invariant check, in execution order.
const std::vector<std::string>& verification_checks();

/// Runs the oracle and invariant suite over every module.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace tcur
