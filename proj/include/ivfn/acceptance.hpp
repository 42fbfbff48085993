#pragma once

#include <string>
#include <vector>

namespace ivfn {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    int threads = 1;
    /// Command-line binary run twice by the determinism criterion; skipped
    /// when empty.
    std::string cli_path;
};

inline constexpr int kCriterionCount = 11;

std::string criterion_name(int id);
/// Runs one criterion; exceptions are reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& options);

/// "[PASS] 3 name: detail"
std::string format_result(const CriterionResult& r);

}  // namespace ivfn
