#ifndef KSLIE_VERIFY_HPP
#define KSLIE_VERIFY_HPP

#include <cstdint>

#include "kslie/registry.hpp"

namespace kslie {

enum class Suite { Structure, Hamiltonian, Algebra, Brackets, Stability, All };

Suite suite_from_string(const std::string& name);  // throws Error on bad names
std::string suite_name(Suite s);

struct VerifyOptions {
    std::uint64_t seed = 12345;
    ZeroTestOptions zero;        // 25 trials, tol 1e-9
    int structure_samples = 100;
    double rank_threshold = 1e-8;
};

struct CheckResult {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string example_id;
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// Runs one suite (or all of them) on a compiled example.
std::vector<SuiteReport> run_suites(const CompiledExample& ex, Suite which, const VerifyOptions& opts);

}  // namespace kslie

#endif
