#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcat/random.hpp"
#include "qcat/rewrite.hpp"

namespace qcat {

/// Builds a random well-formed diagram that contains at least one match of the
/// named rule, embedded in randomized context.
Diagram random_host(std::string_view rule, int dim, Rng& rng);

struct RuleCheckRow {
    std::string rule;
    int dim = 0;
    int trials = 0;
    int passed = 0;
    int failed = 0;
    int unverified = 0;
};

struct RuleTrialFailure {
    std::string rule;
    int dim = 0;
    int trial = 0;
    std::string reason;
    Diagram host;
};

struct SoundnessReport {
    std::vector<RuleCheckRow> rows;
    std::vector<RuleTrialFailure> failures;
    std::uint64_t seed = 0;

    bool all_passed() const { return failures.empty(); }
};

/// Runs the master soundness property: for every builtin rule and every dim,
/// `trials` random hosts, apply the first match, certify numerically.
/// `corrupt_rule` (test hook) injects a wrong scalar into that rule's steps.
SoundnessReport verify_builtin_rules(std::span<const int> dims, int trials, std::uint64_t seed,
                                     const std::string& corrupt_rule = "");

}  // namespace qcat
