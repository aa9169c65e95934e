#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcat/diagram.hpp"

namespace qcat {

/// Exact symbolic scalar of the form d^{half_power/2} * phase, deposited into
/// the diagram accumulator by rule applications so that the total evaluation
/// is preserved across a rewrite.
struct ScalarFactor {
    int half_power = 0;
    Complex phase = 1.0;

    Complex value(int dim) const;
    static ScalarFactor one() { return {}; }
    static ScalarFactor sqrt_dim(int half_power) { return {half_power, 1.0}; }
};

struct Match {
    std::string rule;
    std::vector<NodeId> nodes;
    std::vector<WireId> wires;
    int dim = 0;
    std::vector<int> data;  // rule-specific bindings

    std::string display() const;

    friend bool operator==(const Match&, const Match&) = default;
};

struct RewriteStep {
    std::string rule;
    std::string summary;
    Complex deposited = 1.0;
    ScalarFactor factor;
    std::string verdict;  // "pass", "fail", "unverified" or "" when not checked
};

struct RewriteTrace {
    std::vector<RewriteStep> steps;
    bool step_limit_reached = false;

    Complex deposited_product() const;
    bool all_verified_ok() const;
};

struct UnknownRule : QcatError {
    using QcatError::QcatError;
};

struct StaleMatch : QcatError {
    using QcatError::QcatError;
};

/// One diagrammatic law: a subgraph matcher plus an in-place replacer that
/// returns the scalar factor it deposited into the diagram accumulator.
/// Soundness contract: evaluate(after) == evaluate(before) for every match.
class RewriteRule {
public:
    virtual ~RewriteRule() = default;
    virtual std::string_view name() const = 0;
    /// All matches in deterministic order (sorted by bound node ids).
    virtual std::vector<Match> find(const Diagram& d) const = 0;
    virtual ScalarFactor apply_in_place(Diagram& d, const Match& m) const = 0;
};

/// The full rule catalog, in a fixed order.
std::span<const RewriteRule* const> builtin_rules();
const RewriteRule* find_rule(std::string_view name);  // nullptr when unknown
std::vector<std::string> builtin_rule_names();

std::vector<Match> find_matches(const Diagram& d, const RewriteRule& rule);

/// Applies a match to a copy of the diagram. Throws StaleMatch when the match
/// no longer occurs in `d`.
Diagram apply(const Diagram& d, const Match& m);

inline constexpr int kVerifyNodeCap = 20;
inline constexpr std::size_t kVerifyBoundaryCap = 4096;

/// Numerical soundness oracle: evaluate(after) == declared_scalar * evaluate(before)
/// within tol. Throws SignatureError on boundary mismatch and NetworkTooLarge
/// beyond the evaluation size cap (callers report such steps as unverified).
bool verify_step(const Diagram& before, const Diagram& after, Complex declared_scalar,
                 double tol = kDefaultTol);

struct NormalizeResult {
    Diagram diagram;
    RewriteTrace trace;
};

/// Repeatedly applies the first available match in strategy order until no
/// rule matches or max_steps is reached. With verify_each every step is
/// certified numerically (oversized steps are reported as unverified).
NormalizeResult normalize(const Diagram& d, std::span<const std::string> strategy, int max_steps,
                          bool verify_each);

/// The documented fusion strategy that takes an ADD-ladder GHZ circuit to a
/// single copy dot.
std::vector<std::string> ghz_strategy();

/// Strategy that fuses connected same-kind dot graphs into one dot.
std::vector<std::string> fusion_strategy();

}  // namespace qcat
