#include "qcat/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcat {

Complex ScalarFactor::value(int dim) const {
    return phase * std::pow(static_cast<double>(dim), half_power / 2.0);
}

std::string Match::display() const {
    std::ostringstream os;
    os << rule << "{nodes=[";
    for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? "," : "") << nodes[i];
    os << "]";
    if (!wires.empty()) {
        os << " wires=[";
        for (std::size_t i = 0; i < wires.size(); ++i) os << (i ? "," : "") << wires[i];
        os << "]";
    }
    os << " d=" << dim << "}";
    return os.str();
}

Complex RewriteTrace::deposited_product() const {
    Complex p = 1.0;
    for (const RewriteStep& s : steps) p *= s.deposited;
    return p;
}

bool RewriteTrace::all_verified_ok() const {
    for (const RewriteStep& s : steps)
        if (s.verdict == "fail") return false;
    return true;
}

const RewriteRule* find_rule(std::string_view name) {
    for (const RewriteRule* r : builtin_rules())
        if (r->name() == name) return r;
    return nullptr;
}

std::vector<std::string> builtin_rule_names() {
    std::vector<std::string> names;
    for (const RewriteRule* r : builtin_rules()) names.emplace_back(r->name());
    return names;
}

std::vector<Match> find_matches(const Diagram& d, const RewriteRule& rule) {
    return rule.find(d);
}

Diagram apply(const Diagram& d, const Match& m) {
    const RewriteRule* rule = find_rule(m.rule);
    if (rule == nullptr) throw UnknownRule("unknown rule: " + m.rule);
    const std::vector<Match> current = rule->find(d);
    if (std::find(current.begin(), current.end(), m) == current.end())
        throw StaleMatch("match is stale: " + m.display());
    Diagram out = d;
    const ScalarFactor factor = rule->apply_in_place(out, m);
    out.multiply_scalar(factor.value(m.dim));
    return out;
}

bool verify_step(const Diagram& before, const Diagram& after, Complex declared_scalar,
                 double tol) {
    if (before.input_dims() != after.input_dims() || before.output_dims() != after.output_dims())
        throw SignatureError("verify_step: boundary signatures differ");
    std::size_t boundary_size = 1;
    for (int dim : before.input_dims()) boundary_size *= static_cast<std::size_t>(dim);
    for (int dim : before.output_dims()) boundary_size *= static_cast<std::size_t>(dim);
    const std::size_t node_count = std::max(before.nodes().size(), after.nodes().size());
    if (node_count > kVerifyNodeCap || boundary_size > kVerifyBoundaryCap) {
        std::ostringstream os;
        os << "verify_step: network too large to evaluate (" << node_count << " nodes, boundary dim "
           << boundary_size << ")";
        throw NetworkTooLarge(os.str());
    }
    const ComplexTensor lhs = evaluate(after);
    ComplexTensor rhs = evaluate(before);
    for (Complex& c : rhs.mutable_amplitudes()) c *= declared_scalar;
    return equal_within(lhs, rhs, tol);
}

NormalizeResult normalize(const Diagram& d, std::span<const std::string> strategy, int max_steps,
                          bool verify_each) {
    std::vector<const RewriteRule*> rules;
    rules.reserve(strategy.size());
    for (const std::string& name : strategy) {
        const RewriteRule* r = find_rule(name);
        if (r == nullptr) throw UnknownRule("unknown rule: " + name);
        rules.push_back(r);
    }

    NormalizeResult result{d, {}};
    int steps = 0;
    for (;;) {
        const RewriteRule* fired = nullptr;
        Match match;
        for (const RewriteRule* r : rules) {
            std::vector<Match> ms = r->find(result.diagram);
            if (!ms.empty()) {
                fired = r;
                match = std::move(ms.front());
                break;
            }
        }
        if (fired == nullptr) break;
        if (steps >= max_steps) {
            result.trace.step_limit_reached = true;
            break;
        }

        Diagram before;
        if (verify_each) before = result.diagram;
        const ScalarFactor factor = fired->apply_in_place(result.diagram, match);
        const Complex deposited = factor.value(match.dim);
        result.diagram.multiply_scalar(deposited);
        ++steps;

        RewriteStep step;
        step.rule = std::string(fired->name());
        step.summary = match.display();
        step.deposited = deposited;
        step.factor = factor;
        if (verify_each) {
            try {
                step.verdict = verify_step(before, result.diagram, 1.0) ? "pass" : "fail";
            } catch (const NetworkTooLarge&) {
                step.verdict = "unverified";
            }
        }
        result.trace.steps.push_back(std::move(step));
    }
    return result;
}

std::vector<std::string> ghz_strategy() {
    return {"add-split",   "nadd-split", "h-zero-to-plus", "prune-copy", "prune-plus",
            "plus11-to-neg", "neg2-elim", "copy11-elim",   "spider-copy", "snake"};
}

std::vector<std::string> fusion_strategy() {
    return {"spider-copy", "spider-plus", "snake", "h4-elim"};
}

}  // namespace qcat
