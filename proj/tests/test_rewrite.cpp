#include <doctest.h>

#include <set>

#include "qcat/protocols.hpp"
#include "qcat/soundness.hpp"
#include "support.hpp"

using namespace qcat;

namespace {

// COPY^{1->2} -- NEG on one branch -- PLUS^{2->1}, as a 1->1 diagram.
Diagram hopf_diagram(int d) {
    Diagram out;
    const int in = out.add_input(d);
    const int slot = out.add_output(d);
    const NodeId copy = out.add_node(GeneratorSpec::copy_dot(d, 1, 2));
    const NodeId neg = out.add_node(GeneratorSpec::gate(GenKind::NEG, d));
    const NodeId plus = out.add_node(GeneratorSpec::plus_dot(d, 2, 1));
    out.add_wire(Endpoint::boundary_input(in), Endpoint::node_input(copy, 0));
    out.add_wire(Endpoint::node_output(copy, 0), Endpoint::node_input(neg, 0));
    out.add_wire(Endpoint::node_output(neg, 0), Endpoint::node_input(plus, 0));
    out.add_wire(Endpoint::node_output(copy, 1), Endpoint::node_input(plus, 1));
    out.add_wire(Endpoint::node_output(plus, 0), Endpoint::boundary_output(slot));
    return out;
}

ComplexTensor zero_bra_plus(int d) {
    // |0><+| in the computational basis.
    std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
    for (int c = 0; c < d; ++c) amps[static_cast<std::size_t>(c)] = 1.0 / std::sqrt(static_cast<double>(d));
    return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
}

Diagram straight_wire(int d) {
    Diagram out;
    out.add_wire(Endpoint::boundary_input(out.add_input(d)),
                 Endpoint::boundary_output(out.add_output(d)));
    return out;
}

}  // namespace

TEST_CASE("the builtin catalog is complete and uniquely named") {
    const auto rules = builtin_rules();
    CHECK(rules.size() >= 18);
    std::set<std::string> names;
    for (const RewriteRule* r : rules) names.insert(std::string(r->name()));
    CHECK(names.size() == rules.size());
    CHECK(find_rule("spider-copy") != nullptr);
    CHECK(find_rule("no-such-rule") == nullptr);
}

TEST_CASE("spider-copy fuses joined dots and enumerates adjacent pairs") {
    const int d = 3;
    // Chain of three copy dots: 1->2, 1->2, 2->1 along one rail.
    Diagram diag;
    const NodeId a = diag.add_node(GeneratorSpec::copy_dot(d, 1, 2));
    const NodeId b = diag.add_node(GeneratorSpec::copy_dot(d, 1, 2));
    const NodeId c = diag.add_node(GeneratorSpec::copy_dot(d, 2, 1));
    diag.add_wire(Endpoint::boundary_input(diag.add_input(d)), Endpoint::node_input(a, 0));
    diag.add_wire(Endpoint::node_output(a, 0), Endpoint::node_input(b, 0));
    diag.add_wire(Endpoint::node_output(b, 0), Endpoint::node_input(c, 0));
    diag.add_wire(Endpoint::node_output(a, 1), Endpoint::boundary_output(diag.add_output(d)));
    diag.add_wire(Endpoint::node_output(b, 1), Endpoint::boundary_output(diag.add_output(d)));
    diag.add_wire(Endpoint::node_output(c, 0), Endpoint::boundary_output(diag.add_output(d)));
    diag.add_wire(Endpoint::boundary_input(diag.add_input(d)), Endpoint::node_input(c, 1));
    REQUIRE(validate(diag).empty());

    const RewriteRule* rule = find_rule("spider-copy");
    const auto matches = rule->find(diag);
    // Adjacent pairs only: (a,b) and (b,c).
    REQUIRE(matches.size() == 2);
    CHECK(matches[0].nodes == std::vector<NodeId>{a, b});
    CHECK(matches[1].nodes == std::vector<NodeId>{b, c});

    const ComplexTensor before = evaluate(diag);
    const Diagram after = apply(diag, matches[0]);
    CHECK(max_abs_diff(evaluate(after), before) < kDefaultTol);
    CHECK(after.nodes().size() == 2);
}

TEST_CASE("snake matches zigzags but not straight wires") {
    const RewriteRule* rule = find_rule("snake");
    CHECK(rule->find(straight_wire(3)).empty());

    Diagram zig;
    const int in = zig.add_input(3), out_slot = zig.add_output(3);
    const NodeId cup = zig.add_node(GeneratorSpec::cup(3));
    const NodeId cap = zig.add_node(GeneratorSpec::cap(3));
    zig.add_wire(Endpoint::boundary_input(in), Endpoint::node_input(cap, 0));
    zig.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(cap, 1));
    zig.add_wire(Endpoint::node_output(cup, 1), Endpoint::boundary_output(out_slot));
    REQUIRE(validate(zig).empty());

    const auto matches = rule->find(zig);
    REQUIRE(matches.size() == 1);
    const Diagram after = apply(zig, matches[0]);
    CHECK(after.nodes().empty());
    CHECK(equal_within(evaluate(after), ComplexTensor::identity(3)));
}

TEST_CASE("hopf rewrites to |0><+| exactly") {
    for (int d : {2, 3, 4, 5}) {
        const Diagram diag = hopf_diagram(d);
        CHECK(max_abs_diff(evaluate(diag), zero_bra_plus(d)) < kDefaultTol);

        const RewriteRule* rule = find_rule("hopf");
        const auto matches = rule->find(diag);
        REQUIRE(matches.size() == 1);
        const Diagram after = apply(diag, matches[0]);
        CHECK(max_abs_diff(evaluate(after), zero_bra_plus(d)) < kDefaultTol);
        // The replacement is the disconnected unit/counit dot pair.
        CHECK(after.nodes().size() == 2);
    }
}

TEST_CASE("slide moves an operator around a cup as its transpose") {
    Rng rng(31);
    for (int d : {2, 3}) {
        const ComplexTensor f = testing::random_tensor(d, 1, 1, rng);
        Diagram diag;
        const int o0 = diag.add_output(d), o1 = diag.add_output(d);
        const NodeId cup = diag.add_node(GeneratorSpec::cup(d));
        const NodeId fn = diag.add_node(GeneratorSpec::box(f, "f"));
        diag.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(fn, 0));
        diag.add_wire(Endpoint::node_output(fn, 0), Endpoint::boundary_output(o0));
        diag.add_wire(Endpoint::node_output(cup, 1), Endpoint::boundary_output(o1));

        // Theorem-level check: (f (x) I) cup = (I (x) f^T) cup.
        const ComplexTensor lhs = evaluate(diag);
        const ComplexTensor rhs =
            compose(kron(ComplexTensor::identity(d), transpose_cb(f)), compact(GenKind::Cup, d));
        CHECK(max_abs_diff(lhs, rhs) < kDefaultTol);

        const RewriteRule* rule = find_rule("slide");
        const auto matches = rule->find(diag);
        REQUIRE(matches.size() == 1);
        const Diagram after = apply(diag, matches[0]);
        CHECK(max_abs_diff(evaluate(after), lhs) < kDefaultTol);
        // f now sits on the second leg, transposed.
        bool has_transposed_box = false;
        for (const auto& [id, node] : after.nodes())
            if (node.spec.kind == GenKind::Box)
                has_transposed_box |= equal_within(*node.spec.box_tensor, transpose_cb(f));
        CHECK(has_transposed_box);
    }
}

TEST_CASE("bialgebra collapses NADD-SWAP-NADD to a crossed NADD") {
    for (int d : {2, 3, 4, 5}) {
        DiagramBuilder b;
        const int r0 = b.rail_from_input(d), r1 = b.rail_from_input(d);
        b.apply_gate2(r0, r1, GeneratorSpec::gate(GenKind::NADD, d));
        b.apply_gate2(r0, r1, GeneratorSpec::swap(d, d));
        b.apply_gate2(r0, r1, GeneratorSpec::gate(GenKind::NADD, d));
        b.terminate_output(r0);
        b.terminate_output(r1);
        const Diagram diag = b.finish();

        // Oracle: NADD_{2,1} = SWAP NADD SWAP.
        const ComplexTensor swap = gate(GenKind::SWAP, d, std::array{d});
        const ComplexTensor nadd21 =
            compose(compose(swap, gate(GenKind::NADD, d)), swap);
        CHECK(max_abs_diff(evaluate(diag), nadd21) < kDefaultTol);

        const RewriteRule* rule = find_rule("bialgebra");
        const auto matches = rule->find(diag);
        REQUIRE(matches.size() == 1);
        const Diagram after = apply(diag, matches[0]);
        CHECK(after.nodes().size() == 1);
        CHECK(max_abs_diff(evaluate(after), nadd21) < kDefaultTol);
    }
}

TEST_CASE("commutation rules move gates through dots") {
    const int d = 3;
    // X on the input of a copy dot multiplies onto every output.
    DiagramBuilder b;
    const int rail = b.rail_from_input(d);
    b.apply_gate(rail, GeneratorSpec::gate(GenKind::Xpow, d, {1}));
    Diagram diag = b.diagram();
    const NodeId dot = diag.add_node(GeneratorSpec::copy_dot(d, 1, 2));
    const NodeId xgate = diag.nodes().begin()->first;
    diag.add_wire(Endpoint::node_output(xgate, 0), Endpoint::node_input(dot, 0));
    diag.add_wire(Endpoint::node_output(dot, 0), Endpoint::boundary_output(diag.add_output(d)));
    diag.add_wire(Endpoint::node_output(dot, 1), Endpoint::boundary_output(diag.add_output(d)));
    REQUIRE(validate(diag).empty());

    const RewriteRule* rule = find_rule("commute-x-copy");
    const auto matches = rule->find(diag);
    REQUIRE(matches.size() == 1);
    const ComplexTensor before = evaluate(diag);
    const Diagram after = apply(diag, matches[0]);
    CHECK(max_abs_diff(evaluate(after), before) < kDefaultTol);
    int x_count = 0;
    for (const auto& [id, node] : after.nodes()) x_count += node.spec.kind == GenKind::Xpow;
    CHECK(x_count == 2);
}

TEST_CASE("Z and X commute through NADD as in the d-dimensional CNOT rules") {
    for (int d : {2, 3, 5}) {
        const ComplexTensor nadd = gate(GenKind::NADD, d);
        const ComplexTensor id = ComplexTensor::identity(d);
        const ComplexTensor z = gate(GenKind::Zpow, d, std::array{1});
        const ComplexTensor x = gate(GenKind::Xpow, d, std::array{1});
        const ComplexTensor zi = gate(GenKind::Zpow, d, std::array{d - 1});
        const ComplexTensor xi = gate(GenKind::Xpow, d, std::array{d - 1});
        CHECK(max_abs_diff(compose(nadd, kron(z, id)), compose(kron(z, id), nadd)) < kDefaultTol);
        CHECK(max_abs_diff(compose(nadd, kron(x, id)), compose(kron(x, xi), nadd)) < kDefaultTol);
        CHECK(max_abs_diff(compose(nadd, kron(id, z)), compose(kron(zi, zi), nadd)) < kDefaultTol);
        CHECK(max_abs_diff(compose(nadd, kron(id, x)), compose(kron(id, xi), nadd)) < kDefaultTol);
    }
}

TEST_CASE("verify_step") {
    const Diagram wire = straight_wire(3);
    SUBCASE("identity rewrite verifies with scalar 1") {
        CHECK(verify_step(wire, wire, 1.0));
    }
    SUBCASE("deliberately corrupted replacement fails") {
        Diagram wrong = wire;
        wrong.multiply_scalar(1.001);
        CHECK_FALSE(verify_step(wire, wrong, 1.0));
        CHECK(verify_step(wire, wrong, 1.001));
    }
    SUBCASE("boundary mismatch is an error") {
        CHECK_THROWS_AS(verify_step(wire, straight_wire(2), 1.0), SignatureError);
    }
    SUBCASE("oversized networks are reported, not evaluated") {
        Diagram big;
        std::vector<int> rails;
        DiagramBuilder b;
        for (int i = 0; i < 7; ++i) rails.push_back(b.rail_from_input(8));
        for (int r : rails) b.terminate_output(r);
        const Diagram wide = b.finish();
        CHECK_THROWS_AS(verify_step(wide, wide, 1.0), NetworkTooLarge);
    }
}

TEST_CASE("apply rejects stale matches") {
    Diagram diag = hopf_diagram(3);
    const RewriteRule* rule = find_rule("hopf");
    const Match m = rule->find(diag).front();
    const Diagram changed = apply(diag, m);
    CHECK_THROWS_AS(apply(changed, m), StaleMatch);
}

TEST_CASE("normalize leaves normal forms alone") {
    const Diagram wire = straight_wire(3);
    const std::vector<std::string> strategy = fusion_strategy();
    const NormalizeResult result = normalize(wire, strategy, 10, true);
    CHECK(result.trace.steps.empty());
    CHECK(result.diagram == wire);
}

TEST_CASE("normalize flags unknown rules") {
    const std::vector<std::string> strategy = {"not-a-rule"};
    CHECK_THROWS_AS(normalize(straight_wire(2), strategy, 5, false), UnknownRule);
}

TEST_CASE("spider generalization: connected dot graphs fuse to one dot") {
    Rng rng(33);
    const std::vector<std::string> strategy = fusion_strategy();
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 15; ++trial) {
            const GenKind kind = testing::chance(rng, 0.5) ? GenKind::CopyDot : GenKind::PlusDot;
            const Diagram graph = testing::random_dot_graph(kind, d, 4, 6, rng);
            REQUIRE(validate(graph).empty());
            const int initial_nodes = static_cast<int>(graph.nodes().size());
            const NormalizeResult result = normalize(graph, strategy, 64, true);
            CHECK(result.trace.all_verified_ok());
            CHECK_FALSE(result.trace.step_limit_reached);
            // Termination bound: fusion strictly shrinks the dot count.
            CHECK(static_cast<int>(result.trace.steps.size()) <= initial_nodes);
            int dots = 0;
            for (const auto& [id, node] : result.diagram.nodes()) dots += node.spec.is_dot();
            CHECK(dots == 1);
            CHECK(max_abs_diff(evaluate(result.diagram), evaluate(graph)) < kDefaultTol);
        }
    }
}

TEST_CASE("the master soundness property holds on a sampled corpus") {
    const std::array<int, 2> dims = {2, 3};
    const SoundnessReport report = verify_builtin_rules(dims, 5, 2024);
    for (const RuleTrialFailure& f : report.failures)
        MESSAGE(f.rule, " d=", f.dim, " trial ", f.trial, ": ", f.reason);
    CHECK(report.all_passed());
}

TEST_CASE("the corruption hook is caught by verification") {
    const std::array<int, 1> dims = {3};
    const SoundnessReport report = verify_builtin_rules(dims, 3, 99, "nadd-split");
    CHECK_FALSE(report.all_passed());
    for (const RuleTrialFailure& f : report.failures) CHECK(f.rule == "nadd-split");
}

TEST_CASE("traces account for every deposited scalar") {
    // Applying the GHZ strategy: the accumulator change is exactly the
    // product of the deposited factors, and the total evaluation is kept.
    DiagramBuilder b;
    std::vector<int> rails;
    const int d = 3;
    for (int i = 0; i < 4; ++i) rails.push_back(b.rail_from_state(GeneratorSpec::basis_state(d, 0)));
    b.apply_gate(rails[0], GeneratorSpec::gate(GenKind::H, d));
    for (int i = 0; i + 1 < 4; ++i)
        b.apply_gate2(rails[i], rails[i + 1], GeneratorSpec::gate(GenKind::ADD, d));
    for (int r : rails) b.terminate_output(r);
    const Diagram circuit = b.finish();

    const std::vector<std::string> strategy = ghz_strategy();
    const NormalizeResult result = normalize(circuit, strategy, 40, false);
    CHECK(std::abs(result.diagram.scalar() -
                   circuit.scalar() * result.trace.deposited_product()) < 1e-12);
    CHECK(max_abs_diff(evaluate(result.diagram), evaluate(circuit)) < kDefaultTol);
    CHECK(std::abs(result.trace.deposited_product() - Complex(1.0 / std::sqrt(3.0))) < kDefaultTol);
}

TEST_CASE("rule deposits are exact symbolic factors") {
    Diagram diag = hopf_diagram(4);
    const RewriteRule* rule = find_rule("hopf");
    Diagram work = diag;
    const ScalarFactor factor = rule->apply_in_place(work, rule->find(diag).front());
    CHECK(factor.half_power == -2);
    CHECK(std::abs(factor.phase - Complex(1.0)) < 1e-15);
    CHECK(std::abs(factor.value(4) - Complex(0.25)) < 1e-15);
}
