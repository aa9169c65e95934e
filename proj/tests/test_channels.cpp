#include <doctest.h>

#include "qcat/channels.hpp"
#include "support.hpp"

using namespace qcat;

namespace {

KrausSet bell_costate_set(int d) {
    KrausSet set;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            set.branches.push_back(
                {"B" + std::to_string(a) + std::to_string(b),
                 dagger(state(GenKind::BellState, d, std::array{a, b})), {}});
    return set;
}

DensityOperator basis_density(int d, int k) {
    std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
    amps[static_cast<std::size_t>(k) * d + k] = 1.0;
    return DensityOperator(ComplexTensor::from_matrix({d}, {d}, std::move(amps)));
}

}  // namespace

TEST_CASE("completeness: unitary, normalized state, Bell costates") {
    Rng rng(51);
    SUBCASE("a single unitary is complete on its own") {
        KrausSet set;
        set.branches.push_back({"U", random_unitary(4, rng), {}});
        const auto result = is_complete(set);
        CHECK(result.complete);
        CHECK(result.residual < kDefaultTol);
    }
    SUBCASE("a state is complete iff normalized") {
        KrausSet set;
        set.branches.push_back({"psi", random_state_tensor(3, rng), {}});
        CHECK(is_complete(set).complete);
        KrausSet bad = set;
        for (Complex& c : bad.branches[0].tensor.mutable_amplitudes()) c *= 1.1;
        CHECK_FALSE(is_complete(bad).complete);
    }
    SUBCASE("the d^2 Bell costates form a complete measurement") {
        for (int d : {2, 3, 4, 5}) CHECK(is_complete(bell_costate_set(d)).complete);
    }
    SUBCASE("residual agrees with a brute-force matrix sum") {
        KrausSet set;
        const ComplexTensor f = testing::random_tensor(3, 1, 1, rng);
        set.branches.push_back({"f", f, {}});
        // Oracle: compute sum f'f - I directly.
        const ComplexTensor sum = compose(dagger(f), f);
        double expect = 0.0;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c)
                expect = std::max(expect,
                                  std::abs(sum.entry(r, c) - (r == c ? Complex(1) : Complex(0))));
        CHECK(std::abs(is_complete(set).residual - expect) < 1e-12);
    }
    SUBCASE("signature mismatches inside a set are rejected") {
        KrausSet set;
        set.branches.push_back({"a", ComplexTensor::identity(2), {}});
        set.branches.push_back({"b", ComplexTensor::identity(3), {}});
        CHECK_THROWS_AS(is_complete(set), SignatureError);
    }
}

TEST_CASE("apply_channel") {
    Rng rng(52);
    SUBCASE("the identity unitary fixes every state") {
        KrausSet set;
        set.branches.push_back({"I", ComplexTensor::identity(3), {}});
        const DensityOperator rho{random_density({3}, rng)};
        CHECK(max_abs_diff(apply_channel(set, rho).tensor(), rho.tensor()) < kDefaultTol);
    }
    SUBCASE("the teleportation set {I/d} fixes every state") {
        const int d = 3;
        KrausSet set;
        ComplexTensor branch = ComplexTensor::identity(d);
        for (Complex& c : branch.mutable_amplitudes()) c /= static_cast<double>(d);
        for (int i = 0; i < d * d; ++i)
            set.branches.push_back({"E" + std::to_string(i), branch, {}});
        const DensityOperator rho{random_density({d}, rng)};
        CHECK(max_abs_diff(apply_channel(set, rho).tensor(), rho.tensor()) < kDefaultTol);
    }
    SUBCASE("full dephasing keeps exactly the diagonal") {
        KrausSet set;
        for (int k = 0; k < 2; ++k) {
            std::vector<Complex> amps(4, Complex(0.0));
            amps[static_cast<std::size_t>(k) * 2 + k] = 1.0;
            set.branches.push_back(
                {"P" + std::to_string(k), ComplexTensor::from_matrix({2}, {2}, amps), {}});
        }
        const DensityOperator rho{random_density({2}, rng)};
        const DensityOperator out = apply_channel(set, rho);
        // Oracle: the diagonal survives, off-diagonals vanish.
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) {
                const Complex expect = r == c ? rho.tensor().entry(r, c) : Complex(0.0);
                CHECK(std::abs(out.tensor().entry(r, c) - expect) < kDefaultTol);
            }
    }
    SUBCASE("incomplete sets are rejected") {
        KrausSet set;
        ComplexTensor half = ComplexTensor::identity(2);
        for (Complex& c : half.mutable_amplitudes()) c *= 0.5;
        set.branches.push_back({"half", half, {}});
        const DensityOperator rho{random_density({2}, rng)};
        CHECK_THROWS_AS(apply_channel(set, rho), IncompleteSet);
    }
    SUBCASE("channel output stays a valid density operator") {
        const KrausSet set = bell_costate_set(2);
        // Bell costates map two qubits to scalars; use the 2-qubit input.
        const DensityOperator rho{random_density({2, 2}, rng)};
        const DensityOperator out = apply_channel(set, rho);
        double trace = 0.0;
        for (std::size_t k = 0; k < out.tensor().output_size(); ++k)
            trace += out.tensor().entry(k, k).real();
        CHECK(std::abs(trace - 1.0) < kDefaultTol);
    }
}

TEST_CASE("tensor and composition of complete sets stay complete") {
    Rng rng(53);
    KrausSet u_set;
    u_set.branches.push_back({"U", random_unitary(2, rng), {}});
    SUBCASE("tensor of two singleton unitary sets") {
        const KrausSet prod = tensor_sets(u_set, u_set);
        CHECK(prod.branches.size() == 1);
        CHECK(is_complete(prod).complete);
    }
    SUBCASE("tensor of the Bell measurement with the identity set") {
        const KrausSet prod = tensor_sets(bell_costate_set(2), u_set);
        CHECK(prod.branches.size() == 4);
        CHECK(is_complete(prod).complete);
    }
    SUBCASE("composition of two d^2-branch sets has d^4 branches and is complete") {
        const int d = 2;
        KrausSet weights;  // a complete set of scaled unitaries
        for (int i = 0; i < d * d; ++i) {
            ComplexTensor u = random_unitary(d, rng);
            for (Complex& c : u.mutable_amplitudes()) c /= static_cast<double>(d);
            weights.branches.push_back({"W" + std::to_string(i), std::move(u), {}});
        }
        REQUIRE(is_complete(weights).complete);
        const KrausSet composed = compose_sets(weights, weights);
        CHECK(composed.branches.size() == 16);
        CHECK(is_complete(composed).complete);
    }
    SUBCASE("composability is checked") {
        KrausSet three;
        three.branches.push_back({"V", random_unitary(3, rng), {}});
        CHECK_THROWS_AS(compose_sets(u_set, three), SignatureError);
    }
}

TEST_CASE("Bell costates factor through the cap with Z/X corrections") {
    // <B_ab| = (1/sqrt d) cap (Z^-a (x) X^-b), the identity behind cap expansion.
    for (int d : {2, 3, 4, 5})
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const ComplexTensor lhs = dagger(state(GenKind::BellState, d, std::array{a, b}));
                ComplexTensor rhs = compose(
                    compact(GenKind::Cap, d),
                    kron(gate(GenKind::Zpow, d, std::array{mod_d(-a, d)}),
                         gate(GenKind::Xpow, d, std::array{mod_d(-b, d)})));
                for (Complex& c : rhs.mutable_amplitudes())
                    c /= std::sqrt(static_cast<double>(d));
                CHECK(max_abs_diff(lhs, rhs) < kDefaultTol);
            }
}

TEST_CASE("cap expansion") {
    SUBCASE("branch (0,0) evaluates to the original cap") {
        Diagram diag;
        const int i0 = diag.add_input(2), i1 = diag.add_input(2);
        const NodeId cap = diag.add_node(GeneratorSpec::cap(2));
        diag.add_wire(Endpoint::boundary_input(i0), Endpoint::node_input(cap, 0));
        diag.add_wire(Endpoint::boundary_input(i1), Endpoint::node_input(cap, 1));

        const CapExpansion expansion = expand_cap_to_bell_branches(diag, cap);
        REQUIRE(expansion.branches.size() == 4);
        CHECK(expansion.branches.front().a == 0);
        CHECK(expansion.branches.front().b == 0);
        CHECK(max_abs_diff(evaluate(expansion.branches.front().diagram), evaluate(diag)) <
              kDefaultTol);
    }
    SUBCASE("the scaled branch set is a complete measurement") {
        for (int d : {2, 3}) {
            Diagram diag;
            const int i0 = diag.add_input(d), i1 = diag.add_input(d);
            const NodeId cap = diag.add_node(GeneratorSpec::cap(d));
            diag.add_wire(Endpoint::boundary_input(i0), Endpoint::node_input(cap, 0));
            diag.add_wire(Endpoint::boundary_input(i1), Endpoint::node_input(cap, 1));
            const CapExpansion expansion = expand_cap_to_bell_branches(diag, cap);
            CHECK(expansion.set.branches.size() ==
                  static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
            CHECK(is_complete(expansion.set).complete);
        }
    }
    SUBCASE("teleportation wire: branches match (Z^a (x) X^b) cup corrections") {
        // Expanding the cap of a snake leaves, per branch, the operator
        // (1/1) X^b Z^-a scaled by nothing: sliding the corrections gives the
        // teleportation byproducts computed in the generators tests.
        const int d = 3;
        Diagram diag;
        const int in = diag.add_input(d);
        const int out = diag.add_output(d);
        const NodeId cup = diag.add_node(GeneratorSpec::normalized_cup(d));
        const NodeId cap = diag.add_node(GeneratorSpec::cap(d));
        diag.add_wire(Endpoint::boundary_input(in), Endpoint::node_input(cap, 0));
        diag.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(cap, 1));
        diag.add_wire(Endpoint::node_output(cup, 1), Endpoint::boundary_output(out));

        const CapExpansion expansion = expand_cap_to_bell_branches(diag, cap);
        for (const CapBranch& branch : expansion.branches) {
            const ComplexTensor value = evaluate(branch.diagram);
            // sqrt(d) <B_ab| on (in, cup-half) against |cup> leaves X^b Z^-a / sqrt(d).
            ComplexTensor expected =
                compose(gate(GenKind::Xpow, d, std::array{branch.b}),
                        gate(GenKind::Zpow, d, std::array{mod_d(-branch.a, d)}));
            for (Complex& c : expected.mutable_amplitudes())
                c /= std::sqrt(static_cast<double>(d));
            CHECK(max_abs_diff(value, expected) < kDefaultTol);
        }
    }
    SUBCASE("non-cap nodes are rejected") {
        Diagram diag;
        const NodeId cup = diag.add_node(GeneratorSpec::cup(2));
        diag.add_wire(Endpoint::node_output(cup, 0), Endpoint::boundary_output(diag.add_output(2)));
        diag.add_wire(Endpoint::node_output(cup, 1), Endpoint::boundary_output(diag.add_output(2)));
        CHECK_THROWS_AS(expand_cap_to_bell_branches(diag, cup), QcatError);
    }
}

TEST_CASE("cup equivalence") {
    Rng rng(54);
    SUBCASE("the normalized cup is a cup with U = I") {
        for (int d : {2, 3, 5}) {
            const CupEquivalence r = cup_equivalence(compact(GenKind::NormalizedCup, d));
            REQUIRE(r.is_cup);
            CHECK(max_abs_diff(*r.local_unitary, ComplexTensor::identity(d)) < 1e-5);
        }
    }
    SUBCASE("local rotations by symmetric unitaries are recognized and recovered") {
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 3;
            const ComplexTensor u = random_symmetric_unitary(d, rng);
            const ComplexTensor psi =
                compose(kron(u, ComplexTensor::identity(d)), compact(GenKind::NormalizedCup, d));
            const CupEquivalence r = cup_equivalence(psi);
            REQUIRE(r.is_cup);
            CHECK(max_abs_diff(*r.local_unitary, u) < 1e-5);
        }
    }
    SUBCASE("|00> is rejected with singular values (1, 0, ...)") {
        std::vector<Complex> amps(4, Complex(0.0));
        amps[0] = 1.0;
        const ComplexTensor psi(
            {{LegDirection::output, 2}, {LegDirection::output, 2}}, std::move(amps));
        const CupEquivalence r = cup_equivalence(psi);
        CHECK_FALSE(r.is_cup);
        REQUIRE(r.singular_values.size() == 2);
        CHECK(std::abs(r.singular_values[0] - 1.0) < 1e-9);
        CHECK(std::abs(r.singular_values[1]) < 1e-9);
    }
    SUBCASE("generic random states are not cups") {
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 3;
            ComplexTensor psi = testing::random_tensor(d, 2, 0, rng);
            const double norm = psi.norm();
            for (Complex& c : psi.mutable_amplitudes()) c /= norm;
            CHECK_FALSE(cup_equivalence(psi).is_cup);
        }
    }
    SUBCASE("recognized cups slide operators") {
        const int d = 3;
        const ComplexTensor u = random_symmetric_unitary(d, rng);
        const ComplexTensor psi =
            compose(kron(u, ComplexTensor::identity(d)), compact(GenKind::NormalizedCup, d));
        const CupEquivalence r = cup_equivalence(psi);
        REQUIRE(r.is_cup);
        // Sliding condition F C = C g^T with C = U/sqrt(d): g = (C^-1 F C)^T.
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexTensor f = testing::random_tensor(d, 1, 1, rng);
            const ComplexTensor c_inv = dagger(u);  // (U/sqrt d)^-1 = sqrt(d) U^-1
            const ComplexTensor g = transpose_cb(compose(compose(c_inv, f), u));
            const ComplexTensor lhs = compose(kron(f, ComplexTensor::identity(d)), psi);
            const ComplexTensor rhs = compose(kron(ComplexTensor::identity(d), g), psi);
            CHECK(max_abs_diff(lhs, rhs) < kDefaultTol);
        }
    }
    SUBCASE("shape violations throw") {
        CHECK_THROWS_AS(cup_equivalence(ComplexTensor::identity(2)), SignatureError);
    }
}

TEST_CASE("density operator validation") {
    Rng rng(55);
    SUBCASE("random densities validate") {
        CHECK_NOTHROW(DensityOperator{random_density({3}, rng)});
    }
    SUBCASE("non-Hermitian inputs are rejected") {
        ComplexTensor t = random_density({2}, rng);
        t.mutable_amplitudes()[1] += Complex(0.5, 0.5);
        CHECK_THROWS_AS(DensityOperator{t}, QcatError);
    }
    SUBCASE("negative operators are rejected, not clipped") {
        // diag(1.5, -0.5): Hermitian, trace one, not PSD.
        const ComplexTensor t =
            ComplexTensor::from_matrix({2}, {2}, {Complex(1.5), 0.0, 0.0, Complex(-0.5)});
        CHECK_THROWS_AS(DensityOperator{t}, QcatError);
    }
    SUBCASE("pure basis states validate") { CHECK_NOTHROW(basis_density(3, 1)); }
}
