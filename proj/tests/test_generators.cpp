#include <doctest.h>

#include "qcat/generators.hpp"
#include "support.hpp"

using namespace qcat;

namespace {

ComplexTensor kron_power(const ComplexTensor& u, int count) {
    ComplexTensor acc = ComplexTensor::scalar(1.0);
    for (int i = 0; i < count; ++i) acc = kron(acc, u);
    return acc;
}

// Permutes output legs i and j of an all-equal-dimension tensor.
ComplexTensor swap_output_legs(const ComplexTensor& t, int i, int j) {
    std::vector<LegType> legs = t.legs();
    std::vector<Complex> amps(t.size());
    std::vector<int> idx(legs.size(), 0);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        std::vector<int> src = idx;
        std::swap(src[static_cast<std::size_t>(i)], src[static_cast<std::size_t>(j)]);
        amps[flat] = t.at(src);
        for (int axis = static_cast<int>(idx.size()) - 1; axis >= 0; --axis) {
            if (++idx[static_cast<std::size_t>(axis)] < legs[static_cast<std::size_t>(axis)].dim)
                break;
            idx[static_cast<std::size_t>(axis)] = 0;
        }
    }
    return ComplexTensor(std::move(legs), std::move(amps));
}

}  // namespace

TEST_CASE("H at d=2 is the Hadamard gate") {
    const double s = 1.0 / std::sqrt(2.0);
    const ComplexTensor expected =
        ComplexTensor::from_matrix({2}, {2}, {s, s, s, -s});
    CHECK(max_abs_diff(gate(GenKind::H, 2), expected) < 1e-12);
    CHECK(max_abs_diff(gate(GenKind::H, 2), testing::oracle_dft(2)) < 1e-9);
}

TEST_CASE("NEG at d=2 is the identity") {
    CHECK(max_abs_diff(gate(GenKind::NEG, 2), ComplexTensor::identity(2)) < 1e-12);
}

TEST_CASE("ADD and NADD reduce to CNOT on qubits") {
    std::vector<Complex> cnot(16, Complex(0.0));
    cnot[0 * 4 + 0] = 1.0;
    cnot[1 * 4 + 1] = 1.0;
    cnot[3 * 4 + 2] = 1.0;
    cnot[2 * 4 + 3] = 1.0;
    const ComplexTensor expected = ComplexTensor::from_matrix({2, 2}, {2, 2}, std::move(cnot));
    CHECK(max_abs_diff(gate(GenKind::NADD, 2), expected) < 1e-12);
    CHECK(max_abs_diff(gate(GenKind::ADD, 2), expected) < 1e-12);
}

TEST_CASE("ADD_3 sends |1,2> to |1,0>") {
    const ComplexTensor add = gate(GenKind::ADD, 3);
    const std::array<int, 4> idx = {1, 0, 1, 2};
    CHECK(std::abs(add.at(idx) - Complex(1.0)) < 1e-12);
}

TEST_CASE("gate algebra identities for small dimensions") {
    for (int d : {2, 3}) {
        const ComplexTensor h = gate(GenKind::H, d);
        const ComplexTensor neg = gate(GenKind::NEG, d);
        const ComplexTensor id = ComplexTensor::identity(d);
        CHECK(equal_within(compose(compose(h, h), compose(h, h)), id));
        CHECK(equal_within(compose(neg, neg), id));
        CHECK(equal_within(compose(h, h), neg));

        const ComplexTensor z = gate(GenKind::Zpow, d, std::array{1});
        const ComplexTensor x = gate(GenKind::Xpow, d, std::array{1});
        CHECK(equal_within(compose(compose(h, x), dagger(h)), z));
        CHECK(equal_within(compose(compose(h, z), dagger(h)), dagger(x)));
    }
}

TEST_CASE("states: plus, Bell closed form vs preparation circuit") {
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(max_abs_diff(state(GenKind::PlusState, 2),
                       ComplexTensor({{LegDirection::output, 2}}, {s, s})) < 1e-12);

    const ComplexTensor bell00 = state(GenKind::BellState, 2, std::array{0, 0});
    CHECK(std::abs(bell00.amplitudes()[0] - s) < 1e-12);
    CHECK(std::abs(bell00.amplitudes()[3] - s) < 1e-12);

    // Oracle: |B_ab> = ADD (H (x) I) |a,b> evaluated as matrices.
    for (int d : {2, 3, 5}) {
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                std::vector<Complex> ab(static_cast<std::size_t>(d) * d, Complex(0.0));
                ab[static_cast<std::size_t>(a) * d + b] = 1.0;
                const ComplexTensor basis(
                    {{LegDirection::output, d}, {LegDirection::output, d}}, std::move(ab));
                const ComplexTensor circuit = compose(
                    gate(GenKind::ADD, d),
                    compose(kron(gate(GenKind::H, d), ComplexTensor::identity(d)), basis));
                CHECK(max_abs_diff(circuit, state(GenKind::BellState, d, std::array{a, b})) <
                      kDefaultTol);
            }
    }
}

TEST_CASE("state norms and index validation") {
    for (int d : {2, 3, 4, 5}) {
        CHECK(std::abs(state(GenKind::PlusState, d).norm() - 1.0) < kDefaultTol);
        CHECK(std::abs(state(GenKind::BellState, d, std::array{1, d - 1}).norm() - 1.0) <
              kDefaultTol);
    }
    CHECK_THROWS_AS(state(GenKind::BasisState, 3, std::array{3}), QcatError);
}

TEST_CASE("compact structures") {
    const ComplexTensor cup1 = compact(GenKind::Cup, 1);
    CHECK(cup1.size() == 1);
    CHECK(std::abs(cup1.amplitudes()[0] - Complex(1.0)) < 1e-12);

    for (int d : {2, 3, 5}) {
        CHECK(equal_within(compact(GenKind::NormalizedCup, d),
                           state(GenKind::BellState, d, std::array{0, 0})));
        const ComplexTensor closed = compose(compact(GenKind::Cap, d), compact(GenKind::Cup, d));
        CHECK(std::abs(closed.scalar_value() - Complex(d)) < kDefaultTol);
        CHECK(equal_within(dagger(compact(GenKind::Cup, d)), compact(GenKind::Cap, d)));
    }
}

TEST_CASE("copy dot basics") {
    for (int d : {2, 3}) CHECK(equal_within(copy_dot(d, 1, 1), ComplexTensor::identity(d)));

    const ComplexTensor copied =
        compose(copy_dot(2, 1, 2), state(GenKind::BasisState, 2, std::array{0}));
    std::vector<Complex> expect(4, Complex(0.0));
    expect[0] = 1.0;
    CHECK(equal_within(
        copied, ComplexTensor({{LegDirection::output, 2}, {LegDirection::output, 2}}, expect)));

    CHECK(equal_within(copy_dot(3, 2, 0), dagger(copy_dot(3, 0, 2))));
    CHECK(std::abs(copy_dot(3, 0, 0).scalar_value() - Complex(3.0)) < 1e-12);
}

TEST_CASE("plus dot matches its Fourier-conjugated construction") {
    for (int d : {2, 3}) {
        const ComplexTensor h = gate(GenKind::H, d);
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                if (m + n == 0) continue;
                const ComplexTensor via_h =
                    compose(compose(kron_power(h, n), copy_dot(d, m, n)), kron_power(h, m));
                CHECK(max_abs_diff(plus_dot(d, m, n), via_h) < kDefaultTol);
            }
    }
}

TEST_CASE("plus dot special cases") {
    for (int d : {2, 3, 5}) CHECK(equal_within(plus_dot(d, 1, 1), gate(GenKind::NEG, d)));

    // delta formula evaluation: inputs 1 and 2 force the output 0 at d=3.
    const ComplexTensor p = plus_dot(3, 2, 1);
    std::vector<Complex> in(9, Complex(0.0));
    in[1 * 3 + 2] = 1.0;
    const ComplexTensor arg({{LegDirection::output, 3}, {LegDirection::output, 3}}, std::move(in));
    const ComplexTensor out = compose(p, arg);
    CHECK(std::abs(out.amplitudes()[0] - Complex(1.0 / std::sqrt(3.0))) < kDefaultTol);
    CHECK(std::abs(out.amplitudes()[1]) < kDefaultTol);
    CHECK(std::abs(out.amplitudes()[2]) < kDefaultTol);

    CHECK(std::abs(plus_dot(3, 0, 0).scalar_value() - Complex(3.0)) < 1e-12);
}

TEST_CASE("Z/X commutation and trace identities") {
    for (int d : {2, 3, 4, 5}) {
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const ComplexTensor za = gate(GenKind::Zpow, d, std::array{a});
                const ComplexTensor xb = gate(GenKind::Xpow, d, std::array{b});
                ComplexTensor rhs = compose(xb, za);
                const Complex phase = root_of_unity(d, static_cast<long>(a) * b);
                for (Complex& c : rhs.mutable_amplitudes()) c *= phase;
                CHECK(max_abs_diff(compose(za, xb), rhs) < kDefaultTol);

                Complex trace = 0.0;
                const ComplexTensor prod = compose(za, xb);
                for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k)
                    trace += prod.entry(k, k);
                const Complex expected = (a == 0 && b == 0) ? Complex(d) : Complex(0.0);
                CHECK(std::abs(trace - expected) < kDefaultTol);
            }
        CHECK(equal_within(gate(GenKind::Zpow, d, std::array{0}), ComplexTensor::identity(d)));
        CHECK(equal_within(gate(GenKind::NADD, d),
                           compose(kron(ComplexTensor::identity(d), gate(GenKind::NEG, d)),
                                   gate(GenKind::ADD, d))));
        // ADD is not an involution beyond qubits.
        const ComplexTensor add2 = compose(gate(GenKind::ADD, d), gate(GenKind::ADD, d));
        const ComplexTensor id2 = kron(ComplexTensor::identity(d), ComplexTensor::identity(d));
        CHECK((d == 2) == equal_within(add2, id2));
    }
}

TEST_CASE("dots satisfy S1, S2 and S3") {
    Rng rng(12);
    for (int d : {2, 3}) {
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                if (m + n == 0) continue;
                for (const bool plus : {false, true}) {
                    const ComplexTensor dot =
                        plus ? plus_dot(d, m, n) : copy_dot(d, m, n);
                    // S1: permuting two output (or input) legs changes nothing.
                    if (n >= 2) CHECK(equal_within(swap_output_legs(dot, 0, 1), dot));
                    // S2: the dagger swaps arity.
                    const ComplexTensor swapped = plus ? plus_dot(d, n, m) : copy_dot(d, n, m);
                    CHECK(max_abs_diff(dagger(dot), swapped) < kDefaultTol);
                    // S3: a cup on an input leg turns it into an output leg.
                    if (m >= 1) {
                        const std::vector<ComplexTensor> nodes = {dot, compact(GenKind::Cup, d)};
                        std::vector<TensorEdge> edges = {{{0, n + m - 1}, {1, 0}}};
                        std::vector<TensorLegRef> boundary;
                        for (int k = 0; k < n; ++k) boundary.push_back({0, k});
                        boundary.push_back({1, 1});
                        for (int k = 0; k < m - 1; ++k) boundary.push_back({0, n + k});
                        const ComplexTensor bent = contract(nodes, edges, boundary);
                        const ComplexTensor target =
                            plus ? plus_dot(d, m - 1, n + 1) : copy_dot(d, m - 1, n + 1);
                        CHECK(max_abs_diff(bent, target) < kDefaultTol);
                    }
                }
            }
        // S3 for a colored copy dot with a real orthogonal color.
        const ComplexTensor color = random_real_orthogonal(d, rng);
        const ComplexTensor dot = copy_dot(d, 2, 1, &color);
        const std::vector<ComplexTensor> nodes = {dot, compact(GenKind::Cup, d)};
        const std::vector<TensorEdge> edges = {{{0, 2}, {1, 0}}};
        const std::vector<TensorLegRef> boundary = {{0, 0}, {1, 1}, {0, 1}};
        const ComplexTensor bent = contract(nodes, edges, boundary);
        CHECK(max_abs_diff(bent, copy_dot(d, 1, 2, &color)) < kDefaultTol);
    }
}

TEST_CASE("recolor") {
    const GeneratorSpec copy12 = GeneratorSpec::copy_dot(3, 1, 2);
    SUBCASE("identity color is a no-op") {
        const GeneratorSpec same = recolor(copy12, ComplexTensor::identity(3));
        CHECK(equal_within(tensor_of(same), tensor_of(copy12)));
        CHECK_FALSE(same.color.has_value());
    }
    SUBCASE("x-colored copy dot with NEG on the input is the plus dot") {
        for (int d : {2, 3}) {
            const GeneratorSpec colored =
                recolor(GeneratorSpec::copy_dot(d, 1, 2), gate(GenKind::H, d));
            const ComplexTensor combined = compose(tensor_of(colored), gate(GenKind::NEG, d));
            CHECK(max_abs_diff(combined, plus_dot(d, 1, 2)) < kDefaultTol);
        }
    }
    SUBCASE("non-unitary colors are rejected") {
        ComplexTensor bad = ComplexTensor::identity(3);
        bad.mutable_amplitudes()[0] = 2.0;
        CHECK_THROWS_AS(recolor(copy12, bad), QcatError);
    }
}

TEST_CASE("Bell states are local rotations of the normalized cup") {
    for (int d : {2, 3, 4, 5})
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const ComplexTensor lhs = state(GenKind::BellState, d, std::array{a, b});
                const ComplexTensor rhs =
                    compose(kron(gate(GenKind::Zpow, d, std::array{a}),
                                 gate(GenKind::Xpow, d, std::array{b})),
                            compact(GenKind::NormalizedCup, d));
                CHECK(max_abs_diff(lhs, rhs) < kDefaultTol);
            }
}

TEST_CASE("spec daggering and transposition stay within the vocabulary") {
    const GeneratorSpec z = GeneratorSpec::gate(GenKind::Zpow, 5, {2});
    CHECK(z.daggered().params[0] == 3);
    CHECK(z.transposed_cb().params[0] == 2);

    const GeneratorSpec x = GeneratorSpec::gate(GenKind::Xpow, 5, {2});
    CHECK(x.daggered().params[0] == 3);
    CHECK(x.transposed_cb().params[0] == 3);

    const GeneratorSpec bell = GeneratorSpec::bell_state(3, 1, 2);
    const GeneratorSpec bell_t = bell.transposed_cb();
    CHECK(bell_t.adjoint);
    CHECK(bell_t.params == std::vector<int>{2, 2});
    CHECK(max_abs_diff(tensor_of(bell_t), transpose_cb(tensor_of(bell))) < kDefaultTol);

    for (const GeneratorSpec& spec :
         {GeneratorSpec::gate(GenKind::H, 3), GeneratorSpec::gate(GenKind::ADD, 3),
          GeneratorSpec::copy_dot(3, 2, 1), GeneratorSpec::plus_dot(3, 1, 2),
          GeneratorSpec::cup(3), GeneratorSpec::basis_state(3, 1)}) {
        CHECK(max_abs_diff(tensor_of(spec.daggered()), dagger(tensor_of(spec))) < kDefaultTol);
        CHECK(max_abs_diff(tensor_of(spec.transposed_cb()), transpose_cb(tensor_of(spec))) <
              kDefaultTol);
    }
}
