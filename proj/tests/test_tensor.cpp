#include <doctest.h>

#include "qcat/generators.hpp"
#include "support.hpp"

using namespace qcat;
using qcat::testing::random_tensor;

namespace {

ComplexTensor pauli_x() {
    return ComplexTensor::from_matrix({2}, {2}, {0.0, 1.0, 1.0, 0.0});
}

ComplexTensor basis2(int a, int b) {
    std::vector<Complex> amps(4, Complex(0.0));
    amps[static_cast<std::size_t>(a) * 2 + b] = 1.0;
    return ComplexTensor({{LegDirection::output, 2}, {LegDirection::output, 2}}, std::move(amps));
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
    std::vector<Complex> amps(36, Complex(0.0));
    for (int k = 0; k < 6; ++k) amps[static_cast<std::size_t>(k) * 6 + k] = 1.0;
    const ComplexTensor id6 = ComplexTensor::from_matrix({2, 3}, {2, 3}, std::move(amps));
    CHECK(equal_within(kron(ComplexTensor::identity(2), ComplexTensor::identity(3)), id6));
}

TEST_CASE("kron(sigma_x, sigma_x) maps |00> to |11>") {
    const ComplexTensor xx = kron(pauli_x(), pauli_x());
    const ComplexTensor out = compose(xx, basis2(0, 0));
    CHECK(equal_within(out, basis2(1, 1)));
}

TEST_CASE("kron(Z_3, X_3) is traceless") {
    const ComplexTensor t = kron(gate(GenKind::Zpow, 3, std::array{1}),
                                 gate(GenKind::Xpow, 3, std::array{1}));
    Complex trace = 0.0;
    for (std::size_t k = 0; k < 9; ++k) trace += t.entry(k, k);
    CHECK(std::abs(trace) < kDefaultTol);
}

TEST_CASE("compose: H self-inverse at d=2, H^4 identity at d=3") {
    const ComplexTensor h2 = gate(GenKind::H, 2);
    CHECK(equal_within(compose(h2, h2), ComplexTensor::identity(2)));
    const ComplexTensor h3 = gate(GenKind::H, 3);
    const ComplexTensor h3sq = compose(h3, h3);
    CHECK(equal_within(compose(h3sq, h3sq), ComplexTensor::identity(3)));
}

TEST_CASE("compose: NADD_3 is self-inverse") {
    const ComplexTensor nadd = gate(GenKind::NADD, 3);
    const ComplexTensor id9 = [&] {
        std::vector<Complex> amps(81, Complex(0.0));
        for (int k = 0; k < 9; ++k) amps[static_cast<std::size_t>(k) * 9 + k] = 1.0;
        return ComplexTensor::from_matrix({3, 3}, {3, 3}, std::move(amps));
    }();
    CHECK(equal_within(compose(nadd, nadd), id9));
}

TEST_CASE("compose reports the offending leg pair") {
    const ComplexTensor a = ComplexTensor::identity(2);
    const ComplexTensor b = ComplexTensor::identity(3);
    CHECK_THROWS_WITH_AS(compose(a, b), doctest::Contains("leg 0"), DimensionError);
}

TEST_CASE("contract: single node with no edges returns the node") {
    Rng rng(41);
    const ComplexTensor t = random_tensor(3, 1, 2, rng);
    const std::vector<ComplexTensor> nodes = {t};
    const std::vector<TensorEdge> edges;
    const std::vector<TensorLegRef> boundary = {{0, 0}, {0, 1}, {0, 2}};
    CHECK(equal_within(contract(nodes, edges, boundary), t));
}

TEST_CASE("contract: snake network straightens to the identity") {
    for (int d : {2, 3, 5}) {
        const std::vector<ComplexTensor> nodes = {compact(GenKind::Cup, d),
                                                  compact(GenKind::Cap, d)};
        const std::vector<TensorEdge> edges = {{{0, 0}, {1, 0}}};
        const std::vector<TensorLegRef> boundary = {{0, 1}, {1, 1}};
        CHECK(equal_within(contract(nodes, edges, boundary), ComplexTensor::identity(d)));
    }
}

TEST_CASE("contract: closed loop of dimension d gives the scalar d") {
    for (int d : {2, 3, 7}) {
        // Independent oracle: sum_k delta_kk = d.
        const std::vector<ComplexTensor> nodes = {compact(GenKind::Cup, d),
                                                  compact(GenKind::Cap, d)};
        const std::vector<TensorEdge> edges = {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}};
        const ComplexTensor value = contract(nodes, edges, {});
        CHECK(std::abs(value.scalar_value() - Complex(d)) < kDefaultTol);
    }
}

TEST_CASE("contract rejects malformed networks") {
    const std::vector<ComplexTensor> nodes = {ComplexTensor::identity(2)};
    SUBCASE("dangling leg") {
        const std::vector<TensorLegRef> boundary = {{0, 0}};
        CHECK_THROWS_AS(contract(nodes, {}, boundary), NetworkError);
    }
    SUBCASE("leg used twice") {
        const std::vector<TensorEdge> edges = {{{0, 0}, {0, 0}}};
        CHECK_THROWS_AS(contract(nodes, edges, {}), NetworkError);
    }
    SUBCASE("edge dimension mismatch") {
        const std::vector<ComplexTensor> two = {ComplexTensor::identity(2),
                                                ComplexTensor::identity(3)};
        const std::vector<TensorEdge> edges = {{{0, 0}, {1, 1}}};
        const std::vector<TensorLegRef> boundary = {{1, 0}, {0, 1}};
        CHECK_THROWS_AS(contract(two, edges, boundary), DimensionError);
    }
}

TEST_CASE("contract result does not depend on the edge-processing order") {
    Rng rng(17);
    for (int net = 0; net < 5; ++net) {
        const int d = testing::pick(rng, 2, 3);
        // cap(f (x) g)cup-style ring with two extra operators.
        const std::vector<ComplexTensor> nodes = {
            compact(GenKind::Cup, d), compact(GenKind::Cap, d), random_tensor(d, 1, 1, rng),
            random_tensor(d, 1, 1, rng), random_tensor(d, 2, 2, rng)};
        const std::vector<TensorEdge> edges = {
            {{0, 0}, {2, 1}},  // cup -> f
            {{2, 0}, {4, 2}},  // f -> two-qudit op input 0
            {{0, 1}, {4, 3}},  // cup -> input 1
            {{4, 0}, {3, 1}},  // output 0 -> g
            {{3, 0}, {1, 0}},  // g -> cap
            {{4, 1}, {1, 1}},  // output 1 -> cap
        };
        const ComplexTensor reference = contract(nodes, edges, {});
        std::vector<std::size_t> order = {0, 1, 2, 3, 4, 5};
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            std::shuffle(order.begin(), order.end(), rng);
            const ComplexTensor shuffled = contract(nodes, edges, {}, &order);
            CHECK(max_abs_diff(reference, shuffled) < kDefaultTol);
        }
    }
}

TEST_CASE("dagger is an involution and matches explicit conjugation") {
    CHECK(equal_within(dagger(ComplexTensor::identity(4)), ComplexTensor::identity(4)));
    CHECK(equal_within(dagger(compact(GenKind::Cup, 3)), compact(GenKind::Cap, 3)));

    // Oracle: conjugate Z_3 entrywise; a diagonal stays in place.
    const ComplexTensor z = gate(GenKind::Zpow, 3, std::array{1});
    ComplexTensor z_conj = z;
    for (Complex& c : z_conj.mutable_amplitudes()) c = std::conj(c);
    CHECK(equal_within(dagger(z), z_conj));
    CHECK(equal_within(dagger(z), gate(GenKind::Zpow, 3, std::array{2})));

    Rng rng(5);
    const ComplexTensor t = random_tensor(3, 2, 1, rng);
    CHECK(equal_within(dagger(dagger(t)), t));
}

TEST_CASE("dagger is antimultiplicative") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = testing::pick(rng, 2, 4);
        const ComplexTensor f = random_tensor(d, 1, 1, rng);
        const ComplexTensor g = random_tensor(d, 1, 1, rng);
        CHECK(max_abs_diff(dagger(compose(g, f)), compose(dagger(f), dagger(g))) < kDefaultTol);
    }
}

TEST_CASE("transpose_cb fixes Z and H, inverts X") {
    for (int d : {2, 3, 5}) {
        CHECK(equal_within(transpose_cb(gate(GenKind::Zpow, d, std::array{1})),
                           gate(GenKind::Zpow, d, std::array{1})));
        CHECK(equal_within(transpose_cb(gate(GenKind::Xpow, d, std::array{1})),
                           gate(GenKind::Xpow, d, std::array{d - 1})));
        CHECK(equal_within(transpose_cb(gate(GenKind::H, d)), gate(GenKind::H, d)));
    }
    Rng rng(7);
    const ComplexTensor t = random_tensor(3, 1, 2, rng);
    CHECK(equal_within(transpose_cb(transpose_cb(t)), t));
}

TEST_CASE("bifunctoriality of kron and compose") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const int d1 = testing::pick(rng, 2, 3), d2 = testing::pick(rng, 2, 3);
        const ComplexTensor f = random_tensor(d1, 1, 1, rng), g = random_tensor(d1, 1, 1, rng);
        const ComplexTensor s = random_tensor(d2, 1, 1, rng), t = random_tensor(d2, 1, 1, rng);
        CHECK(max_abs_diff(compose(kron(g, t), kron(f, s)), kron(compose(g, f), compose(t, s))) <
              kDefaultTol);
    }
}

TEST_CASE("equal_within basics") {
    const ComplexTensor z3 = gate(GenKind::Zpow, 3, std::array{1});
    CHECK(equal_within(z3, z3, 1e-9));
    CHECK(equal_within(compose(gate(GenKind::H, 2), gate(GenKind::H, 2)),
                       ComplexTensor::identity(2), 1e-9));
    CHECK_FALSE(equal_within(z3, ComplexTensor::identity(3), 1e-9));
    CHECK_THROWS_AS(equal_within(z3, ComplexTensor::identity(2), 1e-9), SignatureError);
}

TEST_CASE("proportional_within finds exact scalar factors") {
    ComplexTensor doubled = ComplexTensor::identity(2);
    for (Complex& c : doubled.mutable_amplitudes()) c *= 2.0;
    const auto factor = proportional_within(doubled, ComplexTensor::identity(2));
    REQUIRE(factor.has_value());
    CHECK(std::abs(*factor - Complex(2.0)) < kDefaultTol);

    for (int d : {2, 3, 5}) {
        const auto lambda =
            proportional_within(compact(GenKind::Cup, d), compact(GenKind::NormalizedCup, d));
        REQUIRE(lambda.has_value());
        CHECK(std::abs(*lambda - std::sqrt(static_cast<double>(d))) < kDefaultTol);
    }

    CHECK_FALSE(proportional_within(gate(GenKind::Zpow, 3, std::array{1}),
                                    gate(GenKind::Xpow, 3, std::array{1}))
                    .has_value());
}
