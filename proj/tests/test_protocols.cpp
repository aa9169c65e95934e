#include <doctest.h>

#include "qcat/protocols.hpp"
#include "support.hpp"

using namespace qcat;

TEST_CASE("ghz reaches the copy-dot normal form and the GHZ state") {
    for (int d : {2, 3}) {
        const ProtocolReport report = run_ghz(d);
        for (const std::string& note : report.notes) MESSAGE(note);
        CHECK(report.passed);
        CHECK(report.state_error < kDefaultTol);
        CHECK(report.trace.steps.size() <= 40);
        CHECK(report.trace.all_verified_ok());
    }
}

TEST_CASE("ghz at d=2 is (|0000> + |1111>)/sqrt(2)") {
    const ComplexTensor target = ghz_state(2, 4);
    CHECK(std::abs(target.amplitudes()[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(target.amplitudes()[15] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(target.norm() - 1.0) < 1e-12);
    CHECK(run_ghz(2).passed);
}

TEST_CASE("superdense coding is deterministic for every encoding") {
    SUBCASE("d=2, (p,q)=(1,0)") {
        const ProtocolReport report = run_superdense(2, 1, 0);
        CHECK(report.passed);
        for (const ProtocolBranchRow& row : report.branches) {
            const double expect = row.label == "(1,0)" ? 1.0 : 0.0;
            CHECK(std::abs(row.probability - expect) < kDefaultTol);
        }
    }
    SUBCASE("d=3, (p,q)=(2,1)") {
        const ProtocolReport report = run_superdense(3, 2, 1);
        CHECK(report.passed);
        double p21 = 0.0;
        for (const ProtocolBranchRow& row : report.branches)
            if (row.label == "(2,1)") p21 = row.probability;
        CHECK(std::abs(p21 - 1.0) < kDefaultTol);
    }
    SUBCASE("no encoding lands on (0,0)") {
        const ProtocolReport report = run_superdense(3, 0, 0);
        CHECK(report.passed);
        CHECK(std::abs(report.branches.front().probability - 1.0) < kDefaultTol);
    }
    SUBCASE("out-of-range encodings are rejected") {
        CHECK_THROWS_AS(run_superdense(3, 3, 0), QcatError);
    }
}

TEST_CASE("teleportation branches all equal I/d and fix every input") {
    for (int d : {2, 3, 5}) {
        const ProtocolReport report = run_teleport(d, 4, 11);
        for (const std::string& note : report.notes) MESSAGE(note);
        CHECK(report.passed);
        CHECK(report.completeness_residual < kDefaultTol);
        CHECK(report.channel_error < kDefaultTol);
        REQUIRE(static_cast<int>(report.branches.size()) == d * d);
        double prob_sum = 0.0;
        for (const ProtocolBranchRow& row : report.branches) {
            CHECK(row.deviation < kDefaultTol);
            prob_sum += row.probability;
        }
        CHECK(std::abs(prob_sum - 1.0) < kDefaultTol);
    }
}

TEST_CASE("teleporting a pure basis state") {
    const ProtocolReport report = run_teleport(3, 1, 5);
    REQUIRE(report.passed);
    // Rebuild the channel from the reported branches and send |0><0|.
    KrausSet set;
    for (const ProtocolBranchRow& row : report.branches)
        set.branches.push_back({row.label, row.kraus, {}});
    std::vector<Complex> amps(9, Complex(0.0));
    amps[0] = 1.0;
    const DensityOperator rho{ComplexTensor::from_matrix({3}, {3}, std::move(amps))};
    const DensityOperator out = apply_channel(set, rho);
    CHECK(max_abs_diff(out.tensor(), rho.tensor()) < kDefaultTol);
}

TEST_CASE("gate teleportation pushes every correction through NADD") {
    for (int d : {2, 3}) {
        const ProtocolReport report = run_gate_teleport(d, 3, 13);
        for (const std::string& note : report.notes) MESSAGE(note);
        CHECK(report.passed);
        CHECK(report.completeness_residual < kDefaultTol);
        CHECK(report.channel_error < kDefaultTol);
        REQUIRE(static_cast<int>(report.branches.size()) == d * d * d * d);
        for (const ProtocolBranchRow& row : report.branches) CHECK(row.deviation < kDefaultTol);
    }
}

TEST_CASE("gate teleportation branches are proportional to CNOT at d=2") {
    const ProtocolReport report = run_gate_teleport(2, 1, 17);
    REQUIRE(report.passed);
    const ComplexTensor cnot = gate(GenKind::NADD, 2);
    for (const ProtocolBranchRow& row : report.branches) {
        const auto lambda = proportional_within(row.kraus, cnot);
        REQUIRE(lambda.has_value());
        CHECK(std::abs(*lambda - Complex(0.25)) < kDefaultTol);
    }
}
