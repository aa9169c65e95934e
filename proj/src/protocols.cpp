#include "qcat/protocols.hpp"

#include <cmath>
#include <sstream>

#include "qcat/random.hpp"

namespace qcat {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

GeneratorSpec bell_costate(int d, int a, int b) {
    return GeneratorSpec::bell_state(d, a, b).daggered();
}

double trace_probability(const ComplexTensor& kraus) {
    // Tr(E rho E') for the maximally mixed input = Tr(E'E) / dim.
    double sum = 0.0;
    for (const Complex& c : kraus.amplitudes()) sum += std::norm(c);
    return sum / static_cast<double>(kraus.input_size());
}

}  // namespace

ComplexTensor ghz_state(int d, int n_legs) {
    std::vector<LegType> legs(static_cast<std::size_t>(n_legs),
                              LegType{LegDirection::output, d});
    std::size_t total = 1, stride = 0;
    {
        std::size_t s = 1;
        for (int i = 0; i < n_legs; ++i) {
            stride += s;
            s *= static_cast<std::size_t>(d);
            total *= static_cast<std::size_t>(d);
        }
    }
    std::vector<Complex> amps(total, Complex(0.0));
    const double v = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) amps[static_cast<std::size_t>(k) * stride] = v;
    return ComplexTensor(std::move(legs), std::move(amps));
}

ProtocolReport run_ghz(int d, int n_wires) {
    ProtocolReport report;
    report.protocol = "ghz";
    report.dim = d;

    DiagramBuilder builder;
    std::vector<int> rails;
    for (int i = 0; i < n_wires; ++i)
        rails.push_back(builder.rail_from_state(GeneratorSpec::basis_state(d, 0)));
    builder.apply_gate(rails[0], GeneratorSpec::gate(GenKind::H, d));
    for (int i = 0; i + 1 < n_wires; ++i)
        builder.apply_gate2(rails[i], rails[i + 1], GeneratorSpec::gate(GenKind::ADD, d));
    for (int i = 0; i < n_wires; ++i) builder.terminate_output(rails[i]);
    const Diagram circuit = builder.finish();

    const std::vector<std::string> strategy = ghz_strategy();
    NormalizeResult normalized = normalize(circuit, strategy, 40, true);
    report.trace = std::move(normalized.trace);

    bool ok = !report.trace.step_limit_reached && report.trace.all_verified_ok();
    if (report.trace.step_limit_reached) report.notes.push_back("step limit reached");
    if (!report.trace.all_verified_ok()) report.notes.push_back("a rewrite step failed verification");

    const Diagram& result = normalized.diagram;
    const bool single_dot =
        result.nodes().size() == 1 &&
        result.nodes().begin()->second.spec.kind == GenKind::CopyDot &&
        result.nodes().begin()->second.spec.params == std::vector<int>{0, n_wires};
    if (!single_dot) {
        ok = false;
        std::ostringstream os;
        os << "normal form not reached: " << result.nodes().size() << " nodes remain";
        report.notes.push_back(os.str());
    } else {
        const double scalar_dev =
            std::abs(result.scalar() - Complex(1.0 / std::sqrt(static_cast<double>(d))));
        if (scalar_dev > kDefaultTol) {
            ok = false;
            report.notes.push_back("final scalar differs from 1/sqrt(d) by " + fmt(scalar_dev));
        }
    }

    const ComplexTensor value = evaluate(result);
    const ComplexTensor target = ghz_state(d, n_wires);
    report.state_error = max_abs_diff(value, target);
    if (report.state_error > kDefaultTol) ok = false;
    const double norm_dev = std::abs(value.norm() - 1.0);
    if (norm_dev > kDefaultTol) {
        ok = false;
        report.notes.push_back("state norm differs from 1 by " + fmt(norm_dev));
    }

    report.passed = ok;
    return report;
}

ProtocolReport run_superdense(int d, int p, int q) {
    ProtocolReport report;
    report.protocol = "superdense";
    report.dim = d;
    if (p < 0 || p >= d || q < 0 || q >= d) throw QcatError("superdense: encoding out of range");

    bool ok = true;
    double prob_sum = 0.0;
    KrausSet set;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            DiagramBuilder builder;
            const auto [alice, bob] = builder.rails_from_pair(GeneratorSpec::normalized_cup(d));
            // Alice encodes with Z^p X^-q on her half.
            builder.apply_gate(alice, GeneratorSpec::gate(GenKind::Xpow, d, {mod_d(-q, d)}));
            builder.apply_gate(alice, GeneratorSpec::gate(GenKind::Zpow, d, {p}));
            builder.cap_rails(alice, bob, bell_costate(d, a, b));
            const ComplexTensor amp = evaluate(builder.finish());

            ProtocolBranchRow row;
            std::ostringstream label;
            label << "(" << a << "," << b << ")";
            row.label = label.str();
            row.kraus = amp;
            row.probability = std::norm(amp.scalar_value());
            const double expected = (a == p && b == q) ? 1.0 : 0.0;
            row.deviation = std::abs(row.probability - expected);
            if (row.deviation > kDefaultTol) ok = false;
            prob_sum += row.probability;
            set.branches.push_back({row.label, row.kraus, {}});
            report.branches.push_back(std::move(row));
        }

    const CompletenessResult completeness = is_complete(set);
    report.completeness_residual = completeness.residual;
    if (!completeness.complete) ok = false;
    if (std::abs(prob_sum - 1.0) > kDefaultTol) {
        ok = false;
        report.notes.push_back("probabilities sum to " + fmt(prob_sum));
    }
    report.passed = ok;
    return report;
}

ProtocolReport run_teleport(int d, int trials, std::uint64_t seed) {
    ProtocolReport report;
    report.protocol = "teleport";
    report.dim = d;
    report.seed = seed;

    bool ok = true;
    KrausSet set;
    ComplexTensor target = ComplexTensor::identity(d);
    for (Complex& c : target.mutable_amplitudes()) c /= static_cast<double>(d);

    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            DiagramBuilder builder;
            const int input = builder.rail_from_input(d);
            const auto [measured, bob] = builder.rails_from_pair(GeneratorSpec::normalized_cup(d));
            builder.cap_rails(input, measured, bell_costate(d, a, b));
            // Bob's corrections, derived numerically: Z^a X^-b.
            builder.apply_gate(bob, GeneratorSpec::gate(GenKind::Xpow, d, {mod_d(-b, d)}));
            builder.apply_gate(bob, GeneratorSpec::gate(GenKind::Zpow, d, {a}));
            builder.terminate_output(bob);
            const ComplexTensor kraus = evaluate(builder.finish());

            ProtocolBranchRow row;
            std::ostringstream label;
            label << "(" << a << "," << b << ")";
            row.label = label.str();
            row.deviation = max_abs_diff(kraus, target);
            row.probability = trace_probability(kraus);
            row.kraus = kraus;
            if (row.deviation > kDefaultTol) {
                ok = false;
                report.notes.push_back("branch " + row.label + " deviates from I/d by " +
                                       fmt(row.deviation));
            }
            set.branches.push_back({row.label, std::move(kraus), {}});
            report.branches.push_back(std::move(row));
        }

    const CompletenessResult completeness = is_complete(set);
    report.completeness_residual = completeness.residual;
    if (!completeness.complete) ok = false;

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const DensityOperator rho{random_density({d}, rng)};
        const DensityOperator out = apply_channel(set, rho);
        report.channel_error =
            std::max(report.channel_error, max_abs_diff(out.tensor(), rho.tensor()));
    }
    if (report.channel_error > kDefaultTol) ok = false;

    report.passed = ok;
    return report;
}

ProtocolReport run_gate_teleport(int d, int trials, std::uint64_t seed) {
    ProtocolReport report;
    report.protocol = "gate-teleport";
    report.dim = d;
    report.seed = seed;

    bool ok = true;
    const ComplexTensor nadd = gate(GenKind::NADD, d);
    ComplexTensor target = nadd;
    for (Complex& c : target.mutable_amplitudes()) c /= static_cast<double>(d) * d;

    KrausSet set;
    for (int a1 = 0; a1 < d; ++a1)
        for (int b1 = 0; b1 < d; ++b1)
            for (int a2 = 0; a2 < d; ++a2)
                for (int b2 = 0; b2 < d; ++b2) {
                    DiagramBuilder builder;
                    const int in1 = builder.rail_from_input(d);
                    const int in2 = builder.rail_from_input(d);
                    const auto [m1, g1] =
                        builder.rails_from_pair(GeneratorSpec::normalized_cup(d));
                    const auto [m2, g2] =
                        builder.rails_from_pair(GeneratorSpec::normalized_cup(d));
                    // The offline gate-state |NADD>>: the gate acts on the
                    // second halves of the two cups.
                    builder.apply_gate2(g1, g2, GeneratorSpec::gate(GenKind::NADD, d));
                    builder.cap_rails(in1, m1, bell_costate(d, a1, b1));
                    builder.cap_rails(in2, m2, bell_costate(d, a2, b2));
                    // Per-branch pre-gate byproducts X^{b_i} Z^{-a_i} commute
                    // through NADD to: wire 1 X^{b1} Z^{a2-a1}, wire 2
                    // X^{-b1-b2} Z^{a2}; apply the inverses after the gate.
                    builder.apply_gate(g1, GeneratorSpec::gate(GenKind::Xpow, d, {mod_d(-b1, d)}));
                    builder.apply_gate(g1,
                                       GeneratorSpec::gate(GenKind::Zpow, d, {mod_d(a1 - a2, d)}));
                    builder.apply_gate(g2,
                                       GeneratorSpec::gate(GenKind::Xpow, d, {mod_d(b1 + b2, d)}));
                    builder.apply_gate(g2, GeneratorSpec::gate(GenKind::Zpow, d, {mod_d(-a2, d)}));
                    builder.terminate_output(g1);
                    builder.terminate_output(g2);
                    const ComplexTensor kraus = evaluate(builder.finish());

                    ProtocolBranchRow row;
                    std::ostringstream label;
                    label << "(" << a1 << "," << b1 << ")(" << a2 << "," << b2 << ")";
                    row.label = label.str();
                    row.deviation = max_abs_diff(kraus, target);
                    row.probability = trace_probability(kraus);
                    row.kraus = kraus;
                    if (row.deviation > kDefaultTol) {
                        ok = false;
                        if (report.notes.size() < 8)
                            report.notes.push_back("branch " + row.label +
                                                   " deviates from NADD/d^2 by " +
                                                   fmt(row.deviation));
                    }
                    set.branches.push_back({row.label, std::move(kraus), {}});
                    report.branches.push_back(std::move(row));
                }

    const CompletenessResult completeness = is_complete(set);
    report.completeness_residual = completeness.residual;
    if (!completeness.complete) ok = false;

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const DensityOperator rho{random_density({d, d}, rng)};
        const DensityOperator out = apply_channel(set, rho);
        const ComplexTensor expected = compose(compose(nadd, rho.tensor()), dagger(nadd));
        report.channel_error =
            std::max(report.channel_error, max_abs_diff(out.tensor(), expected));
    }
    if (report.channel_error > kDefaultTol) ok = false;

    report.passed = ok;
    return report;
}

}  // namespace qcat
