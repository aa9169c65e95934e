#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against the raw definitions, not the library
// paths under test.

#include <algorithm>
#include <vector>

#include "qcat/diagram.hpp"
#include "qcat/random.hpp"

namespace qcat::testing {

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

/// Dense random tensor with the given signature (all legs of dimension d).
inline ComplexTensor random_tensor(int d, int n_out, int n_in, Rng& rng) {
    std::vector<LegType> legs;
    for (int i = 0; i < n_out; ++i) legs.push_back({LegDirection::output, d});
    for (int i = 0; i < n_in; ++i) legs.push_back({LegDirection::input, d});
    std::size_t total = 1;
    for (int i = 0; i < n_out + n_in; ++i) total *= static_cast<std::size_t>(d);
    std::vector<Complex> amps(total);
    for (Complex& c : amps) c = random_complex_gaussian(rng);
    return ComplexTensor(std::move(legs), std::move(amps));
}

/// Independent oracle: w-th root-of-unity matrix entry access without the
/// generators module.
inline ComplexTensor oracle_dft(int d) {
    std::vector<Complex> amps(static_cast<std::size_t>(d) * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            amps[static_cast<std::size_t>(a) * d + b] =
                std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                           2.0 * 3.14159265358979323846 * a * b / d);
    return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
}

/// Random circuit-shaped diagram with the requested boundary, built from a
/// mix of gates, two-qudit gates and state/effect insertions. All wires share
/// one dimension d.
inline Diagram random_diagram(int d, int n_in, int n_out, Rng& rng) {
    DiagramBuilder b;
    std::vector<int> rails;
    for (int i = 0; i < n_in; ++i) rails.push_back(b.rail_from_input(d));
    // Rail count must end at n_out: spawn or terminate as needed.
    while (static_cast<int>(rails.size()) < n_out) {
        switch (pick(rng, 0, 2)) {
            case 0: rails.push_back(b.rail_from_state(GeneratorSpec::basis_state(d, pick(rng, 0, d - 1)))); break;
            case 1: rails.push_back(b.rail_from_state(GeneratorSpec::plus_state(d))); break;
            default: {
                const auto [x, y] = b.rails_from_pair(GeneratorSpec::normalized_cup(d));
                rails.push_back(x);
                rails.push_back(y);
                break;
            }
        }
    }
    while (static_cast<int>(rails.size()) > n_out) {
        const int victim = pick(rng, 0, static_cast<int>(rails.size()) - 1);
        GeneratorSpec effect = chance(rng, 0.5)
                                   ? GeneratorSpec::basis_state(d, pick(rng, 0, d - 1)).daggered()
                                   : GeneratorSpec::plus_state(d).daggered();
        b.terminate_effect(rails[static_cast<std::size_t>(victim)], std::move(effect));
        rails.erase(rails.begin() + victim);
    }

    const int gate_count = pick(rng, 1, 4);
    for (int g = 0; g < gate_count && !rails.empty(); ++g) {
        if (rails.size() >= 2 && chance(rng, 0.4)) {
            int i = pick(rng, 0, static_cast<int>(rails.size()) - 1);
            int j = pick(rng, 0, static_cast<int>(rails.size()) - 2);
            if (j >= i) ++j;
            const GenKind kind = chance(rng, 0.5) ? GenKind::NADD : GenKind::ADD;
            b.apply_gate2(rails[static_cast<std::size_t>(i)], rails[static_cast<std::size_t>(j)],
                          GeneratorSpec::gate(kind, d));
        } else {
            const int i = pick(rng, 0, static_cast<int>(rails.size()) - 1);
            GeneratorSpec spec = [&]() -> GeneratorSpec {
                switch (pick(rng, 0, 3)) {
                    case 0: return GeneratorSpec::gate(GenKind::H, d);
                    case 1: return GeneratorSpec::gate(GenKind::Zpow, d, {pick(rng, 1, d - 1)});
                    case 2: return GeneratorSpec::gate(GenKind::Xpow, d, {pick(rng, 1, d - 1)});
                    default: return GeneratorSpec::box(random_operator(d, rng), "g");
                }
            }();
            b.apply_gate(rails[static_cast<std::size_t>(i)], std::move(spec));
        }
    }
    for (int r : rails) b.terminate_output(r);
    return b.finish();
}

/// Random connected graph of same-kind dots (no self loops); for plus dots a
/// NEG gate sits on every internal wire. Total free legs stay small.
inline Diagram random_dot_graph(GenKind kind, int d, int max_dots, int max_legs, Rng& rng) {
    const int n_dots = pick(rng, 1, max_dots);
    // Tree edges keep the graph connected; each edge consumes one output of
    // the parent and one input of the child.
    std::vector<int> parent(static_cast<std::size_t>(n_dots), -1);
    for (int i = 1; i < n_dots; ++i) parent[static_cast<std::size_t>(i)] = pick(rng, 0, i - 1);
    std::vector<int> extra_in(static_cast<std::size_t>(n_dots), 0);
    std::vector<int> extra_out(static_cast<std::size_t>(n_dots), 0);
    int legs_budget = max_legs;
    for (int i = 0; i < n_dots; ++i) {
        if (legs_budget > 0 && chance(rng, 0.6)) {
            extra_in[static_cast<std::size_t>(i)] = pick(rng, 0, std::min(2, legs_budget));
            legs_budget -= extra_in[static_cast<std::size_t>(i)];
        }
        if (legs_budget > 0 && chance(rng, 0.6)) {
            extra_out[static_cast<std::size_t>(i)] = pick(rng, 0, std::min(2, legs_budget));
            legs_budget -= extra_out[static_cast<std::size_t>(i)];
        }
    }
    // Make sure at least one free leg exists so the diagram has a boundary.
    if (std::all_of(extra_in.begin(), extra_in.end(), [](int v) { return v == 0; }) &&
        std::all_of(extra_out.begin(), extra_out.end(), [](int v) { return v == 0; }))
        extra_out[0] = 1;

    Diagram diagram;
    std::vector<NodeId> ids;
    std::vector<int> next_in(static_cast<std::size_t>(n_dots), 0);
    std::vector<int> next_out(static_cast<std::size_t>(n_dots), 0);
    for (int i = 0; i < n_dots; ++i) {
        int children = 0;
        for (int j = i + 1; j < n_dots; ++j)
            if (parent[static_cast<std::size_t>(j)] == i) ++children;
        const int m = extra_in[static_cast<std::size_t>(i)] + (i > 0 ? 1 : 0);
        const int n = extra_out[static_cast<std::size_t>(i)] + children;
        ids.push_back(diagram.add_node(kind == GenKind::CopyDot
                                           ? GeneratorSpec::copy_dot(d, m, n)
                                           : GeneratorSpec::plus_dot(d, m, n)));
    }
    for (int i = 1; i < n_dots; ++i) {
        const int p = parent[static_cast<std::size_t>(i)];
        const Endpoint from =
            Endpoint::node_output(ids[static_cast<std::size_t>(p)],
                                  next_out[static_cast<std::size_t>(p)]++);
        const Endpoint to = Endpoint::node_input(ids[static_cast<std::size_t>(i)],
                                                 next_in[static_cast<std::size_t>(i)]++);
        if (kind == GenKind::PlusDot) {
            const NodeId neg = diagram.add_node(GeneratorSpec::gate(GenKind::NEG, d));
            diagram.add_wire(from, Endpoint::node_input(neg, 0));
            diagram.add_wire(Endpoint::node_output(neg, 0), to);
        } else {
            diagram.add_wire(from, to);
        }
    }
    for (int i = 0; i < n_dots; ++i) {
        const auto& spec = diagram.node(ids[static_cast<std::size_t>(i)]).spec;
        for (int k = next_in[static_cast<std::size_t>(i)]; k < spec.params[0]; ++k)
            diagram.add_wire(Endpoint::boundary_input(diagram.add_input(d)),
                             Endpoint::node_input(ids[static_cast<std::size_t>(i)], k));
        for (int k = next_out[static_cast<std::size_t>(i)]; k < spec.params[1]; ++k)
            diagram.add_wire(Endpoint::node_output(ids[static_cast<std::size_t>(i)], k),
                             Endpoint::boundary_output(diagram.add_output(d)));
    }
    return diagram;
}

}  // namespace qcat::testing
