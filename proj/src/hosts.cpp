#include <algorithm>

#include "qcat/soundness.hpp"

namespace qcat {

namespace {

int pick(Rng& rng, int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

GeneratorSpec random_gate_spec(int d, Rng& rng) {
    switch (pick(rng, 0, 4)) {
        case 0: {
            GeneratorSpec h = GeneratorSpec::gate(GenKind::H, d);
            h.adjoint = chance(rng, 0.5);
            return h;
        }
        case 1: return GeneratorSpec::gate(GenKind::NEG, d);
        case 2: return GeneratorSpec::gate(GenKind::Zpow, d, {pick(rng, 0, d - 1)});
        case 3: return GeneratorSpec::gate(GenKind::Xpow, d, {pick(rng, 0, d - 1)});
        default: return GeneratorSpec::box(random_operator(d, rng), "r");
    }
}

GeneratorSpec random_state_spec(int d, Rng& rng) {
    switch (pick(rng, 0, 2)) {
        case 0: return GeneratorSpec::basis_state(d, pick(rng, 0, d - 1));
        case 1: return GeneratorSpec::plus_state(d);
        default: return GeneratorSpec::box(random_state_tensor(d, rng), "psi");
    }
}

GeneratorSpec random_effect_spec(int d, Rng& rng) {
    GeneratorSpec s = random_state_spec(d, rng);
    return s.daggered();
}

// Closes all dangling legs with randomized context and adds occasional
// spectator nodes, producing a valid host diagram.
struct HostBuilder {
    Diagram d;
    std::vector<Endpoint> open_producers;
    std::vector<Endpoint> open_consumers;

    NodeId add(GeneratorSpec spec) { return d.add_node(std::move(spec)); }

    void open_all(NodeId n) {
        const auto& spec = d.node(n).spec;
        for (int k = 0; k < spec.n_outputs(); ++k)
            open_producers.push_back(Endpoint::node_output(n, k));
        for (int k = 0; k < spec.n_inputs(); ++k)
            open_consumers.push_back(Endpoint::node_input(n, k));
    }

    void open_output(NodeId n, int k) { open_producers.push_back(Endpoint::node_output(n, k)); }
    void open_input(NodeId n, int k) { open_consumers.push_back(Endpoint::node_input(n, k)); }

    Diagram finish(Rng& rng) {
        for (const Endpoint& p : open_producers) {
            const int dim = d.endpoint_dim(p);
            switch (pick(rng, 0, 3)) {
                case 0:
                case 1:
                    d.add_wire(p, Endpoint::boundary_output(d.add_output(dim)));
                    break;
                case 2: {
                    const NodeId g = d.add_node(random_gate_spec(dim, rng));
                    d.add_wire(p, Endpoint::node_input(g, 0));
                    d.add_wire(Endpoint::node_output(g, 0),
                               Endpoint::boundary_output(d.add_output(dim)));
                    break;
                }
                default: {
                    const NodeId e = d.add_node(random_effect_spec(dim, rng));
                    d.add_wire(p, Endpoint::node_input(e, 0));
                    break;
                }
            }
        }
        for (const Endpoint& c : open_consumers) {
            const int dim = d.endpoint_dim(c);
            switch (pick(rng, 0, 3)) {
                case 0:
                case 1:
                    d.add_wire(Endpoint::boundary_input(d.add_input(dim)), c);
                    break;
                case 2: {
                    const NodeId g = d.add_node(random_gate_spec(dim, rng));
                    d.add_wire(Endpoint::boundary_input(d.add_input(dim)),
                               Endpoint::node_input(g, 0));
                    d.add_wire(Endpoint::node_output(g, 0), c);
                    break;
                }
                default: {
                    const NodeId s = d.add_node(random_state_spec(dim, rng));
                    d.add_wire(Endpoint::node_output(s, 0), c);
                    break;
                }
            }
        }
        if (chance(rng, 0.25)) {
            const int dim = pick(rng, 2, 3);
            const NodeId g = d.add_node(random_gate_spec(dim, rng));
            d.add_wire(Endpoint::boundary_input(d.add_input(dim)), Endpoint::node_input(g, 0));
            d.add_wire(Endpoint::node_output(g, 0), Endpoint::boundary_output(d.add_output(dim)));
        }
        return std::move(d);
    }
};

std::optional<ComplexTensor> maybe_color(int d, Rng& rng, bool real_only) {
    if (!chance(rng, 0.3)) return std::nullopt;
    if (real_only || chance(rng, 0.5)) return random_real_orthogonal(d, rng);
    return random_unitary(d, rng);
}

void build_spider(HostBuilder& h, int d, Rng& rng, bool plus) {
    const int k = pick(rng, 1, 2);
    const int m1 = pick(rng, 0, 2), extra_n1 = pick(rng, 0, 1);
    const int n2 = pick(rng, 0, 2), extra_m2 = pick(rng, 0, 1);
    const int n1 = k + extra_n1, m2 = k + extra_m2;
    std::optional<ComplexTensor> color = maybe_color(d, rng, false);
    GeneratorSpec sa = plus ? GeneratorSpec::plus_dot(d, m1, n1, color)
                            : GeneratorSpec::copy_dot(d, m1, n1, color);
    GeneratorSpec sb = plus ? GeneratorSpec::plus_dot(d, m2, n2, color)
                            : GeneratorSpec::copy_dot(d, m2, n2, color);
    const NodeId a = h.add(std::move(sa));
    const NodeId b = h.add(std::move(sb));
    for (int i = 0; i < k; ++i) {
        if (!plus) {
            h.d.add_wire(Endpoint::node_output(a, i), Endpoint::node_input(b, i));
        } else {
            GeneratorSpec glue = GeneratorSpec::gate(GenKind::NEG, d);
            if (color.has_value()) {
                const ComplexTensor g =
                    compose(compose(*color, gate(GenKind::NEG, d)), dagger(*color));
                glue = GeneratorSpec::box(g, "glue");
            }
            const NodeId gn = h.add(std::move(glue));
            h.d.add_wire(Endpoint::node_output(a, i), Endpoint::node_input(gn, 0));
            h.d.add_wire(Endpoint::node_output(gn, 0), Endpoint::node_input(b, i));
        }
    }
    for (int i = k; i < n1; ++i) h.open_output(a, i);
    for (int i = k; i < m2; ++i) h.open_input(b, i);
    for (int i = 0; i < m1; ++i) h.open_input(a, i);
    for (int i = 0; i < n2; ++i) h.open_output(b, i);
}

void build_prune(HostBuilder& h, int d, Rng& rng, bool plus) {
    const bool effect_side = chance(rng, 0.5);
    GeneratorSpec prune = plus ? GeneratorSpec::basis_state(d, 0) : GeneratorSpec::plus_state(d);
    if (!effect_side) {
        const int m = pick(rng, 1, 2), n = pick(rng, 0, 2);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n)
                                      : GeneratorSpec::copy_dot(d, m, n));
        const NodeId s = h.add(std::move(prune));
        h.d.add_wire(Endpoint::node_output(s, 0), Endpoint::node_input(dot, 0));
        for (int i = 1; i < m; ++i) h.open_input(dot, i);
        for (int i = 0; i < n; ++i) h.open_output(dot, i);
    } else {
        const int m = pick(rng, 0, 2), n = pick(rng, 1, 2);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n)
                                      : GeneratorSpec::copy_dot(d, m, n));
        const NodeId e = h.add(prune.daggered());
        h.d.add_wire(Endpoint::node_output(dot, 0), Endpoint::node_input(e, 0));
        for (int i = 0; i < m; ++i) h.open_input(dot, i);
        for (int i = 1; i < n; ++i) h.open_output(dot, i);
    }
}

void build_single_wire_chain(HostBuilder& h, int d, std::span<const GeneratorSpec> specs) {
    NodeId prev = -1;
    for (const GeneratorSpec& s : specs) {
        const NodeId n = h.add(s);
        if (prev >= 0) h.d.add_wire(Endpoint::node_output(prev, 0), Endpoint::node_input(n, 0));
        else h.open_input(n, 0);
        prev = n;
    }
    h.open_output(prev, 0);
}

}  // namespace

Diagram random_host(std::string_view rule, int dim, Rng& rng) {
    HostBuilder h;
    const int d = dim;

    if (rule == "spider-copy") {
        build_spider(h, d, rng, false);
    } else if (rule == "spider-plus") {
        build_spider(h, d, rng, true);
    } else if (rule == "prune-copy") {
        build_prune(h, d, rng, false);
    } else if (rule == "prune-plus") {
        build_prune(h, d, rng, true);
    } else if (rule == "snake") {
        const NodeId cup = h.add(GeneratorSpec::cup(d));
        const NodeId cap = h.add(GeneratorSpec::cap(d));
        const int cup_leg = pick(rng, 0, 1), cap_leg = pick(rng, 0, 1);
        h.d.add_wire(Endpoint::node_output(cup, cup_leg), Endpoint::node_input(cap, cap_leg));
        h.open_output(cup, 1 - cup_leg);
        h.open_input(cap, 1 - cap_leg);
    } else if (rule == "circle-elim") {
        const NodeId cup = h.add(GeneratorSpec::cup(d));
        const NodeId cap = h.add(GeneratorSpec::cap(d));
        h.d.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(cap, pick(rng, 0, 1) ? 1 : 0));
        const int used = h.d.wire_at(Endpoint::node_input(cap, 0)).has_value() ? 0 : 1;
        h.d.add_wire(Endpoint::node_output(cup, 1), Endpoint::node_input(cap, 1 - used));
        const NodeId g = h.add(random_gate_spec(d, rng));
        h.open_all(g);
    } else if (rule == "slide") {
        const bool cap_side = chance(rng, 0.5);
        GeneratorSpec f = random_gate_spec(d, rng);
        if (!cap_side) {
            const NodeId cup = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cup(d)
                                                      : GeneratorSpec::cup(d));
            const NodeId fn = h.add(std::move(f));
            h.d.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(fn, 0));
            h.open_output(fn, 0);
            h.open_output(cup, 1);
        } else {
            const NodeId cap = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cap(d)
                                                      : GeneratorSpec::cap(d));
            const NodeId fn = h.add(std::move(f));
            h.d.add_wire(Endpoint::node_output(fn, 0), Endpoint::node_input(cap, 0));
            h.open_input(fn, 0);
            h.open_input(cap, 1);
        }
    } else if (rule == "cup-symmetry") {
        const bool cap_side = chance(rng, 0.5);
        const bool crossed = chance(rng, 0.5);
        const NodeId s = h.add(GeneratorSpec::swap(d, d));
        if (!cap_side) {
            const NodeId cup = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cup(d)
                                                      : GeneratorSpec::cup(d));
            h.d.add_wire(Endpoint::node_output(cup, 0), Endpoint::node_input(s, crossed ? 1 : 0));
            h.d.add_wire(Endpoint::node_output(cup, 1), Endpoint::node_input(s, crossed ? 0 : 1));
            h.open_output(s, 0);
            h.open_output(s, 1);
        } else {
            const NodeId cap = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cap(d)
                                                      : GeneratorSpec::cap(d));
            h.d.add_wire(Endpoint::node_output(s, 0), Endpoint::node_input(cap, crossed ? 1 : 0));
            h.d.add_wire(Endpoint::node_output(s, 1), Endpoint::node_input(cap, crossed ? 0 : 1));
            h.open_input(s, 0);
            h.open_input(s, 1);
        }
    } else if (rule == "conjugate-state") {
        const bool cap_side = chance(rng, 0.5);
        if (!cap_side) {
            const NodeId cup = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cup(d)
                                                      : GeneratorSpec::cup(d));
            const NodeId e = h.add(random_effect_spec(d, rng));
            const int leg = pick(rng, 0, 1);
            h.d.add_wire(Endpoint::node_output(cup, leg), Endpoint::node_input(e, 0));
            h.open_output(cup, 1 - leg);
        } else {
            const NodeId cap = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cap(d)
                                                      : GeneratorSpec::cap(d));
            const NodeId s = h.add(random_state_spec(d, rng));
            const int leg = pick(rng, 0, 1);
            h.d.add_wire(Endpoint::node_output(s, 0), Endpoint::node_input(cap, leg));
            h.open_input(cap, 1 - leg);
        }
    } else if (rule == "dot-bend") {
        const bool cap_side = chance(rng, 0.5);
        const bool plus = chance(rng, 0.5);
        std::optional<ComplexTensor> color = maybe_color(d, rng, true);
        if (!cap_side) {
            const int m = pick(rng, 1, 2), n = pick(rng, 0, 1);
            const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n, color)
                                          : GeneratorSpec::copy_dot(d, m, n, color));
            const NodeId cup = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cup(d)
                                                      : GeneratorSpec::cup(d));
            const int leg = pick(rng, 0, m - 1);
            h.d.add_wire(Endpoint::node_output(cup, pick(rng, 0, 1) ? 1 : 0),
                         Endpoint::node_input(dot, leg));
            const int cup_used = h.d.wire_at(Endpoint::node_output(cup, 0)).has_value() ? 0 : 1;
            h.open_output(cup, 1 - cup_used);
            for (int i = 0; i < m; ++i)
                if (i != leg) h.open_input(dot, i);
            for (int i = 0; i < n; ++i) h.open_output(dot, i);
        } else {
            const int m = pick(rng, 0, 1), n = pick(rng, 1, 2);
            const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n, color)
                                          : GeneratorSpec::copy_dot(d, m, n, color));
            const NodeId cap = h.add(chance(rng, 0.3) ? GeneratorSpec::normalized_cap(d)
                                                      : GeneratorSpec::cap(d));
            const int leg = pick(rng, 0, n - 1);
            h.d.add_wire(Endpoint::node_output(dot, leg),
                         Endpoint::node_input(cap, pick(rng, 0, 1) ? 1 : 0));
            const int cap_used = h.d.wire_at(Endpoint::node_input(cap, 0)).has_value() ? 0 : 1;
            h.open_input(cap, 1 - cap_used);
            for (int i = 0; i < n; ++i)
                if (i != leg) h.open_output(dot, i);
            for (int i = 0; i < m; ++i) h.open_input(dot, i);
        }
    } else if (rule == "dot-dagger" || rule == "recolor") {
        const bool plus = chance(rng, 0.5);
        const int m = pick(rng, 0, 2), n = pick(rng, std::max(0, 1 - m), 2);
        std::optional<ComplexTensor> color = rule == "recolor"
                                                 ? std::optional<ComplexTensor>(random_unitary(d, rng))
                                                 : maybe_color(d, rng, false);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n, color)
                                      : GeneratorSpec::copy_dot(d, m, n, color));
        h.open_all(dot);
    } else if (rule == "dot-permute") {
        const bool plus = chance(rng, 0.5);
        const int m = pick(rng, 2, 3), n = pick(rng, 0, 2);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n)
                                      : GeneratorSpec::copy_dot(d, m, n));
        // Wire the inputs in reverse so the attachment order is unsorted.
        for (int i = m - 1; i >= 0; --i)
            h.d.add_wire(Endpoint::boundary_input(h.d.add_input(d)), Endpoint::node_input(dot, i));
        for (int i = 0; i < n; ++i) h.open_output(dot, i);
    } else if (rule == "commute-z-copy" || rule == "commute-x-plus") {
        const bool plus = rule == "commute-x-plus";
        const int m = pick(rng, 1, 2), n = pick(rng, 1, 2);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n)
                                      : GeneratorSpec::copy_dot(d, m, n));
        const int leg = pick(rng, 0, m - 1);
        const NodeId g = h.add(GeneratorSpec::gate(plus ? GenKind::Xpow : GenKind::Zpow, d,
                                                   {pick(rng, 0, d - 1)}));
        h.d.add_wire(Endpoint::node_output(g, 0), Endpoint::node_input(dot, leg));
        h.open_input(g, 0);
        for (int i = 0; i < m; ++i)
            if (i != leg) h.open_input(dot, i);
        for (int i = 0; i < n; ++i) h.open_output(dot, i);
    } else if (rule == "commute-x-copy" || rule == "commute-z-plus") {
        const bool plus = rule == "commute-z-plus";
        const int m = pick(rng, 1, 2), n = pick(rng, 1, 2);
        const NodeId dot = h.add(plus ? GeneratorSpec::plus_dot(d, m, n)
                                      : GeneratorSpec::copy_dot(d, m, n));
        const int exponent = pick(rng, 0, d - 1);
        for (int i = 0; i < m; ++i) {
            const NodeId g = h.add(GeneratorSpec::gate(plus ? GenKind::Zpow : GenKind::Xpow, d,
                                                       {exponent}));
            h.d.add_wire(Endpoint::node_output(g, 0), Endpoint::node_input(dot, i));
            h.open_input(g, 0);
        }
        for (int i = 0; i < n; ++i) h.open_output(dot, i);
    } else if (rule == "bialgebra") {
        const NodeId a = h.add(GeneratorSpec::gate(GenKind::NADD, d));
        const NodeId s = h.add(GeneratorSpec::swap(d, d));
        const NodeId b = h.add(GeneratorSpec::gate(GenKind::NADD, d));
        h.d.add_wire(Endpoint::node_output(a, 0), Endpoint::node_input(s, 0));
        h.d.add_wire(Endpoint::node_output(a, 1), Endpoint::node_input(s, 1));
        h.d.add_wire(Endpoint::node_output(s, 0), Endpoint::node_input(b, 0));
        h.d.add_wire(Endpoint::node_output(s, 1), Endpoint::node_input(b, 1));
        h.open_input(a, 0);
        h.open_input(a, 1);
        h.open_output(b, 0);
        h.open_output(b, 1);
    } else if (rule == "dot-bialgebra") {
        const NodeId c1 = h.add(GeneratorSpec::copy_dot(d, 1, 2));
        const NodeId c2 = h.add(GeneratorSpec::copy_dot(d, 1, 2));
        const NodeId p1 = h.add(GeneratorSpec::plus_dot(d, 2, 1));
        const NodeId p2 = h.add(GeneratorSpec::plus_dot(d, 2, 1));
        h.d.add_wire(Endpoint::node_output(c1, 0), Endpoint::node_input(p1, 0));
        h.d.add_wire(Endpoint::node_output(c1, 1), Endpoint::node_input(p2, 0));
        h.d.add_wire(Endpoint::node_output(c2, 0), Endpoint::node_input(p1, 1));
        h.d.add_wire(Endpoint::node_output(c2, 1), Endpoint::node_input(p2, 1));
        h.open_input(c1, 0);
        h.open_input(c2, 0);
        h.open_output(p1, 0);
        h.open_output(p2, 0);
    } else if (rule == "hopf") {
        const NodeId c = h.add(GeneratorSpec::copy_dot(d, 1, 2));
        const NodeId g = h.add(GeneratorSpec::gate(GenKind::NEG, d));
        const NodeId p = h.add(GeneratorSpec::plus_dot(d, 2, 1));
        const int neg_leg = pick(rng, 0, 1);
        h.d.add_wire(Endpoint::node_output(c, neg_leg), Endpoint::node_input(g, 0));
        h.d.add_wire(Endpoint::node_output(g, 0), Endpoint::node_input(p, pick(rng, 0, 1)));
        const int p_used = h.d.wire_at(Endpoint::node_input(p, 0)).has_value() ? 0 : 1;
        h.d.add_wire(Endpoint::node_output(c, 1 - neg_leg), Endpoint::node_input(p, 1 - p_used));
        h.open_input(c, 0);
        h.open_output(p, 0);
    } else if (rule == "nadd-split") {
        const NodeId n = h.add(GeneratorSpec::gate(GenKind::NADD, d));
        h.open_all(n);
    } else if (rule == "nadd-fuse") {
        const NodeId c = h.add(GeneratorSpec::copy_dot(d, 1, 2));
        const NodeId p = h.add(GeneratorSpec::plus_dot(d, 2, 1));
        const int c_leg = pick(rng, 0, 1), p_leg = pick(rng, 0, 1);
        h.d.add_wire(Endpoint::node_output(c, c_leg), Endpoint::node_input(p, p_leg));
        h.open_input(c, 0);
        h.open_output(c, 1 - c_leg);
        h.open_input(p, 1 - p_leg);
        h.open_output(p, 0);
    } else if (rule == "add-split") {
        GeneratorSpec add = GeneratorSpec::gate(GenKind::ADD, d);
        add.adjoint = chance(rng, 0.3);
        const NodeId n = h.add(std::move(add));
        h.open_all(n);
    } else if (rule == "neg-as-h2") {
        build_single_wire_chain(h, d, std::array{GeneratorSpec::gate(GenKind::NEG, d)});
    } else if (rule == "h2-to-neg" || rule == "h4-elim") {
        GeneratorSpec hh = GeneratorSpec::gate(GenKind::H, d);
        hh.adjoint = chance(rng, 0.5);
        const int count = rule == "h4-elim" ? 4 : 2;
        std::vector<GeneratorSpec> chain(static_cast<std::size_t>(count), hh);
        build_single_wire_chain(h, d, chain);
    } else if (rule == "neg2-elim") {
        std::vector<GeneratorSpec> chain(2, GeneratorSpec::gate(GenKind::NEG, d));
        build_single_wire_chain(h, d, chain);
    } else if (rule == "swap-elim") {
        const int d2 = chance(rng, 0.5) ? d : pick(rng, 2, 3);
        const NodeId a = h.add(GeneratorSpec::swap(d, d2));
        const NodeId b = h.add(GeneratorSpec::swap(d2, d));
        h.d.add_wire(Endpoint::node_output(a, 0), Endpoint::node_input(b, 0));
        h.d.add_wire(Endpoint::node_output(a, 1), Endpoint::node_input(b, 1));
        h.open_input(a, 0);
        h.open_input(a, 1);
        h.open_output(b, 0);
        h.open_output(b, 1);
    } else if (rule == "plus11-to-neg") {
        build_single_wire_chain(h, d, std::array{GeneratorSpec::plus_dot(d, 1, 1)});
    } else if (rule == "copy11-elim") {
        build_single_wire_chain(h, d, std::array{GeneratorSpec::copy_dot(d, 1, 1)});
    } else if (rule == "h-zero-to-plus") {
        GeneratorSpec hh = GeneratorSpec::gate(GenKind::H, d);
        hh.adjoint = chance(rng, 0.5);
        if (chance(rng, 0.5)) {
            const NodeId s = h.add(GeneratorSpec::basis_state(d, 0));
            const NodeId g = h.add(std::move(hh));
            h.d.add_wire(Endpoint::node_output(s, 0), Endpoint::node_input(g, 0));
            h.open_output(g, 0);
        } else {
            const NodeId g = h.add(std::move(hh));
            GeneratorSpec e = GeneratorSpec::basis_state(d, 0).daggered();
            const NodeId en = h.add(std::move(e));
            h.d.add_wire(Endpoint::node_output(g, 0), Endpoint::node_input(en, 0));
            h.open_input(g, 0);
        }
    } else {
        throw UnknownRule("random_host: no generator for rule " + std::string(rule));
    }

    return h.finish(rng);
}

SoundnessReport verify_builtin_rules(std::span<const int> dims, int trials, std::uint64_t seed,
                                     const std::string& corrupt_rule) {
    SoundnessReport report;
    report.seed = seed;
    int rule_index = 0;
    for (const RewriteRule* rule : builtin_rules()) {
        for (int dim : dims) {
            RuleCheckRow row;
            row.rule = std::string(rule->name());
            row.dim = dim;
            row.trials = trials;
            for (int trial = 0; trial < trials; ++trial) {
                Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(rule_index) * 7919ULL +
                        static_cast<std::uint64_t>(dim) * 101ULL +
                        static_cast<std::uint64_t>(trial));
                const auto fail = [&](std::string reason, const Diagram& host) {
                    ++row.failed;
                    report.failures.push_back(
                        {row.rule, dim, trial, std::move(reason), host});
                };
                Diagram host = random_host(rule->name(), dim, rng);
                if (!validate(host).empty()) {
                    fail("host generator produced an invalid diagram", host);
                    continue;
                }
                const std::vector<Match> ms = rule->find(host);
                if (ms.empty()) {
                    fail("host contains no match", host);
                    continue;
                }
                Diagram after = apply(host, ms.front());
                if (rule->name() == corrupt_rule) after.multiply_scalar(1.01);
                try {
                    if (verify_step(host, after, 1.0))
                        ++row.passed;
                    else
                        fail("verify_step reports evaluation mismatch", host);
                } catch (const NetworkTooLarge&) {
                    ++row.unverified;
                }
            }
            report.rows.push_back(std::move(row));
        }
        ++rule_index;
    }
    return report;
}

}  // namespace qcat
