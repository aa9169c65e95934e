#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "qcat/rewrite.hpp"

namespace qcat {

namespace {

bool is_copy(const GeneratorSpec& s) { return s.kind == GenKind::CopyDot; }
bool is_plus(const GeneratorSpec& s) { return s.kind == GenKind::PlusDot; }
bool is_dot(const GeneratorSpec& s) { return s.is_dot(); }
int dot_m(const GeneratorSpec& s) { return s.params.at(0); }
int dot_n(const GeneratorSpec& s) { return s.params.at(1); }

bool same_color(const GeneratorSpec& a, const GeneratorSpec& b) {
    if (a.color.has_value() != b.color.has_value()) return false;
    if (!a.color.has_value()) return true;
    if (a.color->legs() != b.color->legs()) return false;
    return equal_within(*a.color, *b.color, kDefaultTol);
}

bool color_is_real(const GeneratorSpec& s) {
    if (!s.color.has_value()) return true;
    for (const Complex& c : s.color->amplitudes())
        if (std::abs(c.imag()) > kDefaultTol) return false;
    return true;
}

WireId wire_at_or_throw(const Diagram& d, const Endpoint& e) {
    const auto w = d.wire_at(e);
    if (!w.has_value()) throw QcatError("no wire at " + e.display());
    return *w;
}

bool endpoint_on(const Endpoint& e, NodeId node) { return e.on_node() && e.node == node; }

// Cuts a 1->1 node out of its chain: the producer feeding it takes over the
// consumer its output fed. The output wire disappears; the input wire stays.
void bridge_out(Diagram& d, NodeId node) {
    const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(node, 0));
    const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(node, 0));
    if (w_in == w_out) throw QcatError("bridge_out: node is a closed loop");
    const Endpoint consumer = d.wire(w_out).to;
    d.remove_wire(w_out);
    d.rewire_to(w_in, consumer);
    d.remove_node(node);
}

// Replaces a 1->1 node by another 1->1 spec, keeping both wires.
NodeId swap_single_wire_node(Diagram& d, NodeId node, GeneratorSpec spec) {
    const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(node, 0));
    const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(node, 0));
    const NodeId fresh = d.add_node(std::move(spec));
    d.rewire_to(w_in, Endpoint::node_input(fresh, 0));
    d.rewire_from(w_out, Endpoint::node_output(fresh, 0));
    d.remove_node(node);
    return fresh;
}

// Inserts a 1->1 node into an existing wire, after its producer.
NodeId insert_on_wire(Diagram& d, WireId w, GeneratorSpec spec) {
    const NodeId fresh = d.add_node(std::move(spec));
    const Endpoint consumer = d.wire(w).to;
    d.rewire_to(w, Endpoint::node_input(fresh, 0));
    d.add_wire(Endpoint::node_output(fresh, 0), consumer);
    return fresh;
}

std::vector<Match> sorted(std::vector<Match> ms) {
    std::sort(ms.begin(), ms.end(), [](const Match& a, const Match& b) {
        return std::tie(a.nodes, a.wires, a.data) < std::tie(b.nodes, b.wires, b.data);
    });
    return ms;
}

Match make_match(std::string rule, std::vector<NodeId> nodes, std::vector<WireId> wires, int dim,
                 std::vector<int> data = {}) {
    Match m;
    m.rule = std::move(rule);
    m.nodes = std::move(nodes);
    m.wires = std::move(wires);
    m.dim = dim;
    m.data = std::move(data);
    return m;
}

// ---------------------------------------------------------------------------
// Spider fusion
// ---------------------------------------------------------------------------

// Rewires the free legs of two dots onto one fused dot and removes the pair.
void fuse_dot_pair(Diagram& d, NodeId a, NodeId b, const std::set<WireId>& internal,
                   GenKind kind) {
    const GeneratorSpec& sa = d.node(a).spec;
    const GeneratorSpec& sb = d.node(b).spec;
    const int dim = sa.dim;

    // Free legs keep their relative order: outputs of a, then b; inputs likewise.
    std::vector<WireId> outs, ins;
    for (NodeId node : {a, b}) {
        const GeneratorSpec& s = d.node(node).spec;
        for (int k = 0; k < dot_n(s); ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_output(node, k));
            if (internal.count(w) == 0) outs.push_back(w);
        }
    }
    for (NodeId node : {a, b}) {
        const GeneratorSpec& s = d.node(node).spec;
        for (int k = 0; k < dot_m(s); ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_input(node, k));
            if (internal.count(w) == 0) ins.push_back(w);
        }
    }
    (void)sb;

    GeneratorSpec fused = kind == GenKind::CopyDot
                              ? GeneratorSpec::copy_dot(dim, static_cast<int>(ins.size()),
                                                        static_cast<int>(outs.size()), sa.color)
                              : GeneratorSpec::plus_dot(dim, static_cast<int>(ins.size()),
                                                        static_cast<int>(outs.size()), sa.color);
    const NodeId fresh = d.add_node(std::move(fused));
    for (std::size_t k = 0; k < outs.size(); ++k)
        d.rewire_from(outs[k], Endpoint::node_output(fresh, static_cast<int>(k)));
    for (std::size_t k = 0; k < ins.size(); ++k)
        d.rewire_to(ins[k], Endpoint::node_input(fresh, static_cast<int>(k)));
    for (WireId w : internal) d.remove_wire(w);
    d.remove_node(a);
    d.remove_node(b);
}

class SpiderCopyRule final : public RewriteRule {
public:
    std::string_view name() const override { return "spider-copy"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        std::set<std::pair<NodeId, NodeId>> seen;
        for (const auto& [wid, w] : d.wires()) {
            if (!w.from.on_node() || !w.to.on_node()) continue;
            NodeId a = w.from.node, b = w.to.node;
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            const auto& sa = d.node(a).spec;
            const auto& sb = d.node(b).spec;
            if (!is_copy(sa) || !is_copy(sb)) continue;
            if (sa.dim != sb.dim || !same_color(sa, sb)) continue;
            if (!seen.insert({a, b}).second) continue;
            std::vector<WireId> internal;
            for (const auto& [xid, x] : d.wires())
                if ((endpoint_on(x.from, a) && endpoint_on(x.to, b)) ||
                    (endpoint_on(x.from, b) && endpoint_on(x.to, a)))
                    internal.push_back(xid);
            ms.push_back(make_match(std::string(name()), {a, b}, internal, sa.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        fuse_dot_pair(d, m.nodes[0], m.nodes[1], {m.wires.begin(), m.wires.end()},
                      GenKind::CopyDot);
        return ScalarFactor::one();
    }
};

class SpiderPlusRule final : public RewriteRule {
public:
    std::string_view name() const override { return "spider-plus"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        std::set<std::pair<NodeId, NodeId>> seen;
        for (const auto& [gid, g] : d.nodes()) {
            if (!g.spec.is_single_wire()) continue;
            const WireId w_in = [&]() -> WireId {
                const auto w = d.wire_at(Endpoint::node_input(gid, 0));
                return w.has_value() ? *w : -1;
            }();
            const WireId w_out = [&]() -> WireId {
                const auto w = d.wire_at(Endpoint::node_output(gid, 0));
                return w.has_value() ? *w : -1;
            }();
            if (w_in < 0 || w_out < 0) continue;
            const Endpoint prod = d.wire(w_in).from;
            const Endpoint cons = d.wire(w_out).to;
            if (!prod.on_node() || !cons.on_node()) continue;
            NodeId a = prod.node, b = cons.node;
            if (a == b || a == gid || b == gid) continue;
            if (a > b) std::swap(a, b);
            const auto& sa = d.node(a).spec;
            const auto& sb = d.node(b).spec;
            if (!is_plus(sa) || !is_plus(sb)) continue;
            if (sa.dim != sb.dim || !same_color(sa, sb)) continue;
            if (!seen.insert({a, b}).second) continue;

            // No direct wires allowed between the pair.
            bool direct = false;
            for (const auto& [xid, x] : d.wires())
                if ((endpoint_on(x.from, a) && endpoint_on(x.to, b)) ||
                    (endpoint_on(x.from, b) && endpoint_on(x.to, a)))
                    direct = true;
            if (direct) continue;

            // Collect every glue path between a and b.
            const ComplexTensor glue_target = [&] {
                const ComplexTensor neg = gate(GenKind::NEG, sa.dim);
                if (!sa.color.has_value()) return neg;
                return compose(compose(*sa.color, neg), dagger(*sa.color));
            }();
            std::vector<NodeId> glues;
            std::vector<WireId> internal;
            for (const auto& [hid, h] : d.nodes()) {
                if (!h.spec.is_single_wire() || hid == a || hid == b) continue;
                const auto hw_in = d.wire_at(Endpoint::node_input(hid, 0));
                const auto hw_out = d.wire_at(Endpoint::node_output(hid, 0));
                if (!hw_in.has_value() || !hw_out.has_value()) continue;
                const Endpoint p = d.wire(*hw_in).from;
                const Endpoint c = d.wire(*hw_out).to;
                const bool ab = endpoint_on(p, a) && endpoint_on(c, b);
                const bool ba = endpoint_on(p, b) && endpoint_on(c, a);
                if (!ab && !ba) continue;
                const ComplexTensor ht = tensor_of(h.spec);
                if (ht.legs() != glue_target.legs() || !equal_within(ht, glue_target, kDefaultTol))
                    continue;
                glues.push_back(hid);
                internal.push_back(*hw_in);
                internal.push_back(*hw_out);
            }
            if (glues.empty()) continue;
            std::vector<NodeId> nodes = {a, b};
            nodes.insert(nodes.end(), glues.begin(), glues.end());
            ms.push_back(make_match(std::string(name()), std::move(nodes), std::move(internal),
                                    sa.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        for (std::size_t i = 2; i < m.nodes.size(); ++i) d.remove_node(m.nodes[i]);
        fuse_dot_pair(d, m.nodes[0], m.nodes[1], {m.wires.begin(), m.wires.end()},
                      GenKind::PlusDot);
        return ScalarFactor::one();
    }
};

// ---------------------------------------------------------------------------
// Pruning
// ---------------------------------------------------------------------------

// Rebuilds a dot without one leg; remaining wires keep their relative order.
void drop_dot_leg(Diagram& d, NodeId dot, bool output_leg, int leg) {
    const GeneratorSpec& s = d.node(dot).spec;
    const int m = dot_m(s), n = dot_n(s);
    std::vector<WireId> ins, outs;
    for (int k = 0; k < n; ++k)
        if (!(output_leg && k == leg))
            outs.push_back(wire_at_or_throw(d, Endpoint::node_output(dot, k)));
    for (int k = 0; k < m; ++k)
        if (!(!output_leg && k == leg))
            ins.push_back(wire_at_or_throw(d, Endpoint::node_input(dot, k)));
    GeneratorSpec fresh_spec =
        is_copy(s) ? GeneratorSpec::copy_dot(s.dim, m - (output_leg ? 0 : 1),
                                             n - (output_leg ? 1 : 0), s.color)
                   : GeneratorSpec::plus_dot(s.dim, m - (output_leg ? 0 : 1),
                                             n - (output_leg ? 1 : 0), s.color);
    const NodeId fresh = d.add_node(std::move(fresh_spec));
    for (std::size_t k = 0; k < outs.size(); ++k)
        d.rewire_from(outs[k], Endpoint::node_output(fresh, static_cast<int>(k)));
    for (std::size_t k = 0; k < ins.size(); ++k)
        d.rewire_to(ins[k], Endpoint::node_input(fresh, static_cast<int>(k)));
    d.remove_node(dot);
}

// Shared matcher for the two pruning rules. `state_ok` recognizes the pruning
// state; the adjoint form prunes output legs.
class PruneRule : public RewriteRule {
public:
    PruneRule(std::string rule_name, GenKind dot_kind) : name_(std::move(rule_name)), dot_(dot_kind) {}

    std::string_view name() const override { return name_; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, node] : d.nodes()) {
            const auto& s = node.spec;
            if (s.kind != dot_ || s.color.has_value()) continue;
            for (int k = 0; k < dot_m(s); ++k) {
                const WireId w = wire_at_or_throw(d, Endpoint::node_input(nid, k));
                const Endpoint p = d.wire(w).from;
                if (!p.on_node() || p.node == nid) continue;
                const auto& ps = d.node(p.node).spec;
                if (ps.is_state() && is_pruning_state(ps, s.dim, false))
                    ms.push_back(make_match(name_, {nid, p.node}, {w}, s.dim, {0, k}));
            }
            for (int k = 0; k < dot_n(s); ++k) {
                const WireId w = wire_at_or_throw(d, Endpoint::node_output(nid, k));
                const Endpoint c = d.wire(w).to;
                if (!c.on_node() || c.node == nid) continue;
                const auto& cs = d.node(c.node).spec;
                if (cs.is_effect() && is_pruning_state(cs, s.dim, true))
                    ms.push_back(make_match(name_, {nid, c.node}, {w}, s.dim, {1, k}));
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        d.remove_wire(m.wires[0]);
        d.remove_node(m.nodes[1]);
        drop_dot_leg(d, m.nodes[0], m.data[0] == 1, m.data[1]);
        return ScalarFactor::sqrt_dim(-1);
    }

private:
    bool is_pruning_state(const GeneratorSpec& s, int dim, bool effect) const {
        if (s.dim != dim || s.adjoint != effect) return false;
        if (dot_ == GenKind::CopyDot) return s.kind == GenKind::PlusState;
        return s.kind == GenKind::BasisState && s.params.at(0) == 0;
    }

    std::string name_;
    GenKind dot_;
};

// ---------------------------------------------------------------------------
// Cups and caps
// ---------------------------------------------------------------------------

bool is_cup_kind(const GeneratorSpec& s) {
    return s.kind == GenKind::Cup || s.kind == GenKind::NormalizedCup;
}
bool is_cap_kind(const GeneratorSpec& s) {
    return s.kind == GenKind::Cap || s.kind == GenKind::NormalizedCap;
}

// Unnormalized cup/cap pair joined by exactly one (snake) or two (circle) wires.
std::vector<Match> find_cup_cap_pairs(const Diagram& d, std::string_view rule, std::size_t arity) {
    std::vector<Match> ms;
    for (const auto& [cup_id, cup] : d.nodes()) {
        if (cup.spec.kind != GenKind::Cup) continue;
        std::map<NodeId, std::vector<WireId>> caps;
        for (int k = 0; k < 2; ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_output(cup_id, k));
            const Endpoint c = d.wire(w).to;
            if (c.on_node() && d.node(c.node).spec.kind == GenKind::Cap)
                caps[c.node].push_back(w);
        }
        for (const auto& [cap_id, ws] : caps)
            if (ws.size() == arity)
                ms.push_back(make_match(std::string(rule), {std::min(cup_id, cap_id),
                                                            std::max(cup_id, cap_id)},
                                        ws, cup.spec.dim,
                                        {cup_id, cap_id}));
    }
    return sorted(std::move(ms));
}

class SnakeRule final : public RewriteRule {
public:
    std::string_view name() const override { return "snake"; }

    std::vector<Match> find(const Diagram& d) const override {
        return find_cup_cap_pairs(d, name(), 1);
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId cup = m.data[0], cap = m.data[1];
        const WireId shared = m.wires[0];
        const int cup_leg = d.wire(shared).from.index;
        const int cap_leg = d.wire(shared).to.index;
        const WireId w_other_out = wire_at_or_throw(d, Endpoint::node_output(cup, 1 - cup_leg));
        const WireId w_other_in = wire_at_or_throw(d, Endpoint::node_input(cap, 1 - cap_leg));
        // Pull the double bend straight: producer of the cap's far leg feeds
        // the consumer of the cup's far leg.
        const Endpoint consumer = d.wire(w_other_out).to;
        d.remove_wire(w_other_out);
        d.remove_wire(shared);
        d.rewire_to(w_other_in, consumer);
        d.remove_node(cup);
        d.remove_node(cap);
        return ScalarFactor::one();
    }
};

class CircleElimRule final : public RewriteRule {
public:
    std::string_view name() const override { return "circle-elim"; }

    std::vector<Match> find(const Diagram& d) const override {
        return find_cup_cap_pairs(d, name(), 2);
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        for (WireId w : m.wires) d.remove_wire(w);
        d.remove_node(m.data[0]);
        d.remove_node(m.data[1]);
        return ScalarFactor::sqrt_dim(2);
    }
};

class SlideRule final : public RewriteRule {
public:
    std::string_view name() const override { return "slide"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [cid, c] : d.nodes()) {
            if (is_cup_kind(c.spec)) {
                const WireId w0 = wire_at_or_throw(d, Endpoint::node_output(cid, 0));
                const Endpoint cons = d.wire(w0).to;
                if (cons.on_node() && cons.kind == Endpoint::Kind::node_input &&
                    cons.node != cid && d.node(cons.node).spec.is_single_wire())
                    ms.push_back(make_match(std::string(name()), {std::min(cid, cons.node),
                                                                  std::max(cid, cons.node)},
                                            {w0}, c.spec.dim, {0, cid, cons.node}));
            } else if (is_cap_kind(c.spec)) {
                const WireId w0 = wire_at_or_throw(d, Endpoint::node_input(cid, 0));
                const Endpoint prod = d.wire(w0).from;
                if (prod.on_node() && prod.kind == Endpoint::Kind::node_output &&
                    prod.node != cid && d.node(prod.node).spec.is_single_wire())
                    ms.push_back(make_match(std::string(name()), {std::min(cid, prod.node),
                                                                  std::max(cid, prod.node)},
                                            {w0}, c.spec.dim, {1, cid, prod.node}));
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const bool cap_side = m.data[0] == 1;
        const NodeId compact_node = m.data[1];
        const NodeId f = m.data[2];
        const GeneratorSpec transposed = d.node(f).spec.transposed_cb();
        if (!cap_side) {
            const WireId w_in = m.wires[0];  // cup.out0 -> f.in0
            const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(f, 0));
            const WireId w_other = wire_at_or_throw(d, Endpoint::node_output(compact_node, 1));
            const Endpoint x = d.wire(w_out).to;
            const Endpoint y = d.wire(w_other).to;
            const NodeId g = d.add_node(transposed);
            d.remove_wire(w_out);
            d.rewire_to(w_in, x);
            d.rewire_to(w_other, Endpoint::node_input(g, 0));
            d.add_wire(Endpoint::node_output(g, 0), y);
            d.remove_node(f);
        } else {
            const WireId w_out = m.wires[0];  // f.out0 -> cap.in0
            const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(f, 0));
            const WireId w_other = wire_at_or_throw(d, Endpoint::node_input(compact_node, 1));
            const Endpoint y = d.wire(w_other).from;
            const NodeId g = d.add_node(transposed);
            d.remove_wire(w_out);
            d.rewire_to(w_in, Endpoint::node_input(compact_node, 0));
            d.rewire_from(w_other, Endpoint::node_output(g, 0));
            d.add_wire(y, Endpoint::node_input(g, 0));
            d.remove_node(f);
        }
        return ScalarFactor::one();
    }
};

class CupSymmetryRule final : public RewriteRule {
public:
    std::string_view name() const override { return "cup-symmetry"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [sid, s] : d.nodes()) {
            if (s.spec.kind != GenKind::SWAP || s.spec.dim != s.spec.dim2) continue;
            const WireId wi0 = wire_at_or_throw(d, Endpoint::node_input(sid, 0));
            const WireId wi1 = wire_at_or_throw(d, Endpoint::node_input(sid, 1));
            const Endpoint p0 = d.wire(wi0).from;
            const Endpoint p1 = d.wire(wi1).from;
            if (p0.on_node() && p1.on_node() && p0.node == p1.node && p0.node != sid &&
                is_cup_kind(d.node(p0.node).spec))
                ms.push_back(make_match(std::string(name()),
                                        {std::min(sid, p0.node), std::max(sid, p0.node)},
                                        {wi0, wi1}, s.spec.dim, {0, sid, p0.node}));
            const WireId wo0 = wire_at_or_throw(d, Endpoint::node_output(sid, 0));
            const WireId wo1 = wire_at_or_throw(d, Endpoint::node_output(sid, 1));
            const Endpoint c0 = d.wire(wo0).to;
            const Endpoint c1 = d.wire(wo1).to;
            if (c0.on_node() && c1.on_node() && c0.node == c1.node && c0.node != sid &&
                is_cap_kind(d.node(c0.node).spec))
                ms.push_back(make_match(std::string(name()),
                                        {std::min(sid, c0.node), std::max(sid, c0.node)},
                                        {wo0, wo1}, s.spec.dim, {1, sid, c0.node}));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const bool cap_side = m.data[0] == 1;
        const NodeId swap_node = m.data[1];
        const NodeId compact_node = m.data[2];
        if (!cap_side) {
            const WireId wo0 = wire_at_or_throw(d, Endpoint::node_output(swap_node, 0));
            const WireId wo1 = wire_at_or_throw(d, Endpoint::node_output(swap_node, 1));
            const Endpoint c0 = d.wire(wo0).to;
            const Endpoint c1 = d.wire(wo1).to;
            d.remove_wire(wo0);
            d.remove_wire(wo1);
            d.rewire_to(m.wires[0], c0);
            d.rewire_to(m.wires[1], c1);
            d.rewire_from(m.wires[0], Endpoint::node_output(compact_node, 0));
            d.rewire_from(m.wires[1], Endpoint::node_output(compact_node, 1));
        } else {
            const WireId wi0 = wire_at_or_throw(d, Endpoint::node_input(swap_node, 0));
            const WireId wi1 = wire_at_or_throw(d, Endpoint::node_input(swap_node, 1));
            const Endpoint p0 = d.wire(wi0).from;
            const Endpoint p1 = d.wire(wi1).from;
            d.remove_wire(wi0);
            d.remove_wire(wi1);
            d.rewire_from(m.wires[0], p0);
            d.rewire_from(m.wires[1], p1);
            d.rewire_to(m.wires[0], Endpoint::node_input(compact_node, 0));
            d.rewire_to(m.wires[1], Endpoint::node_input(compact_node, 1));
        }
        d.remove_node(swap_node);
        return ScalarFactor::one();
    }
};

class ConjugateStateRule final : public RewriteRule {
public:
    std::string_view name() const override { return "conjugate-state"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [cid, c] : d.nodes()) {
            if (is_cup_kind(c.spec)) {
                for (int k = 0; k < 2; ++k) {
                    const WireId w = wire_at_or_throw(d, Endpoint::node_output(cid, k));
                    const Endpoint cons = d.wire(w).to;
                    if (cons.on_node() && cons.node != cid && d.node(cons.node).spec.is_effect())
                        ms.push_back(make_match(std::string(name()),
                                                {std::min(cid, cons.node), std::max(cid, cons.node)},
                                                {w}, c.spec.dim,
                                                {0, cid, cons.node, k,
                                                 c.spec.kind == GenKind::NormalizedCup ? 1 : 0}));
                }
            } else if (is_cap_kind(c.spec)) {
                for (int k = 0; k < 2; ++k) {
                    const WireId w = wire_at_or_throw(d, Endpoint::node_input(cid, k));
                    const Endpoint prod = d.wire(w).from;
                    if (prod.on_node() && prod.node != cid && d.node(prod.node).spec.is_state())
                        ms.push_back(make_match(std::string(name()),
                                                {std::min(cid, prod.node), std::max(cid, prod.node)},
                                                {w}, c.spec.dim,
                                                {1, cid, prod.node, k,
                                                 c.spec.kind == GenKind::NormalizedCap ? 1 : 0}));
                }
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const bool cap_side = m.data[0] == 1;
        const NodeId compact_node = m.data[1];
        const NodeId attached = m.data[2];
        const int leg = m.data[3];
        const bool normalized = m.data[4] == 1;
        const GeneratorSpec moved = d.node(attached).spec.transposed_cb();
        if (!cap_side) {
            const WireId w_other = wire_at_or_throw(d, Endpoint::node_output(compact_node, 1 - leg));
            const NodeId fresh = d.add_node(moved);
            d.rewire_from(w_other, Endpoint::node_output(fresh, 0));
            d.remove_wire(m.wires[0]);
        } else {
            const WireId w_other = wire_at_or_throw(d, Endpoint::node_input(compact_node, 1 - leg));
            const NodeId fresh = d.add_node(moved);
            d.rewire_to(w_other, Endpoint::node_input(fresh, 0));
            d.remove_wire(m.wires[0]);
        }
        d.remove_node(compact_node);
        d.remove_node(attached);
        return normalized ? ScalarFactor::sqrt_dim(-1) : ScalarFactor::one();
    }
};

class DotBendRule final : public RewriteRule {
public:
    std::string_view name() const override { return "dot-bend"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [cid, c] : d.nodes()) {
            if (is_cup_kind(c.spec)) {
                for (int k = 0; k < 2; ++k) {
                    const WireId w = wire_at_or_throw(d, Endpoint::node_output(cid, k));
                    const Endpoint cons = d.wire(w).to;
                    if (cons.kind != Endpoint::Kind::node_input || cons.node == cid) continue;
                    const auto& ds = d.node(cons.node).spec;
                    if (!is_dot(ds) || ds.dim != c.spec.dim || !color_is_real(ds)) continue;
                    ms.push_back(make_match(std::string(name()),
                                            {std::min(cid, cons.node), std::max(cid, cons.node)},
                                            {w}, c.spec.dim,
                                            {0, cid, cons.node, k, cons.index,
                                             c.spec.kind == GenKind::NormalizedCup ? 1 : 0}));
                }
            } else if (is_cap_kind(c.spec)) {
                for (int k = 0; k < 2; ++k) {
                    const WireId w = wire_at_or_throw(d, Endpoint::node_input(cid, k));
                    const Endpoint prod = d.wire(w).from;
                    if (prod.kind != Endpoint::Kind::node_output || prod.node == cid) continue;
                    const auto& ds = d.node(prod.node).spec;
                    if (!is_dot(ds) || ds.dim != c.spec.dim || !color_is_real(ds)) continue;
                    ms.push_back(make_match(std::string(name()),
                                            {std::min(cid, prod.node), std::max(cid, prod.node)},
                                            {w}, c.spec.dim,
                                            {1, cid, prod.node, k, prod.index,
                                             c.spec.kind == GenKind::NormalizedCap ? 1 : 0}));
                }
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const bool cap_side = m.data[0] == 1;
        const NodeId compact_node = m.data[1];
        const NodeId dot = m.data[2];
        const int compact_leg = m.data[3];
        const int dot_leg = m.data[4];
        const bool normalized = m.data[5] == 1;
        const GeneratorSpec& s = d.node(dot).spec;
        const int m_in = dot_m(s), n_out = dot_n(s);

        // Keep every other leg's wire; the bent leg joins the opposite side
        // as its last leg, taking over the compact node's far wire. A cup
        // consumes an input leg, a cap an output leg.
        std::vector<WireId> ins, outs;
        for (int k = 0; k < n_out; ++k)
            if (!(cap_side && k == dot_leg))
                outs.push_back(wire_at_or_throw(d, Endpoint::node_output(dot, k)));
        for (int k = 0; k < m_in; ++k)
            if (!(!cap_side && k == dot_leg))
                ins.push_back(wire_at_or_throw(d, Endpoint::node_input(dot, k)));

        const WireId w_far = cap_side
                                 ? wire_at_or_throw(d, Endpoint::node_input(compact_node, 1 - compact_leg))
                                 : wire_at_or_throw(d, Endpoint::node_output(compact_node, 1 - compact_leg));
        d.remove_wire(m.wires[0]);

        GeneratorSpec fresh_spec =
            is_copy(s) ? GeneratorSpec::copy_dot(s.dim, m_in + (cap_side ? 1 : -1),
                                                 n_out + (cap_side ? -1 : 1), s.color)
                       : GeneratorSpec::plus_dot(s.dim, m_in + (cap_side ? 1 : -1),
                                                 n_out + (cap_side ? -1 : 1), s.color);
        const NodeId fresh = d.add_node(std::move(fresh_spec));
        if (!cap_side) {
            outs.push_back(w_far);
            d.rewire_from(w_far, Endpoint::node_output(fresh, static_cast<int>(outs.size()) - 1));
        } else {
            ins.push_back(w_far);
            d.rewire_to(w_far, Endpoint::node_input(fresh, static_cast<int>(ins.size()) - 1));
        }
        for (std::size_t k = 0; k < outs.size(); ++k) {
            if (!cap_side && k == outs.size() - 1) break;  // already rewired above
            d.rewire_from(outs[k], Endpoint::node_output(fresh, static_cast<int>(k)));
        }
        for (std::size_t k = 0; k < ins.size(); ++k) {
            if (cap_side && k == ins.size() - 1) break;
            d.rewire_to(ins[k], Endpoint::node_input(fresh, static_cast<int>(k)));
        }
        d.remove_node(dot);
        d.remove_node(compact_node);
        return normalized ? ScalarFactor::sqrt_dim(-1) : ScalarFactor::one();
    }
};

// ---------------------------------------------------------------------------
// Dot structure rules
// ---------------------------------------------------------------------------

class DotDaggerRule final : public RewriteRule {
public:
    std::string_view name() const override { return "dot-dagger"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (is_dot(n.spec))
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        // Materializes S2: a dot equals the dagger of the arity-swapped dot.
        const GeneratorSpec& s = d.node(m.nodes[0]).spec;
        ComplexTensor t = dagger(tensor_of(s.daggered()));
        d.replace_spec(m.nodes[0],
                       GeneratorSpec::box(std::move(t), is_copy(s) ? "copy_s2" : "plus_s2"));
        return ScalarFactor::one();
    }
};

class DotPermuteRule final : public RewriteRule {
public:
    std::string_view name() const override { return "dot-permute"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes()) {
            if (!is_dot(n.spec)) continue;
            if (!side_sorted(d, nid, true) || !side_sorted(d, nid, false))
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId nid = m.nodes[0];
        const GeneratorSpec& s = d.node(nid).spec;
        std::vector<WireId> outs, ins;
        for (int k = 0; k < dot_n(s); ++k)
            outs.push_back(wire_at_or_throw(d, Endpoint::node_output(nid, k)));
        for (int k = 0; k < dot_m(s); ++k)
            ins.push_back(wire_at_or_throw(d, Endpoint::node_input(nid, k)));
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        for (std::size_t k = 0; k < outs.size(); ++k)
            d.rewire_from(outs[k], Endpoint::node_output(nid, static_cast<int>(k)));
        for (std::size_t k = 0; k < ins.size(); ++k)
            d.rewire_to(ins[k], Endpoint::node_input(nid, static_cast<int>(k)));
        return ScalarFactor::one();
    }

private:
    static bool side_sorted(const Diagram& d, NodeId nid, bool outputs) {
        const GeneratorSpec& s = d.node(nid).spec;
        const int count = outputs ? dot_n(s) : dot_m(s);
        WireId prev = -1;
        for (int k = 0; k < count; ++k) {
            const WireId w = wire_at_or_throw(d, outputs ? Endpoint::node_output(nid, k)
                                                         : Endpoint::node_input(nid, k));
            if (w < prev) return false;
            prev = w;
        }
        return true;
    }
};

class RecolorRule final : public RewriteRule {
public:
    std::string_view name() const override { return "recolor"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (is_dot(n.spec) && n.spec.color.has_value())
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId nid = m.nodes[0];
        GeneratorSpec s = d.node(nid).spec;
        const ComplexTensor u = *s.color;
        for (int k = 0; k < dot_n(s); ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_output(nid, k));
            const Endpoint cons = d.wire(w).to;
            const NodeId box = d.add_node(GeneratorSpec::box(u, "U_B"));
            d.rewire_to(w, Endpoint::node_input(box, 0));
            d.add_wire(Endpoint::node_output(box, 0), cons);
        }
        for (int k = 0; k < dot_m(s); ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_input(nid, k));
            const NodeId box = d.add_node(GeneratorSpec::box(dagger(u), "U_B'"));
            d.rewire_to(w, Endpoint::node_input(box, 0));
            d.add_wire(Endpoint::node_output(box, 0), Endpoint::node_input(nid, k));
        }
        s.color.reset();
        d.replace_spec(nid, std::move(s));
        return ScalarFactor::one();
    }
};

// ---------------------------------------------------------------------------
// Commutation rules
// ---------------------------------------------------------------------------

// Z commutes through a copy dot one leg at a time; X through a plus dot with
// an inverted exponent. `multiplied` selects the all-legs form instead.
class CommuteRule final : public RewriteRule {
public:
    CommuteRule(std::string rule_name, GenKind dot_kind, GenKind gate_kind, bool multiplied,
                bool invert)
        : name_(std::move(rule_name)),
          dot_(dot_kind),
          gate_(gate_kind),
          multiplied_(multiplied),
          invert_(invert) {}

    std::string_view name() const override { return name_; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes()) {
            const auto& s = n.spec;
            if (s.kind != dot_ || s.color.has_value()) continue;
            if (dot_m(s) < 1 || dot_n(s) < 1) continue;
            if (output_selfloop(d, nid)) continue;
            if (!multiplied_) {
                for (int k = 0; k < dot_m(s); ++k) {
                    const auto g = gate_on_input(d, nid, k);
                    if (g.has_value())
                        ms.push_back(make_match(name_, {nid, g->first}, {}, s.dim,
                                                {k, g->second}));
                }
            } else {
                std::vector<NodeId> gates;
                int exponent = -1;
                bool ok = true;
                for (int k = 0; k < dot_m(s) && ok; ++k) {
                    const auto g = gate_on_input(d, nid, k);
                    if (!g.has_value() || (exponent >= 0 && g->second != exponent)) {
                        ok = false;
                        break;
                    }
                    exponent = g->second;
                    gates.push_back(g->first);
                }
                if (ok && !gates.empty()) {
                    std::vector<NodeId> nodes = {nid};
                    nodes.insert(nodes.end(), gates.begin(), gates.end());
                    ms.push_back(make_match(name_, std::move(nodes), {}, s.dim, {exponent}));
                }
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId dot = m.nodes[0];
        const int dim = m.dim;
        if (!multiplied_) {
            const int exponent = m.data[1];
            bridge_out(d, m.nodes[1]);
            const WireId w0 = wire_at_or_throw(d, Endpoint::node_output(dot, 0));
            insert_on_wire(d, w0,
                           GeneratorSpec::gate(gate_, dim,
                                               {invert_ ? mod_d(-exponent, dim) : exponent}));
        } else {
            const int exponent = m.data[0];
            for (std::size_t i = 1; i < m.nodes.size(); ++i) bridge_out(d, m.nodes[i]);
            const auto& s = d.node(dot).spec;
            for (int k = 0; k < dot_n(s); ++k) {
                const WireId w = wire_at_or_throw(d, Endpoint::node_output(dot, k));
                insert_on_wire(d, w,
                               GeneratorSpec::gate(gate_, dim,
                                                   {invert_ ? mod_d(-exponent, dim) : exponent}));
            }
        }
        return ScalarFactor::one();
    }

private:
    std::optional<std::pair<NodeId, int>> gate_on_input(const Diagram& d, NodeId dot,
                                                        int leg) const {
        const WireId w = wire_at_or_throw(d, Endpoint::node_input(dot, leg));
        const Endpoint p = d.wire(w).from;
        if (p.kind != Endpoint::Kind::node_output || p.node == dot) return std::nullopt;
        const auto& gs = d.node(p.node).spec;
        if (gs.kind != gate_ || gs.dim != d.node(dot).spec.dim) return std::nullopt;
        // Reject gates sitting on a self-loop of the same dot; moving them
        // would re-create the pattern forever.
        const WireId gw_in = wire_at_or_throw(d, Endpoint::node_input(p.node, 0));
        if (endpoint_on(d.wire(gw_in).from, dot)) return std::nullopt;
        return std::make_pair(p.node, gs.params.at(0));
    }

    bool output_selfloop(const Diagram& d, NodeId dot) const {
        const auto& s = d.node(dot).spec;
        for (int k = 0; k < dot_n(s); ++k) {
            const WireId w = wire_at_or_throw(d, Endpoint::node_output(dot, k));
            if (endpoint_on(d.wire(w).to, dot)) return true;
        }
        return false;
    }

    std::string name_;
    GenKind dot_;
    GenKind gate_;
    bool multiplied_;
    bool invert_;
};

// ---------------------------------------------------------------------------
// Bialgebra, Hopf, NADD structure
// ---------------------------------------------------------------------------

class BialgebraRule final : public RewriteRule {
public:
    std::string_view name() const override { return "bialgebra"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [aid, a] : d.nodes()) {
            if (a.spec.kind != GenKind::NADD || a.spec.adjoint) continue;
            const WireId w0 = wire_at_or_throw(d, Endpoint::node_output(aid, 0));
            const WireId w1 = wire_at_or_throw(d, Endpoint::node_output(aid, 1));
            const Endpoint c0 = d.wire(w0).to;
            const Endpoint c1 = d.wire(w1).to;
            if (!c0.on_node() || !c1.on_node() || c0.node != c1.node) continue;
            const NodeId sid = c0.node;
            const auto& ss = d.node(sid).spec;
            if (ss.kind != GenKind::SWAP || ss.dim != a.spec.dim || ss.dim2 != a.spec.dim) continue;
            if (c0.index != 0 || c1.index != 1) continue;
            const WireId v0 = wire_at_or_throw(d, Endpoint::node_output(sid, 0));
            const WireId v1 = wire_at_or_throw(d, Endpoint::node_output(sid, 1));
            const Endpoint b0 = d.wire(v0).to;
            const Endpoint b1 = d.wire(v1).to;
            if (!b0.on_node() || !b1.on_node() || b0.node != b1.node || b0.node == aid) continue;
            const NodeId bid = b0.node;
            const auto& bs = d.node(bid).spec;
            if (bs.kind != GenKind::NADD || bs.adjoint || bs.dim != a.spec.dim) continue;
            if (b0.index != 0 || b1.index != 1) continue;
            ms.push_back(make_match(std::string(name()), {aid, sid, bid}, {w0, w1, v0, v1},
                                    a.spec.dim, {aid, sid, bid}));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId a = m.data[0], s = m.data[1], b = m.data[2];
        const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(a, 0));
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(a, 1));
        const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(b, 0));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(b, 1));
        for (WireId w : m.wires) d.remove_wire(w);
        const NodeId fresh = d.add_node(GeneratorSpec::gate(GenKind::NADD, m.dim));
        // NADD_{2,1}: the roles of the two wires swap on both sides.
        d.rewire_to(in0, Endpoint::node_input(fresh, 1));
        d.rewire_to(in1, Endpoint::node_input(fresh, 0));
        d.rewire_from(out0, Endpoint::node_output(fresh, 1));
        d.rewire_from(out1, Endpoint::node_output(fresh, 0));
        d.remove_node(a);
        d.remove_node(s);
        d.remove_node(b);
        return ScalarFactor::one();
    }
};

class DotBialgebraRule final : public RewriteRule {
public:
    std::string_view name() const override { return "dot-bialgebra"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [c1, n1] : d.nodes()) {
            if (!is_copy(n1.spec) || n1.spec.color.has_value()) continue;
            if (dot_m(n1.spec) != 1 || dot_n(n1.spec) != 2) continue;
            const WireId wa = wire_at_or_throw(d, Endpoint::node_output(c1, 0));
            const WireId wb = wire_at_or_throw(d, Endpoint::node_output(c1, 1));
            const Endpoint pa = d.wire(wa).to;
            const Endpoint pb = d.wire(wb).to;
            if (!pa.on_node() || !pb.on_node() || pa.node == pb.node) continue;
            const NodeId p1 = pa.node, p2 = pb.node;
            if (!plus21(d, p1) || !plus21(d, p2) || d.node(p1).spec.dim != n1.spec.dim) continue;
            // The second copy dot feeds the remaining inputs of both plus dots.
            const auto other_producer = [&](NodeId p, const Endpoint& used) -> std::optional<Endpoint> {
                for (int k = 0; k < 2; ++k) {
                    const Endpoint e = Endpoint::node_input(p, k);
                    if (e == used) continue;
                    return d.wire(wire_at_or_throw(d, e)).from;
                }
                return std::nullopt;
            };
            const auto q1 = other_producer(p1, pa);
            const auto q2 = other_producer(p2, pb);
            if (!q1.has_value() || !q2.has_value()) continue;
            if (!q1->on_node() || !q2->on_node() || q1->node != q2->node) continue;
            const NodeId c2 = q1->node;
            if (c2 == c1 || c2 == p1 || c2 == p2) continue;
            const auto& s2 = d.node(c2).spec;
            if (!is_copy(s2) || s2.color.has_value() || dot_m(s2) != 1 || dot_n(s2) != 2) continue;
            if (s2.dim != n1.spec.dim) continue;
            if (c1 > c2) continue;  // canonical orientation picks the smaller copy dot first
            const WireId wc = wire_at_or_throw(d, *q1);
            const WireId wd = wire_at_or_throw(d, *q2);
            ms.push_back(make_match(std::string(name()), {c1, c2, p1, p2}, {wa, wb, wc, wd},
                                    n1.spec.dim, {c1, c2, p1, p2}));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId c1 = m.data[0], c2 = m.data[1], p1 = m.data[2], p2 = m.data[3];
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(c1, 0));
        const WireId in2 = wire_at_or_throw(d, Endpoint::node_input(c2, 0));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(p1, 0));
        const WireId out2 = wire_at_or_throw(d, Endpoint::node_output(p2, 0));
        for (WireId w : m.wires) d.remove_wire(w);
        const NodeId plus = d.add_node(GeneratorSpec::plus_dot(m.dim, 2, 1));
        const NodeId copy = d.add_node(GeneratorSpec::copy_dot(m.dim, 1, 2));
        d.rewire_to(in1, Endpoint::node_input(plus, 0));
        d.rewire_to(in2, Endpoint::node_input(plus, 1));
        d.add_wire(Endpoint::node_output(plus, 0), Endpoint::node_input(copy, 0));
        d.rewire_from(out1, Endpoint::node_output(copy, 0));
        d.rewire_from(out2, Endpoint::node_output(copy, 1));
        for (NodeId n : {c1, c2, p1, p2}) d.remove_node(n);
        return ScalarFactor::sqrt_dim(-1);
    }

private:
    static bool plus21(const Diagram& d, NodeId n) {
        const auto& s = d.node(n).spec;
        return is_plus(s) && !s.color.has_value() && dot_m(s) == 2 && dot_n(s) == 1;
    }
};

class HopfRule final : public RewriteRule {
public:
    std::string_view name() const override { return "hopf"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [cid, c] : d.nodes()) {
            if (!is_copy(c.spec) || c.spec.color.has_value()) continue;
            if (dot_m(c.spec) != 1 || dot_n(c.spec) != 2) continue;
            for (int with_neg = 0; with_neg < 2; ++with_neg) {
                const WireId w_neg_side =
                    wire_at_or_throw(d, Endpoint::node_output(cid, with_neg));
                const WireId w_direct =
                    wire_at_or_throw(d, Endpoint::node_output(cid, 1 - with_neg));
                const Endpoint en = d.wire(w_neg_side).to;
                const Endpoint ed = d.wire(w_direct).to;
                if (!en.on_node() || !ed.on_node()) continue;
                const NodeId gid = en.node;
                if (gid == cid) continue;
                const auto& gs = d.node(gid).spec;
                if (gs.kind != GenKind::NEG || gs.dim != c.spec.dim) continue;
                const WireId w_gp = wire_at_or_throw(d, Endpoint::node_output(gid, 0));
                const Endpoint ep = d.wire(w_gp).to;
                if (!ep.on_node()) continue;
                const NodeId pid = ep.node;
                if (pid == cid || pid == gid || ed.node != pid) continue;
                const auto& psp = d.node(pid).spec;
                if (!is_plus(psp) || psp.color.has_value() || dot_m(psp) != 2 || dot_n(psp) != 1)
                    continue;
                if (psp.dim != c.spec.dim) continue;
                ms.push_back(make_match(std::string(name()), {cid, gid, pid},
                                        {w_neg_side, w_gp, w_direct}, c.spec.dim,
                                        {cid, gid, pid}));
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId cid = m.data[0], gid = m.data[1], pid = m.data[2];
        const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(cid, 0));
        const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(pid, 0));
        for (WireId w : m.wires) d.remove_wire(w);
        const NodeId merge = d.add_node(GeneratorSpec::copy_dot(m.dim, 1, 0));
        const NodeId unit = d.add_node(GeneratorSpec::plus_dot(m.dim, 0, 1));
        d.rewire_to(w_in, Endpoint::node_input(merge, 0));
        d.rewire_from(w_out, Endpoint::node_output(unit, 0));
        for (NodeId n : {cid, gid, pid}) d.remove_node(n);
        return ScalarFactor::sqrt_dim(-2);
    }
};

class NaddSplitRule final : public RewriteRule {
public:
    std::string_view name() const override { return "nadd-split"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (n.spec.kind == GenKind::NADD && !n.spec.adjoint)
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId nid = m.nodes[0];
        const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(nid, 0));
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(nid, 1));
        const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(nid, 0));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(nid, 1));
        const NodeId copy = d.add_node(GeneratorSpec::copy_dot(m.dim, 1, 2));
        const NodeId plus = d.add_node(GeneratorSpec::plus_dot(m.dim, 2, 1));
        d.rewire_to(in0, Endpoint::node_input(copy, 0));
        d.rewire_from(out0, Endpoint::node_output(copy, 0));
        d.add_wire(Endpoint::node_output(copy, 1), Endpoint::node_input(plus, 1));
        d.rewire_to(in1, Endpoint::node_input(plus, 0));
        d.rewire_from(out1, Endpoint::node_output(plus, 0));
        d.remove_node(nid);
        return ScalarFactor::sqrt_dim(1);
    }
};

class NaddFuseRule final : public RewriteRule {
public:
    std::string_view name() const override { return "nadd-fuse"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [cid, c] : d.nodes()) {
            if (!is_copy(c.spec) || c.spec.color.has_value()) continue;
            if (dot_m(c.spec) != 1 || dot_n(c.spec) != 2) continue;
            for (int leg = 0; leg < 2; ++leg) {
                const WireId w = wire_at_or_throw(d, Endpoint::node_output(cid, leg));
                const Endpoint cons = d.wire(w).to;
                if (!cons.on_node() || cons.node == cid) continue;
                const NodeId pid = cons.node;
                const auto& ps = d.node(pid).spec;
                if (!is_plus(ps) || ps.color.has_value() || dot_m(ps) != 2 || dot_n(ps) != 1)
                    continue;
                if (ps.dim != c.spec.dim) continue;
                // Exactly one connecting wire.
                const WireId w_other_c = wire_at_or_throw(d, Endpoint::node_output(cid, 1 - leg));
                if (endpoint_on(d.wire(w_other_c).to, pid)) continue;
                const WireId w_other_p =
                    wire_at_or_throw(d, Endpoint::node_input(pid, 1 - cons.index));
                if (endpoint_on(d.wire(w_other_p).from, cid)) continue;
                ms.push_back(make_match(std::string(name()), {cid, pid}, {w},
                                        c.spec.dim, {cid, pid, leg, cons.index}));
            }
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId cid = m.data[0], pid = m.data[1];
        const int c_leg = m.data[2], p_leg = m.data[3];
        const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(cid, 0));
        const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(cid, 1 - c_leg));
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(pid, 1 - p_leg));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(pid, 0));
        d.remove_wire(m.wires[0]);
        const NodeId nadd = d.add_node(GeneratorSpec::gate(GenKind::NADD, m.dim));
        d.rewire_to(in0, Endpoint::node_input(nadd, 0));
        d.rewire_from(out0, Endpoint::node_output(nadd, 0));
        d.rewire_to(in1, Endpoint::node_input(nadd, 1));
        d.rewire_from(out1, Endpoint::node_output(nadd, 1));
        d.remove_node(cid);
        d.remove_node(pid);
        return ScalarFactor::sqrt_dim(-1);
    }
};

class AddSplitRule final : public RewriteRule {
public:
    std::string_view name() const override { return "add-split"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (n.spec.kind == GenKind::ADD)
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim,
                                        {n.spec.adjoint ? 1 : 0}));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId nid = m.nodes[0];
        const bool adjoint = m.data[0] == 1;
        const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(nid, 0));
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(nid, 1));
        const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(nid, 0));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(nid, 1));
        const NodeId nadd = d.add_node(GeneratorSpec::gate(GenKind::NADD, m.dim));
        const NodeId neg = d.add_node(GeneratorSpec::gate(GenKind::NEG, m.dim));
        d.rewire_to(in0, Endpoint::node_input(nadd, 0));
        d.rewire_from(out0, Endpoint::node_output(nadd, 0));
        if (!adjoint) {
            // ADD = NEG on the result wire after NADD.
            d.rewire_to(in1, Endpoint::node_input(nadd, 1));
            d.add_wire(Endpoint::node_output(nadd, 1), Endpoint::node_input(neg, 0));
            d.rewire_from(out1, Endpoint::node_output(neg, 0));
        } else {
            // ADD' = NADD after NEG on the result wire.
            d.rewire_to(in1, Endpoint::node_input(neg, 0));
            d.add_wire(Endpoint::node_output(neg, 0), Endpoint::node_input(nadd, 1));
            d.rewire_from(out1, Endpoint::node_output(nadd, 1));
        }
        d.remove_node(nid);
        return ScalarFactor::one();
    }
};

// ---------------------------------------------------------------------------
// Single-wire gate chains
// ---------------------------------------------------------------------------

std::optional<NodeId> next_in_chain(const Diagram& d, NodeId n, GenKind kind, bool adjoint) {
    const WireId w = wire_at_or_throw(d, Endpoint::node_output(n, 0));
    const Endpoint cons = d.wire(w).to;
    if (cons.kind != Endpoint::Kind::node_input || cons.node == n) return std::nullopt;
    const auto& s = d.node(cons.node).spec;
    if (s.kind != kind || s.adjoint != adjoint || s.dim != d.node(n).spec.dim) return std::nullopt;
    return cons.node;
}

// Removes a chain of 1->1 nodes entirely, splicing the outer wires. The chain
// must not close into a loop (caller checks).
void splice_out_chain(Diagram& d, std::span<const NodeId> chain) {
    const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(chain.front(), 0));
    const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(chain.back(), 0));
    const Endpoint consumer = d.wire(w_out).to;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        d.remove_wire(wire_at_or_throw(d, Endpoint::node_output(chain[i], 0)));
    d.remove_wire(w_out);
    d.rewire_to(w_in, consumer);
    for (NodeId n : chain) d.remove_node(n);
}

bool chain_closes(const Diagram& d, NodeId first, NodeId last) {
    const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(first, 0));
    return endpoint_on(d.wire(w_in).from, last);
}

class GateChainElimRule : public RewriteRule {
public:
    GateChainElimRule(std::string rule_name, GenKind kind, int length)
        : name_(std::move(rule_name)), kind_(kind), length_(length) {}

    std::string_view name() const override { return name_; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes()) {
            if (n.spec.kind != kind_) continue;
            std::vector<NodeId> chain = {nid};
            while (static_cast<int>(chain.size()) < length_) {
                const auto next = next_in_chain(d, chain.back(), kind_, n.spec.adjoint);
                if (!next.has_value()) break;
                if (std::find(chain.begin(), chain.end(), *next) != chain.end()) break;
                chain.push_back(*next);
            }
            if (static_cast<int>(chain.size()) != length_) continue;
            if (chain_closes(d, chain.front(), chain.back())) continue;
            ms.push_back(make_match(name_, chain, {}, n.spec.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        splice_out_chain(d, m.nodes);
        return ScalarFactor::one();
    }

private:
    std::string name_;
    GenKind kind_;
    int length_;
};

class H2ToNegRule final : public RewriteRule {
public:
    std::string_view name() const override { return "h2-to-neg"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes()) {
            if (n.spec.kind != GenKind::H) continue;
            const auto next = next_in_chain(d, nid, GenKind::H, n.spec.adjoint);
            if (next.has_value())
                ms.push_back(make_match(std::string(name()), {nid, *next}, {}, n.spec.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const WireId w_mid = wire_at_or_throw(d, Endpoint::node_output(m.nodes[0], 0));
        const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(m.nodes[0], 0));
        const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(m.nodes[1], 0));
        const NodeId neg = d.add_node(GeneratorSpec::gate(GenKind::NEG, m.dim));
        d.remove_wire(w_mid);
        d.rewire_to(w_in, Endpoint::node_input(neg, 0));
        d.rewire_from(w_out, Endpoint::node_output(neg, 0));
        d.remove_node(m.nodes[0]);
        d.remove_node(m.nodes[1]);
        return ScalarFactor::one();
    }
};

class NegAsH2Rule final : public RewriteRule {
public:
    std::string_view name() const override { return "neg-as-h2"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (n.spec.kind == GenKind::NEG)
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId h1 = swap_single_wire_node(d, m.nodes[0], GeneratorSpec::gate(GenKind::H, m.dim));
        const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(h1, 0));
        insert_on_wire(d, w_out, GeneratorSpec::gate(GenKind::H, m.dim));
        return ScalarFactor::one();
    }
};

class SwapElimRule final : public RewriteRule {
public:
    std::string_view name() const override { return "swap-elim"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [aid, a] : d.nodes()) {
            if (a.spec.kind != GenKind::SWAP) continue;
            const WireId w0 = wire_at_or_throw(d, Endpoint::node_output(aid, 0));
            const WireId w1 = wire_at_or_throw(d, Endpoint::node_output(aid, 1));
            const Endpoint c0 = d.wire(w0).to;
            const Endpoint c1 = d.wire(w1).to;
            if (!c0.on_node() || !c1.on_node() || c0.node != c1.node || c0.node == aid) continue;
            if (c0.index != 0 || c1.index != 1) continue;
            const NodeId bid = c0.node;
            const auto& bs = d.node(bid).spec;
            if (bs.kind != GenKind::SWAP || bs.dim != a.spec.dim2 || bs.dim2 != a.spec.dim)
                continue;
            // External wires must not feed back into the pair.
            const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(aid, 0));
            const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(aid, 1));
            const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(bid, 0));
            const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(bid, 1));
            if (in0 == out0 || in0 == out1 || in1 == out0 || in1 == out1) continue;
            ms.push_back(make_match(std::string(name()), {aid, bid}, {w0, w1}, a.spec.dim,
                                    {aid, bid}));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const NodeId a = m.data[0], b = m.data[1];
        const WireId in0 = wire_at_or_throw(d, Endpoint::node_input(a, 0));
        const WireId in1 = wire_at_or_throw(d, Endpoint::node_input(a, 1));
        const WireId out0 = wire_at_or_throw(d, Endpoint::node_output(b, 0));
        const WireId out1 = wire_at_or_throw(d, Endpoint::node_output(b, 1));
        // SWAP undone by SWAP: both rails run straight through.
        const Endpoint c0 = d.wire(out0).to;
        const Endpoint c1 = d.wire(out1).to;
        d.remove_wire(out0);
        d.remove_wire(out1);
        d.remove_wire(m.wires[0]);
        d.remove_wire(m.wires[1]);
        d.rewire_to(in0, c0);
        d.rewire_to(in1, c1);
        d.remove_node(a);
        d.remove_node(b);
        return ScalarFactor::one();
    }
};

class Plus11ToNegRule final : public RewriteRule {
public:
    std::string_view name() const override { return "plus11-to-neg"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes())
            if (is_plus(n.spec) && !n.spec.color.has_value() && dot_m(n.spec) == 1 &&
                dot_n(n.spec) == 1)
                ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        swap_single_wire_node(d, m.nodes[0], GeneratorSpec::gate(GenKind::NEG, m.dim));
        return ScalarFactor::one();
    }
};

class Copy11ElimRule final : public RewriteRule {
public:
    std::string_view name() const override { return "copy11-elim"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [nid, n] : d.nodes()) {
            if (!is_copy(n.spec) || n.spec.color.has_value() || dot_m(n.spec) != 1 ||
                dot_n(n.spec) != 1)
                continue;
            const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(nid, 0));
            const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(nid, 0));
            if (w_in == w_out) continue;  // closed circle, handled by evaluation
            ms.push_back(make_match(std::string(name()), {nid}, {}, n.spec.dim));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        bridge_out(d, m.nodes[0]);
        return ScalarFactor::one();
    }
};

class HZeroToPlusRule final : public RewriteRule {
public:
    std::string_view name() const override { return "h-zero-to-plus"; }

    std::vector<Match> find(const Diagram& d) const override {
        std::vector<Match> ms;
        for (const auto& [hid, h] : d.nodes()) {
            if (h.spec.kind != GenKind::H) continue;
            const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(hid, 0));
            const Endpoint p = d.wire(w_in).from;
            if (p.on_node() && zero_state(d.node(p.node).spec, h.spec.dim, false))
                ms.push_back(make_match(std::string(name()), {std::min(hid, p.node),
                                                              std::max(hid, p.node)},
                                        {w_in}, h.spec.dim, {0, hid, p.node}));
            const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(hid, 0));
            const Endpoint c = d.wire(w_out).to;
            if (c.on_node() && zero_state(d.node(c.node).spec, h.spec.dim, true))
                ms.push_back(make_match(std::string(name()), {std::min(hid, c.node),
                                                              std::max(hid, c.node)},
                                        {w_out}, h.spec.dim, {1, hid, c.node}));
        }
        return sorted(std::move(ms));
    }

    ScalarFactor apply_in_place(Diagram& d, const Match& m) const override {
        const bool effect_side = m.data[0] == 1;
        const NodeId hid = m.data[1];
        const NodeId state = m.data[2];
        GeneratorSpec plus = GeneratorSpec::plus_state(m.dim);
        plus.adjoint = effect_side;
        if (!effect_side) {
            const WireId w_out = wire_at_or_throw(d, Endpoint::node_output(hid, 0));
            const NodeId fresh = d.add_node(std::move(plus));
            d.rewire_from(w_out, Endpoint::node_output(fresh, 0));
        } else {
            const WireId w_in = wire_at_or_throw(d, Endpoint::node_input(hid, 0));
            const NodeId fresh = d.add_node(std::move(plus));
            d.rewire_to(w_in, Endpoint::node_input(fresh, 0));
        }
        d.remove_wire(m.wires[0]);
        d.remove_node(hid);
        d.remove_node(state);
        return ScalarFactor::one();
    }

private:
    static bool zero_state(const GeneratorSpec& s, int dim, bool effect) {
        return s.kind == GenKind::BasisState && s.dim == dim && s.adjoint == effect &&
               s.params.at(0) == 0;
    }
};

}  // namespace

std::span<const RewriteRule* const> builtin_rules() {
    static const SpiderCopyRule spider_copy;
    static const SpiderPlusRule spider_plus;
    static const PruneRule prune_copy("prune-copy", GenKind::CopyDot);
    static const PruneRule prune_plus("prune-plus", GenKind::PlusDot);
    static const SnakeRule snake;
    static const CircleElimRule circle_elim;
    static const SlideRule slide;
    static const CupSymmetryRule cup_symmetry;
    static const ConjugateStateRule conjugate_state;
    static const DotBendRule dot_bend;
    static const DotDaggerRule dot_dagger;
    static const DotPermuteRule dot_permute;
    static const RecolorRule recolor_rule;
    static const CommuteRule commute_z_copy("commute-z-copy", GenKind::CopyDot, GenKind::Zpow,
                                            false, false);
    static const CommuteRule commute_x_copy("commute-x-copy", GenKind::CopyDot, GenKind::Xpow,
                                            true, false);
    static const CommuteRule commute_z_plus("commute-z-plus", GenKind::PlusDot, GenKind::Zpow,
                                            true, true);
    static const CommuteRule commute_x_plus("commute-x-plus", GenKind::PlusDot, GenKind::Xpow,
                                            false, true);
    static const BialgebraRule bialgebra;
    static const DotBialgebraRule dot_bialgebra;
    static const HopfRule hopf;
    static const NaddSplitRule nadd_split;
    static const NaddFuseRule nadd_fuse;
    static const AddSplitRule add_split;
    static const NegAsH2Rule neg_as_h2;
    static const H2ToNegRule h2_to_neg;
    static const GateChainElimRule h4_elim("h4-elim", GenKind::H, 4);
    static const GateChainElimRule neg2_elim("neg2-elim", GenKind::NEG, 2);
    static const SwapElimRule swap_elim;
    static const Plus11ToNegRule plus11_to_neg;
    static const Copy11ElimRule copy11_elim;
    static const HZeroToPlusRule h_zero_to_plus;

    static const std::array<const RewriteRule*, 31> rules = {
        &spider_copy,   &spider_plus,   &prune_copy,     &prune_plus,   &snake,
        &circle_elim,   &slide,         &cup_symmetry,   &conjugate_state, &dot_bend,
        &dot_dagger,    &dot_permute,   &recolor_rule,   &commute_z_copy,  &commute_x_copy,
        &commute_z_plus, &commute_x_plus, &bialgebra,     &dot_bialgebra, &hopf,
        &nadd_split,    &nadd_fuse,     &add_split,      &neg_as_h2,    &h2_to_neg,
        &h4_elim,       &neg2_elim,     &swap_elim,      &plus11_to_neg, &copy11_elim,
        &h_zero_to_plus,
    };
    return rules;
}

}  // namespace qcat
