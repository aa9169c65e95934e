#include "qcat/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcat {

std::string Endpoint::display() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::node_output: os << "n" << node << ":out" << index; break;
        case Kind::node_input: os << "n" << node << ":in" << index; break;
        case Kind::boundary_input: os << "in:" << index; break;
        case Kind::boundary_output: os << "out:" << index; break;
    }
    return os.str();
}

ValidationError::ValidationError(std::vector<Defect> defects_in)
    : QcatError([&] {
          std::string msg = "diagram validation failed:";
          for (const Defect& d : defects_in) msg += "\n  " + d.display();
          return msg;
      }()),
      defects(std::move(defects_in)) {}

int Diagram::add_input(int dim) {
    input_dims_.push_back(dim);
    return static_cast<int>(input_dims_.size()) - 1;
}

int Diagram::add_output(int dim) {
    output_dims_.push_back(dim);
    return static_cast<int>(output_dims_.size()) - 1;
}

NodeId Diagram::add_node(GeneratorSpec spec) {
    const NodeId id = next_node_++;
    nodes_.emplace(id, Node{id, std::move(spec)});
    return id;
}

NodeId Diagram::add_node_with_id(NodeId id, GeneratorSpec spec) {
    if (nodes_.count(id) != 0) throw QcatError("duplicate node id");
    nodes_.emplace(id, Node{id, std::move(spec)});
    next_node_ = std::max(next_node_, id + 1);
    return id;
}

int Diagram::endpoint_dim(const Endpoint& e) const {
    switch (e.kind) {
        case Endpoint::Kind::boundary_input:
            return input_dims_.at(static_cast<std::size_t>(e.index));
        case Endpoint::Kind::boundary_output:
            return output_dims_.at(static_cast<std::size_t>(e.index));
        case Endpoint::Kind::node_output:
            return node(e.node).spec.output_dims().at(static_cast<std::size_t>(e.index));
        case Endpoint::Kind::node_input:
            return node(e.node).spec.input_dims().at(static_cast<std::size_t>(e.index));
    }
    throw QcatError("bad endpoint");
}

WireId Diagram::add_wire(Endpoint from, Endpoint to) {
    if (!from.is_producer()) throw QcatError("wire source must be a producer: " + from.display());
    if (to.is_producer()) throw QcatError("wire target must be a consumer: " + to.display());
    const int dim = endpoint_dim(from);
    const WireId id = next_wire_++;
    wires_.emplace(id, Wire{id, dim, from, to});
    return id;
}

WireId Diagram::add_wire_with_id(WireId id, Endpoint from, Endpoint to, int dim) {
    if (wires_.count(id) != 0) throw QcatError("duplicate wire id");
    wires_.emplace(id, Wire{id, dim, from, to});
    next_wire_ = std::max(next_wire_, id + 1);
    return id;
}

void Diagram::remove_node(NodeId id) {
    if (nodes_.erase(id) == 0) throw QcatError("remove_node: no such node");
}

void Diagram::remove_wire(WireId id) {
    if (wires_.erase(id) == 0) throw QcatError("remove_wire: no such wire");
}

void Diagram::rewire_from(WireId id, Endpoint new_from) {
    if (!new_from.is_producer()) throw QcatError("wire source must be a producer");
    wires_.at(id).from = new_from;
}

void Diagram::rewire_to(WireId id, Endpoint new_to) {
    if (new_to.is_producer()) throw QcatError("wire target must be a consumer");
    wires_.at(id).to = new_to;
}

void Diagram::replace_spec(NodeId id, GeneratorSpec spec) {
    nodes_.at(id).spec = std::move(spec);
}

const Node& Diagram::node(NodeId id) const {
    const auto it = nodes_.find(id);
    if (it == nodes_.end()) throw QcatError("no such node");
    return it->second;
}

const Wire& Diagram::wire(WireId id) const {
    const auto it = wires_.find(id);
    if (it == wires_.end()) throw QcatError("no such wire");
    return it->second;
}

std::optional<WireId> Diagram::wire_at(const Endpoint& e) const {
    for (const auto& [id, w] : wires_)
        if (w.from == e || w.to == e) return id;
    return std::nullopt;
}

void Diagram::reserve_ids(NodeId next_node, WireId next_wire) {
    next_node_ = std::max(next_node_, next_node);
    next_wire_ = std::max(next_wire_, next_wire);
}

namespace {

// Remaps node ids and boundary slots while copying a diagram into another.
struct CopyPlan {
    std::map<NodeId, NodeId> node_map;
    int input_offset = 0;
    int output_offset = 0;
    // Redirections for glued boundaries (composition).
    const std::map<int, Endpoint>* input_slot_to = nullptr;   // producer replacing boundary_input k
    const std::map<int, Endpoint>* output_slot_to = nullptr;  // consumer replacing boundary_output k
};

Endpoint remap(const Endpoint& e, const CopyPlan& plan) {
    switch (e.kind) {
        case Endpoint::Kind::node_output:
            return Endpoint::node_output(plan.node_map.at(e.node), e.index);
        case Endpoint::Kind::node_input:
            return Endpoint::node_input(plan.node_map.at(e.node), e.index);
        case Endpoint::Kind::boundary_input:
            if (plan.input_slot_to != nullptr) return plan.input_slot_to->at(e.index);
            return Endpoint::boundary_input(e.index + plan.input_offset);
        case Endpoint::Kind::boundary_output:
            if (plan.output_slot_to != nullptr) return plan.output_slot_to->at(e.index);
            return Endpoint::boundary_output(e.index + plan.output_offset);
    }
    throw QcatError("bad endpoint");
}

}  // namespace

Diagram compose_diagrams(const Diagram& g, const Diagram& f) {
    const auto& mids_f = f.output_dims();
    const auto& mids_g = g.input_dims();
    if (mids_f.size() != mids_g.size() || !std::equal(mids_f.begin(), mids_f.end(), mids_g.begin())) {
        std::ostringstream os;
        os << "compose_diagrams: boundary mismatch (f has " << mids_f.size() << " outputs, g has "
           << mids_g.size() << " inputs)";
        throw DimensionError(os.str());
    }

    Diagram out;
    for (int dim : f.input_dims()) out.add_input(dim);
    for (int dim : g.output_dims()) out.add_output(dim);
    out.set_scalar(f.scalar() * g.scalar());

    CopyPlan plan_f, plan_g;
    for (const auto& [id, n] : f.nodes()) plan_f.node_map[id] = out.add_node(n.spec);
    for (const auto& [id, n] : g.nodes()) plan_g.node_map[id] = out.add_node(n.spec);

    // f wires ending on f's output boundary wait to be glued with g wires
    // starting on g's input boundary.
    std::map<int, Endpoint> f_producers;  // slot -> producer (already remapped)
    std::map<int, Endpoint> g_consumers;  // slot -> consumer (already remapped)
    for (const auto& [id, w] : f.wires())
        if (w.to.kind == Endpoint::Kind::boundary_output)
            f_producers[w.to.index] = remap(w.from, plan_f);
    for (const auto& [id, w] : g.wires())
        if (w.from.kind == Endpoint::Kind::boundary_input)
            g_consumers[w.from.index] = remap(w.to, plan_g);

    for (const auto& [id, w] : f.wires())
        if (w.to.kind != Endpoint::Kind::boundary_output)
            out.add_wire(remap(w.from, plan_f), remap(w.to, plan_f));
    for (const auto& [id, w] : g.wires())
        if (w.from.kind != Endpoint::Kind::boundary_input)
            out.add_wire(remap(w.from, plan_g), remap(w.to, plan_g));
    for (std::size_t slot = 0; slot < mids_f.size(); ++slot) {
        const auto fp = f_producers.find(static_cast<int>(slot));
        const auto gc = g_consumers.find(static_cast<int>(slot));
        if (fp == f_producers.end() || gc == g_consumers.end()) {
            std::ostringstream os;
            os << "compose_diagrams: boundary slot " << slot << " is not wired on both sides";
            throw NetworkError(os.str());
        }
        out.add_wire(fp->second, gc->second);
    }
    return out;
}

Diagram tensor_diagrams(const Diagram& a, const Diagram& b) {
    Diagram out;
    for (int dim : a.input_dims()) out.add_input(dim);
    const int in_off = static_cast<int>(a.input_dims().size());
    for (int dim : b.input_dims()) out.add_input(dim);
    for (int dim : a.output_dims()) out.add_output(dim);
    const int out_off = static_cast<int>(a.output_dims().size());
    for (int dim : b.output_dims()) out.add_output(dim);
    out.set_scalar(a.scalar() * b.scalar());

    CopyPlan plan_a, plan_b;
    plan_b.input_offset = in_off;
    plan_b.output_offset = out_off;
    for (const auto& [id, n] : a.nodes()) plan_a.node_map[id] = out.add_node(n.spec);
    for (const auto& [id, n] : b.nodes()) plan_b.node_map[id] = out.add_node(n.spec);
    for (const auto& [id, w] : a.wires()) out.add_wire(remap(w.from, plan_a), remap(w.to, plan_a));
    for (const auto& [id, w] : b.wires()) out.add_wire(remap(w.from, plan_b), remap(w.to, plan_b));
    return out;
}

Diagram dagger_diagram(const Diagram& d) {
    Diagram out;
    for (int dim : d.output_dims()) out.add_input(dim);
    for (int dim : d.input_dims()) out.add_output(dim);
    out.set_scalar(std::conj(d.scalar()));
    for (const auto& [id, n] : d.nodes()) out.add_node_with_id(id, n.spec.daggered());
    const auto flip = [](const Endpoint& e) {
        switch (e.kind) {
            case Endpoint::Kind::node_output: return Endpoint::node_input(e.node, e.index);
            case Endpoint::Kind::node_input: return Endpoint::node_output(e.node, e.index);
            case Endpoint::Kind::boundary_input: return Endpoint::boundary_output(e.index);
            case Endpoint::Kind::boundary_output: return Endpoint::boundary_input(e.index);
        }
        throw QcatError("bad endpoint");
    };
    for (const auto& [id, w] : d.wires()) out.add_wire_with_id(id, flip(w.to), flip(w.from), w.dim);
    return out;
}

std::vector<Defect> validate(const Diagram& d) {
    std::vector<Defect> defects;
    const auto add = [&](std::string code, std::string message) {
        defects.push_back({std::move(code), std::move(message)});
    };

    for (const auto& [id, n] : d.nodes()) {
        std::ostringstream name;
        name << "node " << id << " (" << n.spec.display() << ")";
        switch (n.spec.kind) {
            case GenKind::H:
            case GenKind::NEG:
            case GenKind::Zpow:
            case GenKind::Xpow:
            case GenKind::ADD:
            case GenKind::NADD:
                if (n.spec.dim < 2) add("BadSpec", name.str() + ": gate requires dim >= 2");
                break;
            case GenKind::SWAP:
                if (n.spec.dim < 1 || n.spec.dim2 < 1)
                    add("BadSpec", name.str() + ": SWAP legs require dim >= 1");
                break;
            case GenKind::BasisState:
                if (n.spec.params.empty() || n.spec.params[0] < 0 || n.spec.params[0] >= n.spec.dim)
                    add("BadSpec", name.str() + ": basis index out of range");
                break;
            case GenKind::BellState:
                if (n.spec.params.size() < 2 || n.spec.params[0] < 0 ||
                    n.spec.params[0] >= n.spec.dim || n.spec.params[1] < 0 ||
                    n.spec.params[1] >= n.spec.dim)
                    add("BadSpec", name.str() + ": Bell labels out of range");
                break;
            case GenKind::CopyDot:
            case GenKind::PlusDot:
                if (n.spec.params.size() < 2 || n.spec.params[0] < 0 || n.spec.params[1] < 0)
                    add("BadSpec", name.str() + ": invalid dot arity");
                if (n.spec.color.has_value() && !is_unitary(*n.spec.color, kDefaultTol))
                    add("BadSpec", name.str() + ": dot color is not unitary");
                break;
            case GenKind::Box:
                if (!n.spec.box_tensor.has_value())
                    add("BadSpec", name.str() + ": box without a tensor");
                break;
            case GenKind::ScalarNode:
                if (!std::isfinite(n.spec.scalar_value.real()) ||
                    !std::isfinite(n.spec.scalar_value.imag()))
                    add("BadSpec", name.str() + ": non-finite scalar");
                break;
            default:
                break;
        }
    }
    if (!std::isfinite(d.scalar().real()) || !std::isfinite(d.scalar().imag()))
        add("NonFiniteScalar", "diagram scalar is not finite");

    // Port usage: every node leg and boundary slot exactly once.
    std::map<Endpoint, std::vector<WireId>> usage;
    for (const auto& [id, w] : d.wires()) {
        usage[w.from].push_back(id);
        usage[w.to].push_back(id);
        if (!w.from.is_producer() || w.to.is_producer())
            add("BadWireDirection", "wire " + std::to_string(id) + " does not run producer->consumer");
        if (w.from.on_node() && !d.has_node(w.from.node))
            add("MissingNode", "wire " + std::to_string(id) + " references missing node");
        if (w.to.on_node() && !d.has_node(w.to.node))
            add("MissingNode", "wire " + std::to_string(id) + " references missing node");
    }
    for (const auto& [e, ids] : usage)
        if (ids.size() > 1) {
            std::ostringstream os;
            os << "port " << e.display() << " used by wires";
            for (WireId w : ids) os << " " << w;
            add("PortReuse", os.str());
        }
    const auto check_used = [&](const Endpoint& e) {
        if (usage.find(e) == usage.end()) add("DanglingPort", "port " + e.display() + " is unused");
    };
    for (const auto& [id, n] : d.nodes()) {
        const int outs = n.spec.n_outputs(), ins = n.spec.n_inputs();
        for (int k = 0; k < outs; ++k) check_used(Endpoint::node_output(id, k));
        for (int k = 0; k < ins; ++k) check_used(Endpoint::node_input(id, k));
    }
    for (int k = 0; k < static_cast<int>(d.input_dims().size()); ++k)
        check_used(Endpoint::boundary_input(k));
    for (int k = 0; k < static_cast<int>(d.output_dims().size()); ++k)
        check_used(Endpoint::boundary_output(k));

    // Also reject wires pointing at legs that do not exist, and dim mismatches.
    for (const auto& [id, w] : d.wires()) {
        for (const Endpoint* e : {&w.from, &w.to}) {
            if (e->on_node() && d.has_node(e->node)) {
                const auto& spec = d.node(e->node).spec;
                const int count =
                    e->kind == Endpoint::Kind::node_output ? spec.n_outputs() : spec.n_inputs();
                if (e->index < 0 || e->index >= count) {
                    add("BadLeg", "wire " + std::to_string(id) + " references leg " +
                                      e->display() + " beyond the node signature");
                }
            }
            if (!e->on_node()) {
                const auto& dims = e->kind == Endpoint::Kind::boundary_input ? d.input_dims()
                                                                             : d.output_dims();
                if (e->index < 0 || e->index >= static_cast<int>(dims.size()))
                    add("BadSlot", "wire " + std::to_string(id) + " references slot " +
                                       e->display() + " beyond the boundary");
            }
        }
    }
    if (!defects.empty()) return defects;

    for (const auto& [id, w] : d.wires()) {
        const int from_dim = d.endpoint_dim(w.from);
        const int to_dim = d.endpoint_dim(w.to);
        if (from_dim != to_dim || w.dim != from_dim) {
            std::ostringstream os;
            os << "wire " << id << " joins " << w.from.display() << " (dim " << from_dim << ") to "
               << w.to.display() << " (dim " << to_dim << ") with declared dim " << w.dim;
            add("DimMismatch", os.str());
        }
    }
    return defects;
}

ComplexTensor evaluate(const Diagram& d) {
    const std::vector<Defect> defects = validate(d);
    if (!defects.empty()) throw ValidationError(defects);

    // Materialize tensors; boundary-to-boundary wires become identity nodes.
    std::vector<ComplexTensor> tensors;
    std::map<NodeId, int> index_of;
    std::map<NodeId, int> out_count;
    for (const auto& [id, n] : d.nodes()) {
        index_of[id] = static_cast<int>(tensors.size());
        out_count[id] = n.spec.n_outputs();
        tensors.push_back(tensor_of(n.spec));
    }

    std::vector<TensorEdge> edges;
    std::vector<TensorLegRef> outputs(d.output_dims().size(), TensorLegRef{-1, -1});
    std::vector<TensorLegRef> inputs(d.input_dims().size(), TensorLegRef{-1, -1});
    const auto leg_ref = [&](const Endpoint& e) -> TensorLegRef {
        const int t = index_of.at(e.node);
        if (e.kind == Endpoint::Kind::node_output) return {t, e.index};
        return {t, out_count.at(e.node) + e.index};
    };

    for (const auto& [id, w] : d.wires()) {
        const bool from_node = w.from.on_node();
        const bool to_node = w.to.on_node();
        if (from_node && to_node) {
            edges.push_back({leg_ref(w.from), leg_ref(w.to)});
        } else if (from_node) {  // node -> boundary output
            outputs[static_cast<std::size_t>(w.to.index)] = leg_ref(w.from);
        } else if (to_node) {  // boundary input -> node
            inputs[static_cast<std::size_t>(w.from.index)] = leg_ref(w.to);
        } else {  // boundary input -> boundary output: explicit identity
            const int t = static_cast<int>(tensors.size());
            tensors.push_back(ComplexTensor::identity(w.dim));
            outputs[static_cast<std::size_t>(w.to.index)] = {t, 0};
            inputs[static_cast<std::size_t>(w.from.index)] = {t, 1};
        }
    }

    std::vector<TensorLegRef> boundary;
    boundary.reserve(outputs.size() + inputs.size());
    boundary.insert(boundary.end(), outputs.begin(), outputs.end());
    boundary.insert(boundary.end(), inputs.begin(), inputs.end());

    ComplexTensor value = contract(tensors, edges, boundary);
    if (d.scalar() != Complex(1.0)) {
        for (Complex& c : value.mutable_amplitudes()) c *= d.scalar();
    }
    return value;
}

int DiagramBuilder::push(Endpoint producer, int dim) {
    rails_.push_back({producer, dim});
    open_.push_back(true);
    return static_cast<int>(rails_.size()) - 1;
}

Endpoint DiagramBuilder::take(int rail) {
    auto idx = static_cast<std::size_t>(rail);
    if (idx >= rails_.size() || !open_[idx]) throw QcatError("builder: rail is not open");
    open_[idx] = false;
    return rails_[idx].producer;
}

int DiagramBuilder::rail_from_input(int dim) {
    const int slot = d_.add_input(dim);
    return push(Endpoint::boundary_input(slot), dim);
}

int DiagramBuilder::rail_from_state(GeneratorSpec state) {
    if (state.n_outputs() != 1 || state.n_inputs() != 0)
        throw QcatError("builder: not a single-leg state");
    const int dim = state.output_dims()[0];
    const NodeId n = d_.add_node(std::move(state));
    return push(Endpoint::node_output(n, 0), dim);
}

std::pair<int, int> DiagramBuilder::rails_from_pair(GeneratorSpec pair_state) {
    if (pair_state.n_outputs() != 2 || pair_state.n_inputs() != 0)
        throw QcatError("builder: not a two-leg state");
    const auto dims = pair_state.output_dims();
    const NodeId n = d_.add_node(std::move(pair_state));
    const int a = push(Endpoint::node_output(n, 0), dims[0]);
    const int b = push(Endpoint::node_output(n, 1), dims[1]);
    return {a, b};
}

void DiagramBuilder::apply_gate(int rail, GeneratorSpec spec) {
    if (spec.n_inputs() != 1 || spec.n_outputs() != 1) throw QcatError("builder: not a 1->1 gate");
    const int dim = spec.output_dims()[0];
    const Endpoint src = take(rail);
    const NodeId n = d_.add_node(std::move(spec));
    d_.add_wire(src, Endpoint::node_input(n, 0));
    open_[static_cast<std::size_t>(rail)] = true;
    rails_[static_cast<std::size_t>(rail)] = {Endpoint::node_output(n, 0), dim};
}

void DiagramBuilder::apply_gate2(int rail_a, int rail_b, GeneratorSpec spec) {
    if (spec.n_inputs() != 2 || spec.n_outputs() != 2) throw QcatError("builder: not a 2->2 gate");
    const auto dims = spec.output_dims();
    const Endpoint src_a = take(rail_a);
    const Endpoint src_b = take(rail_b);
    const NodeId n = d_.add_node(std::move(spec));
    d_.add_wire(src_a, Endpoint::node_input(n, 0));
    d_.add_wire(src_b, Endpoint::node_input(n, 1));
    open_[static_cast<std::size_t>(rail_a)] = true;
    open_[static_cast<std::size_t>(rail_b)] = true;
    rails_[static_cast<std::size_t>(rail_a)] = {Endpoint::node_output(n, 0), dims[0]};
    rails_[static_cast<std::size_t>(rail_b)] = {Endpoint::node_output(n, 1), dims[1]};
}

void DiagramBuilder::cap_rails(int rail_a, int rail_b, GeneratorSpec effect) {
    if (effect.n_inputs() != 2 || effect.n_outputs() != 0)
        throw QcatError("builder: not a two-leg effect");
    const Endpoint a = take(rail_a);
    const Endpoint b = take(rail_b);
    const NodeId n = d_.add_node(std::move(effect));
    d_.add_wire(a, Endpoint::node_input(n, 0));
    d_.add_wire(b, Endpoint::node_input(n, 1));
}

void DiagramBuilder::terminate_effect(int rail, GeneratorSpec effect) {
    if (effect.n_inputs() != 1 || effect.n_outputs() != 0)
        throw QcatError("builder: not a single-leg effect");
    const Endpoint src = take(rail);
    const NodeId n = d_.add_node(std::move(effect));
    d_.add_wire(src, Endpoint::node_input(n, 0));
}

void DiagramBuilder::terminate_output(int rail) {
    const int dim = rails_.at(static_cast<std::size_t>(rail)).dim;
    const Endpoint src = take(rail);
    const int slot = d_.add_output(dim);
    d_.add_wire(src, Endpoint::boundary_output(slot));
}

}  // namespace qcat
