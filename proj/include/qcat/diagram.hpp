#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcat/generators.hpp"
#include "qcat/tensor.hpp"

namespace qcat {

using NodeId = int;
using WireId = int;

/// One end of a wire. Producers are node outputs and boundary input slots;
/// consumers are node inputs and boundary output slots. Wires always run from
/// a producer to a consumer; the only way a wire reverses direction is through
/// a Cup or Cap node.
struct Endpoint {
    enum class Kind : std::uint8_t { node_output, node_input, boundary_input, boundary_output };

    Kind kind = Kind::node_output;
    NodeId node = -1;  // node endpoints only
    int index = 0;     // leg index or boundary slot

    static Endpoint node_output(NodeId n, int leg) { return {Kind::node_output, n, leg}; }
    static Endpoint node_input(NodeId n, int leg) { return {Kind::node_input, n, leg}; }
    static Endpoint boundary_input(int slot) { return {Kind::boundary_input, -1, slot}; }
    static Endpoint boundary_output(int slot) { return {Kind::boundary_output, -1, slot}; }

    bool is_producer() const {
        return kind == Kind::node_output || kind == Kind::boundary_input;
    }
    bool on_node() const { return kind == Kind::node_output || kind == Kind::node_input; }

    std::string display() const;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Wire {
    WireId id = -1;
    int dim = 1;
    Endpoint from;  // producer
    Endpoint to;    // consumer

    friend bool operator==(const Wire&, const Wire&) = default;
};

struct Node {
    NodeId id = -1;
    GeneratorSpec spec;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Defect {
    std::string code;
    std::string message;

    std::string display() const { return code + ": " + message; }
};

/// A diagram is invalid; carries the validation defects.
struct ValidationError : QcatError {
    explicit ValidationError(std::vector<Defect> defects);
    std::vector<Defect> defects;
};

/// Open graph of generator nodes and typed wires with an ordered boundary
/// and a global scalar accumulator. Diagrams are values: every operation
/// returns a new diagram.
class Diagram {
public:
    Diagram() = default;

    int add_input(int dim);
    int add_output(int dim);
    NodeId add_node(GeneratorSpec spec);
    WireId add_wire(Endpoint from, Endpoint to);

    void remove_node(NodeId id);
    void remove_wire(WireId id);
    /// Replaces one endpoint of an existing wire.
    void rewire_from(WireId id, Endpoint new_from);
    void rewire_to(WireId id, Endpoint new_to);
    void replace_spec(NodeId id, GeneratorSpec spec);

    Complex scalar() const { return scalar_; }
    void set_scalar(Complex s) { scalar_ = s; }
    void multiply_scalar(Complex s) { scalar_ *= s; }

    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::map<WireId, Wire>& wires() const { return wires_; }
    const std::vector<int>& input_dims() const { return input_dims_; }
    const std::vector<int>& output_dims() const { return output_dims_; }
    bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
    bool has_wire(WireId id) const { return wires_.count(id) != 0; }
    const Node& node(NodeId id) const;
    const Wire& wire(WireId id) const;

    /// Wire attached to the given endpoint, if any.
    std::optional<WireId> wire_at(const Endpoint& e) const;
    int endpoint_dim(const Endpoint& e) const;

    /// Restores id counters after external construction (parsing).
    void reserve_ids(NodeId next_node, WireId next_wire);
    NodeId add_node_with_id(NodeId id, GeneratorSpec spec);
    WireId add_wire_with_id(WireId id, Endpoint from, Endpoint to, int dim);

    /// Structural equality: nodes, wires, boundary and scalar (id counters
    /// are bookkeeping and do not participate).
    friend bool operator==(const Diagram& a, const Diagram& b) {
        return a.nodes_ == b.nodes_ && a.wires_ == b.wires_ && a.input_dims_ == b.input_dims_ &&
               a.output_dims_ == b.output_dims_ && a.scalar_ == b.scalar_;
    }

private:
    std::map<NodeId, Node> nodes_;
    std::map<WireId, Wire> wires_;
    std::vector<int> input_dims_;
    std::vector<int> output_dims_;
    Complex scalar_ = 1.0;
    NodeId next_node_ = 0;
    WireId next_wire_ = 0;
};

/// Boundary-to-boundary gluing: f's outputs feed g's inputs; scalars multiply.
Diagram compose_diagrams(const Diagram& g, const Diagram& f);

/// Disjoint union with boundaries concatenated a-then-b; scalars multiply.
Diagram tensor_diagrams(const Diagram& a, const Diagram& b);

/// Mirrors the diagram: inputs and outputs swap, every node spec is daggered,
/// the scalar is conjugated. Node and wire ids are preserved.
Diagram dagger_diagram(const Diagram& d);

/// All type-invariant violations, empty iff the diagram is well formed.
std::vector<Defect> validate(const Diagram& d);

/// Dense value of the diagram: scalar times the contraction of all node
/// tensors over the wires, boundary ordered outputs-then-inputs.
ComplexTensor evaluate(const Diagram& d);

/// Convenience wrapper for building left-to-right circuits and small
/// protocol diagrams.
class DiagramBuilder {
public:
    /// A rail is an open producer endpoint waiting for a consumer.
    struct Rail {
        Endpoint producer;
        int dim;
    };

    Diagram& diagram() { return d_; }
    const Diagram& diagram() const { return d_; }

    /// New rail fed by a fresh boundary input slot.
    int rail_from_input(int dim);
    /// New rail fed by a state-like generator with one output leg.
    int rail_from_state(GeneratorSpec state);
    /// Two rails from a two-output generator (cups, Bell states).
    std::pair<int, int> rails_from_pair(GeneratorSpec pair_state);

    /// Applies a 1-to-1 generator on a rail.
    void apply_gate(int rail, GeneratorSpec spec);
    /// Applies a 2-to-2 generator on two rails (first leg on `rail_a`).
    void apply_gate2(int rail_a, int rail_b, GeneratorSpec spec);
    /// Consumes two rails with a two-input effect (caps, Bell costates).
    void cap_rails(int rail_a, int rail_b, GeneratorSpec effect);
    /// Consumes one rail with a one-input effect.
    void terminate_effect(int rail, GeneratorSpec effect);
    /// Sends a rail to a fresh boundary output slot.
    void terminate_output(int rail);

    int rail_dim(int rail) const { return rails_.at(static_cast<std::size_t>(rail)).dim; }
    Diagram finish() { return std::move(d_); }

private:
    Endpoint take(int rail);
    int push(Endpoint producer, int dim);

    Diagram d_;
    std::vector<Rail> rails_;
    std::vector<bool> open_;
};

}  // namespace qcat
