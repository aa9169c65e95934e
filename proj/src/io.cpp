#include "qcat/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qcat {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json tensor_to_json(const ComplexTensor& t) {
    json out;
    out["out_dims"] = t.output_dims();
    out["in_dims"] = t.input_dims();
    json amps = json::array();
    for (const Complex& c : t.amplitudes()) amps.push_back(complex_to_json(c));
    out["amplitudes"] = std::move(amps);
    return out;
}

ComplexTensor tensor_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("tensor payloads are objects");
    std::vector<int> outs = j.value("out_dims", std::vector<int>{});
    std::vector<int> ins = j.value("in_dims", std::vector<int>{});
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array())
        throw ParseError("tensor payload without amplitudes");
    std::vector<Complex> amps;
    amps.reserve(j["amplitudes"].size());
    for (const json& a : j["amplitudes"]) amps.push_back(complex_from_json(a));
    try {
        return ComplexTensor::from_matrix(std::move(outs), std::move(ins), std::move(amps));
    } catch (const QcatError& e) {
        throw ParseError(std::string("bad tensor payload: ") + e.what());
    }
}

json endpoint_to_json(const Endpoint& e) {
    json out;
    switch (e.kind) {
        case Endpoint::Kind::node_output:
            out["node"] = e.node;
            out["out"] = e.index;
            break;
        case Endpoint::Kind::node_input:
            out["node"] = e.node;
            out["in"] = e.index;
            break;
        case Endpoint::Kind::boundary_input:
            out["input"] = e.index;
            break;
        case Endpoint::Kind::boundary_output:
            out["output"] = e.index;
            break;
    }
    return out;
}

Endpoint endpoint_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("wire endpoints are objects");
    if (j.contains("node")) {
        const NodeId node = j["node"].get<NodeId>();
        if (j.contains("out")) return Endpoint::node_output(node, j["out"].get<int>());
        if (j.contains("in")) return Endpoint::node_input(node, j["in"].get<int>());
        throw ParseError("node endpoint needs an 'in' or 'out' leg");
    }
    if (j.contains("input")) return Endpoint::boundary_input(j["input"].get<int>());
    if (j.contains("output")) return Endpoint::boundary_output(j["output"].get<int>());
    throw ParseError("endpoint must name a node leg or a boundary slot");
}

}  // namespace

Diagram parse_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("document root must be an object");
    if (doc.value("version", 0) != 1) throw ParseError("unsupported document version");

    Diagram d;
    const int default_dim = doc.value("dim", 2);
    for (const json& dim : doc.value("inputs", json::array())) d.add_input(dim.get<int>());
    for (const json& dim : doc.value("outputs", json::array())) d.add_output(dim.get<int>());
    if (doc.contains("scalar")) d.set_scalar(complex_from_json(doc["scalar"]));

    NodeId max_node = -1;
    for (const json& jn : doc.value("nodes", json::array())) {
        if (!jn.is_object() || !jn.contains("id") || !jn.contains("kind"))
            throw ParseError("nodes need an id and a kind");
        const NodeId id = jn["id"].get<NodeId>();
        const std::string kind_str = jn["kind"].get<std::string>();
        const auto kind = kind_from_name(kind_str);
        if (!kind.has_value()) throw ParseError("unknown node kind: " + kind_str);

        GeneratorSpec spec;
        spec.kind = *kind;
        spec.dim = jn.value("dim", default_dim);
        spec.dim2 = jn.value("dim2", *kind == GenKind::SWAP ? spec.dim : 0);
        spec.params = jn.value("params", std::vector<int>{});
        spec.adjoint = jn.value("adjoint", false);
        spec.label = jn.value("label", "");
        if (jn.contains("color")) spec.color = tensor_from_json(jn["color"]);
        if (jn.contains("box")) spec.box_tensor = tensor_from_json(jn["box"]);
        if (jn.contains("value")) spec.scalar_value = complex_from_json(jn["value"]);
        if (*kind == GenKind::Box && !spec.box_tensor.has_value())
            throw ParseError("Box node without a box tensor");
        if (*kind == GenKind::Zpow || *kind == GenKind::Xpow) {
            if (spec.params.empty()) throw ParseError(kind_str + " node needs an exponent");
            spec.params = {mod_d(spec.params[0], spec.dim)};
        }
        if (spec.adjoint) {
            // Canonicalize: most daggers are expressible without the flag
            // (dots swap arity, cups become caps, Z^a becomes Z^{-a}, ...).
            GeneratorSpec base = spec;
            base.adjoint = false;
            try {
                spec = base.daggered();
            } catch (const QcatError& e) {
                throw ParseError(std::string("bad adjoint node: ") + e.what());
            }
        }
        try {
            d.add_node_with_id(id, std::move(spec));
        } catch (const QcatError& e) {
            throw ParseError(e.what());
        }
        max_node = std::max(max_node, id);
    }

    WireId max_wire = -1;
    for (const json& jw : doc.value("wires", json::array())) {
        if (!jw.is_object() || !jw.contains("id") || !jw.contains("from") || !jw.contains("to"))
            throw ParseError("wires need an id, a from endpoint and a to endpoint");
        const WireId id = jw["id"].get<WireId>();
        const Endpoint from = endpoint_from_json(jw["from"]);
        const Endpoint to = endpoint_from_json(jw["to"]);
        if (!from.is_producer() || to.is_producer())
            throw ParseError("wire " + std::to_string(id) + " does not run producer->consumer");
        int dim = jw.value("dim", 0);
        if (dim == 0) {
            try {
                dim = d.endpoint_dim(from);
            } catch (const QcatError&) {
                throw ParseError("wire " + std::to_string(id) + " references a missing endpoint");
            }
        }
        try {
            d.add_wire_with_id(id, from, to, dim);
        } catch (const QcatError& e) {
            throw ParseError(e.what());
        }
        max_wire = std::max(max_wire, id);
    }
    d.reserve_ids(max_node + 1, max_wire + 1);
    return d;
}

std::string serialize_document(const Diagram& d, bool elide_unit_wires) {
    // Dim-1 identity padding between boundary slots is dropped on request.
    std::vector<bool> drop_input(d.input_dims().size(), false);
    std::vector<bool> drop_output(d.output_dims().size(), false);
    std::vector<WireId> dropped_wires;
    if (elide_unit_wires) {
        for (const auto& [id, w] : d.wires())
            if (w.dim == 1 && w.from.kind == Endpoint::Kind::boundary_input &&
                w.to.kind == Endpoint::Kind::boundary_output) {
                drop_input[static_cast<std::size_t>(w.from.index)] = true;
                drop_output[static_cast<std::size_t>(w.to.index)] = true;
                dropped_wires.push_back(id);
            }
    }
    std::vector<int> input_slot(d.input_dims().size()), output_slot(d.output_dims().size());
    {
        int next = 0;
        for (std::size_t i = 0; i < drop_input.size(); ++i) input_slot[i] = drop_input[i] ? -1 : next++;
        next = 0;
        for (std::size_t i = 0; i < drop_output.size(); ++i)
            output_slot[i] = drop_output[i] ? -1 : next++;
    }

    ordered_json doc;
    doc["version"] = 1;
    ordered_json nodes = ordered_json::array();
    for (const auto& [id, n] : d.nodes()) {
        ordered_json jn;
        jn["id"] = id;
        jn["kind"] = kind_name(n.spec.kind);
        jn["dim"] = n.spec.dim;
        if (n.spec.kind == GenKind::SWAP) jn["dim2"] = n.spec.dim2;
        if (!n.spec.params.empty()) jn["params"] = n.spec.params;
        if (n.spec.adjoint) jn["adjoint"] = true;
        if (!n.spec.label.empty()) jn["label"] = n.spec.label;
        if (n.spec.color.has_value()) jn["color"] = tensor_to_json(*n.spec.color);
        if (n.spec.box_tensor.has_value()) jn["box"] = tensor_to_json(*n.spec.box_tensor);
        if (n.spec.kind == GenKind::ScalarNode) jn["value"] = complex_to_json(n.spec.scalar_value);
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);

    ordered_json wires = ordered_json::array();
    for (const auto& [id, w] : d.wires()) {
        if (std::find(dropped_wires.begin(), dropped_wires.end(), id) != dropped_wires.end())
            continue;
        const auto remap = [&](const Endpoint& e) {
            Endpoint out = e;
            if (e.kind == Endpoint::Kind::boundary_input)
                out.index = input_slot[static_cast<std::size_t>(e.index)];
            else if (e.kind == Endpoint::Kind::boundary_output)
                out.index = output_slot[static_cast<std::size_t>(e.index)];
            return out;
        };
        ordered_json jw;
        jw["id"] = id;
        jw["from"] = endpoint_to_json(remap(w.from));
        jw["to"] = endpoint_to_json(remap(w.to));
        jw["dim"] = w.dim;
        wires.push_back(std::move(jw));
    }
    doc["wires"] = std::move(wires);

    std::vector<int> inputs, outputs;
    for (std::size_t i = 0; i < d.input_dims().size(); ++i)
        if (!drop_input[i]) inputs.push_back(d.input_dims()[i]);
    for (std::size_t i = 0; i < d.output_dims().size(); ++i)
        if (!drop_output[i]) outputs.push_back(d.output_dims()[i]);
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["scalar"] = complex_to_json(d.scalar());
    return doc.dump(2) + "\n";
}

std::string export_dot(const Diagram& d) {
    std::ostringstream os;
    os << "digraph qcat {\n";
    os << "  rankdir=LR;\n";
    if (!d.input_dims().empty()) {
        os << "  { rank=source;";
        for (std::size_t i = 0; i < d.input_dims().size(); ++i)
            os << " in" << i << " [shape=plaintext,label=\"in " << i << "\"];";
        os << " }\n";
    }
    if (!d.output_dims().empty()) {
        os << "  { rank=sink;";
        for (std::size_t i = 0; i < d.output_dims().size(); ++i)
            os << " out" << i << " [shape=plaintext,label=\"out " << i << "\"];";
        os << " }\n";
    }
    for (const auto& [id, n] : d.nodes()) {
        std::string shape = "box";
        std::string label = n.spec.display();
        switch (n.spec.kind) {
            case GenKind::CopyDot:
                shape = "circle";
                label = n.spec.color.has_value() ? "\xE2\x80\xA2 B" : "\xE2\x80\xA2";
                break;
            case GenKind::PlusDot:
                shape = "circle";
                label = n.spec.color.has_value() ? "\xE2\x8A\x95 B" : "\xE2\x8A\x95";
                break;
            case GenKind::Cup:
            case GenKind::NormalizedCup:
                shape = "circle";
                label = "\xE2\x88\xAA";
                break;
            case GenKind::Cap:
            case GenKind::NormalizedCap:
                shape = "circle";
                label = "\xE2\x88\xA9";
                break;
            case GenKind::BasisState:
            case GenKind::PlusState:
            case GenKind::BellState:
                shape = "triangle";
                break;
            default:
                break;
        }
        os << "  n" << id << " [shape=" << shape << ",label=\"" << label << "\"];\n";
    }
    const auto endpoint_name = [](const Endpoint& e) {
        std::ostringstream name;
        switch (e.kind) {
            case Endpoint::Kind::node_output:
            case Endpoint::Kind::node_input: name << "n" << e.node; break;
            case Endpoint::Kind::boundary_input: name << "in" << e.index; break;
            case Endpoint::Kind::boundary_output: name << "out" << e.index; break;
        }
        return name.str();
    };
    for (const auto& [id, w] : d.wires()) {
        os << "  " << endpoint_name(w.from) << " -> " << endpoint_name(w.to) << " [label=\""
           << w.dim << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace qcat
