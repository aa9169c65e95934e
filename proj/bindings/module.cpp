#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcat/channels.hpp"
#include "qcat/io.hpp"
#include "qcat/protocols.hpp"
#include "qcat/soundness.hpp"

namespace py = pybind11;
using namespace qcat;

namespace {

py::array_t<Complex> tensor_to_array(const ComplexTensor& t) {
    std::vector<py::ssize_t> shape;
    for (const LegType& leg : t.legs()) shape.push_back(leg.dim);
    if (shape.empty()) shape.push_back(1);
    py::array_t<Complex> out(shape);
    std::copy(t.amplitudes().begin(), t.amplitudes().end(), out.mutable_data());
    return out;
}

ComplexTensor tensor_from_array(std::vector<int> out_dims, std::vector<int> in_dims,
                                const py::array_t<Complex, py::array::c_style | py::array::forcecast>& amps) {
    std::vector<Complex> data(amps.data(), amps.data() + amps.size());
    return ComplexTensor::from_matrix(std::move(out_dims), std::move(in_dims), std::move(data));
}

GenKind kind_or_throw(const std::string& name) {
    const auto kind = kind_from_name(name);
    if (!kind.has_value()) throw QcatError("unknown generator kind: " + name);
    return *kind;
}

py::dict trace_to_dict(const RewriteTrace& trace) {
    py::list steps;
    for (const RewriteStep& s : trace.steps) {
        py::dict step;
        step["rule"] = s.rule;
        step["match"] = s.summary;
        step["deposited"] = s.deposited;
        step["verdict"] = s.verdict;
        steps.append(std::move(step));
    }
    py::dict out;
    out["steps"] = std::move(steps);
    out["step_limit_reached"] = trace.step_limit_reached;
    return out;
}

py::dict report_to_dict(const ProtocolReport& report) {
    py::dict out;
    out["protocol"] = report.protocol;
    out["dim"] = report.dim;
    out["seed"] = report.seed;
    py::list branches;
    for (const ProtocolBranchRow& row : report.branches) {
        py::dict branch;
        branch["label"] = row.label;
        branch["probability"] = row.probability;
        branch["deviation"] = row.deviation;
        branch["kraus"] = tensor_to_array(row.kraus);
        branches.append(std::move(branch));
    }
    out["branches"] = std::move(branches);
    out["completeness_residual"] = report.completeness_residual;
    out["channel_error"] = report.channel_error;
    out["state_error"] = report.state_error;
    out["trace"] = trace_to_dict(report.trace);
    out["notes"] = report.notes;
    out["passed"] = report.passed;
    return out;
}

}  // namespace

PYBIND11_MODULE(_qcat, m) {
    m.doc() = "Qudit circuits as typed tensor-network diagrams with certified rewriting";

    py::register_exception<QcatError>(m, "QcatError");

    py::class_<ComplexTensor>(m, "ComplexTensor")
        .def(py::init([](std::vector<int> out_dims, std::vector<int> in_dims,
                         const py::array_t<Complex, py::array::c_style | py::array::forcecast>& amps) {
                 return tensor_from_array(std::move(out_dims), std::move(in_dims), amps);
             }),
             py::arg("out_dims"), py::arg("in_dims"), py::arg("amplitudes"))
        .def_static("identity", &ComplexTensor::identity)
        .def_static("scalar", &ComplexTensor::scalar)
        .def_property_readonly("out_dims", &ComplexTensor::output_dims)
        .def_property_readonly("in_dims", &ComplexTensor::input_dims)
        .def("to_numpy", &tensor_to_array)
        .def("norm", &ComplexTensor::norm)
        .def("__repr__", [](const ComplexTensor& t) {
            return "<ComplexTensor " + std::to_string(t.n_outputs()) + "->" +
                   std::to_string(t.n_inputs()) + " legs, " + std::to_string(t.size()) +
                   " amplitudes>";
        });

    m.def("kron", &kron);
    m.def("compose", &compose);
    m.def("dagger", [](const ComplexTensor& t) { return dagger(t); });
    m.def("transpose_cb", [](const ComplexTensor& t) { return transpose_cb(t); });
    m.def("equal_within", &equal_within, py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultTol);
    m.def("max_abs_diff", &max_abs_diff);
    m.def(
        "proportional_within",
        [](const ComplexTensor& a, const ComplexTensor& b, double tol) -> py::object {
            const auto factor = proportional_within(a, b, tol);
            if (!factor.has_value()) return py::none();
            return py::cast(*factor);
        },
        py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultTol);

    m.def(
        "gate",
        [](const std::string& kind, int d, std::vector<int> params) {
            return gate(kind_or_throw(kind), d, params);
        },
        py::arg("kind"), py::arg("d"), py::arg("params") = std::vector<int>{});
    m.def(
        "state",
        [](const std::string& kind, int d, std::vector<int> params) {
            return state(kind_or_throw(kind), d, params);
        },
        py::arg("kind"), py::arg("d"), py::arg("params") = std::vector<int>{});
    m.def(
        "compact",
        [](const std::string& kind, int d) { return compact(kind_or_throw(kind), d); },
        py::arg("kind"), py::arg("d"));
    m.def(
        "copy_dot",
        [](int d, int mm, int nn, py::object color) {
            if (color.is_none()) return copy_dot(d, mm, nn);
            const ComplexTensor u = color.cast<ComplexTensor>();
            return copy_dot(d, mm, nn, &u);
        },
        py::arg("d"), py::arg("m"), py::arg("n"), py::arg("color") = py::none());
    m.def("plus_dot", &plus_dot, py::arg("d"), py::arg("m"), py::arg("n"));

    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def_property_readonly("kind", [](const GeneratorSpec& s) { return kind_name(s.kind); })
        .def_readonly("dim", &GeneratorSpec::dim)
        .def_readonly("params", &GeneratorSpec::params)
        .def_readonly("adjoint", &GeneratorSpec::adjoint)
        .def("daggered", &GeneratorSpec::daggered)
        .def("tensor", [](const GeneratorSpec& s) { return tensor_of(s); })
        .def("__repr__", [](const GeneratorSpec& s) { return "<GeneratorSpec " + s.display() + ">"; });

    m.def(
        "spec",
        [](const std::string& kind_str, int d, std::vector<int> params, bool adjoint) {
            const GenKind kind = kind_or_throw(kind_str);
            GeneratorSpec s;
            switch (kind) {
                case GenKind::H:
                case GenKind::NEG:
                case GenKind::Zpow:
                case GenKind::Xpow:
                case GenKind::ADD:
                case GenKind::NADD:
                    s = GeneratorSpec::gate(kind, d, std::move(params));
                    break;
                case GenKind::SWAP:
                    s = GeneratorSpec::swap(d, params.empty() ? d : params[0]);
                    break;
                case GenKind::BasisState:
                    s = GeneratorSpec::basis_state(d, params.at(0));
                    break;
                case GenKind::PlusState:
                    s = GeneratorSpec::plus_state(d);
                    break;
                case GenKind::BellState:
                    s = GeneratorSpec::bell_state(d, params.at(0), params.at(1));
                    break;
                case GenKind::Cup:
                    s = GeneratorSpec::cup(d);
                    break;
                case GenKind::Cap:
                    s = GeneratorSpec::cap(d);
                    break;
                case GenKind::NormalizedCup:
                    s = GeneratorSpec::normalized_cup(d);
                    break;
                case GenKind::NormalizedCap:
                    s = GeneratorSpec::normalized_cap(d);
                    break;
                case GenKind::CopyDot:
                    s = GeneratorSpec::copy_dot(d, params.at(0), params.at(1));
                    break;
                case GenKind::PlusDot:
                    s = GeneratorSpec::plus_dot(d, params.at(0), params.at(1));
                    break;
                default:
                    throw QcatError("spec(): use box()/scalar_node() for payload nodes");
            }
            if (adjoint) s = s.daggered();
            return s;
        },
        py::arg("kind"), py::arg("d"), py::arg("params") = std::vector<int>{},
        py::arg("adjoint") = false);
    m.def(
        "box_spec",
        [](const ComplexTensor& tensor, const std::string& label) {
            return GeneratorSpec::box(tensor, label);
        },
        py::arg("tensor"), py::arg("label") = "f");
    m.def("recolor", &recolor, py::arg("dot"), py::arg("basis_change"));

    py::class_<Diagram>(m, "Diagram")
        .def(py::init<>())
        .def_property_readonly("input_dims", &Diagram::input_dims)
        .def_property_readonly("output_dims", &Diagram::output_dims)
        .def_property_readonly("scalar", &Diagram::scalar)
        .def_property_readonly("node_count", [](const Diagram& d) { return d.nodes().size(); })
        .def("__eq__", [](const Diagram& a, const Diagram& b) { return a == b; })
        .def("__repr__", [](const Diagram& d) {
            return "<Diagram " + std::to_string(d.nodes().size()) + " nodes, " +
                   std::to_string(d.wires().size()) + " wires>";
        });

    py::class_<DiagramBuilder>(m, "DiagramBuilder")
        .def(py::init<>())
        .def("rail_from_input", &DiagramBuilder::rail_from_input)
        .def("rail_from_state", &DiagramBuilder::rail_from_state)
        .def("rails_from_pair", &DiagramBuilder::rails_from_pair)
        .def("apply_gate", &DiagramBuilder::apply_gate)
        .def("apply_gate2", &DiagramBuilder::apply_gate2)
        .def("cap_rails", &DiagramBuilder::cap_rails)
        .def("terminate_effect", &DiagramBuilder::terminate_effect)
        .def("terminate_output", &DiagramBuilder::terminate_output)
        .def("finish", &DiagramBuilder::finish);

    m.def("compose_diagrams", &compose_diagrams);
    m.def("tensor_diagrams", &tensor_diagrams);
    m.def("dagger_diagram", &dagger_diagram);
    m.def("evaluate", &evaluate);
    m.def("validate", [](const Diagram& d) {
        std::vector<std::string> out;
        for (const Defect& defect : validate(d)) out.push_back(defect.display());
        return out;
    });

    m.def("builtin_rule_names", &builtin_rule_names);
    m.def(
        "normalize",
        [](const Diagram& d, const std::vector<std::string>& strategy, int max_steps,
           bool verify_each) {
            const NormalizeResult result = normalize(d, strategy, max_steps, verify_each);
            return py::make_tuple(result.diagram, trace_to_dict(result.trace));
        },
        py::arg("diagram"), py::arg("strategy"), py::arg("max_steps") = 100,
        py::arg("verify_each") = true);
    m.def("ghz_strategy", &ghz_strategy);
    m.def("fusion_strategy", &fusion_strategy);
    m.def("verify_step", &verify_step, py::arg("before"), py::arg("after"),
          py::arg("declared_scalar") = Complex(1.0), py::arg("tol") = kDefaultTol);
    m.def(
        "verify_builtin_rules",
        [](const std::vector<int>& dims, int trials, std::uint64_t seed) {
            const SoundnessReport report = verify_builtin_rules(dims, trials, seed);
            py::list rows;
            for (const RuleCheckRow& row : report.rows) {
                py::dict jrow;
                jrow["rule"] = row.rule;
                jrow["dim"] = row.dim;
                jrow["passed"] = row.passed;
                jrow["failed"] = row.failed;
                jrow["unverified"] = row.unverified;
                rows.append(std::move(jrow));
            }
            py::dict out;
            out["rows"] = std::move(rows);
            out["all_passed"] = report.all_passed();
            return out;
        },
        py::arg("dims") = std::vector<int>{2, 3}, py::arg("trials") = 10, py::arg("seed") = 7);

    m.def(
        "is_complete",
        [](const std::vector<ComplexTensor>& branches, double tol) {
            KrausSet set;
            for (std::size_t i = 0; i < branches.size(); ++i)
                set.branches.push_back({std::to_string(i), branches[i], {}});
            const CompletenessResult r = is_complete(set, tol);
            return py::make_tuple(r.complete, r.residual);
        },
        py::arg("branches"), py::arg("tol") = kDefaultTol);
    m.def(
        "apply_channel",
        [](const std::vector<ComplexTensor>& branches, const ComplexTensor& rho, double tol) {
            KrausSet set;
            for (std::size_t i = 0; i < branches.size(); ++i)
                set.branches.push_back({std::to_string(i), branches[i], {}});
            return apply_channel(set, DensityOperator(rho), tol).tensor();
        },
        py::arg("branches"), py::arg("rho"), py::arg("tol") = kDefaultTol);
    m.def(
        "cup_equivalence",
        [](const ComplexTensor& psi, double sv_tol) {
            const CupEquivalence r = cup_equivalence(psi, sv_tol);
            py::dict out;
            out["is_cup"] = r.is_cup;
            out["singular_values"] = r.singular_values;
            out["local_unitary"] =
                r.local_unitary.has_value() ? py::object(tensor_to_array(*r.local_unitary))
                                            : py::object(py::none());
            return out;
        },
        py::arg("psi"), py::arg("sv_tol") = 1e-6);

    m.def("run_ghz", [](int d, int n_wires) { return report_to_dict(run_ghz(d, n_wires)); },
          py::arg("d"), py::arg("n_wires") = 4);
    m.def("run_superdense",
          [](int d, int p, int q) { return report_to_dict(run_superdense(d, p, q)); }, py::arg("d"),
          py::arg("p"), py::arg("q"));
    m.def("run_teleport",
          [](int d, int trials, std::uint64_t seed) {
              return report_to_dict(run_teleport(d, trials, seed));
          },
          py::arg("d"), py::arg("trials") = 10, py::arg("seed") = 7);
    m.def("run_gate_teleport",
          [](int d, int trials, std::uint64_t seed) {
              return report_to_dict(run_gate_teleport(d, trials, seed));
          },
          py::arg("d"), py::arg("trials") = 5, py::arg("seed") = 7);
    m.def("ghz_state", &ghz_state, py::arg("d"), py::arg("n_legs") = 4);

    m.def("parse_document", &parse_document);
    m.def("serialize_document", &serialize_document, py::arg("diagram"),
          py::arg("elide_unit_wires") = true);
    m.def("export_dot", &export_dot);
}
