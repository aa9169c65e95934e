#include "qcat/channels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcat {

namespace {

Eigen::MatrixXcd as_matrix(const ComplexTensor& t) {
    const auto rows = static_cast<Eigen::Index>(t.output_size());
    const auto cols = static_cast<Eigen::Index>(t.input_size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = t.entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return m;
}

constexpr double kDensityTol = 1e-9;

}  // namespace

const ComplexTensor& KrausSet::front_tensor() const {
    if (branches.empty()) throw QcatError("empty Kraus set");
    return branches.front().tensor;
}

void KrausSet::check_signatures() const {
    if (branches.empty()) throw QcatError("empty Kraus set");
    const auto& legs = branches.front().tensor.legs();
    for (const KrausBranch& b : branches)
        if (b.tensor.legs() != legs)
            throw SignatureError("Kraus branch '" + b.label + "' does not share the set signature");
}

DensityOperator::DensityOperator(ComplexTensor t) : t_(std::move(t)) {
    if (t_.output_dims() != t_.input_dims())
        throw SignatureError("density operator needs matching input/output signature");
    const Eigen::MatrixXcd m = as_matrix(t_);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kDensityTol)
        throw QcatError("density operator is not Hermitian");
    if (std::abs(m.trace() - Complex(1.0)) > kDensityTol)
        throw QcatError("density operator trace differs from 1");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kDensityTol)
        throw QcatError("density operator is not positive semidefinite");
}

CompletenessResult is_complete(const KrausSet& s, double tol) {
    s.check_signatures();
    const Eigen::MatrixXcd first = as_matrix(s.front_tensor());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(first.cols(), first.cols());
    for (const KrausBranch& b : s.branches) {
        const Eigen::MatrixXcd f = as_matrix(b.tensor);
        sum += f.adjoint() * f;
    }
    const double residual =
        (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
    return {residual <= tol, residual};
}

DensityOperator apply_channel(const KrausSet& s, const DensityOperator& rho, double tol) {
    const CompletenessResult completeness = is_complete(s, tol);
    if (!completeness.complete) {
        std::ostringstream os;
        os << "apply_channel: set is not complete (residual " << completeness.residual << ")";
        throw IncompleteSet(os.str());
    }
    const ComplexTensor& any = s.front_tensor();
    if (any.input_dims() != rho.tensor().output_dims())
        throw SignatureError("apply_channel: branch inputs do not match the state signature");

    const Eigen::MatrixXcd r = as_matrix(rho.tensor());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
        static_cast<Eigen::Index>(any.output_size()), static_cast<Eigen::Index>(any.output_size()));
    for (const KrausBranch& b : s.branches) {
        const Eigen::MatrixXcd f = as_matrix(b.tensor);
        out += f * r * f.adjoint();
    }

    std::vector<Complex> amps(static_cast<std::size_t>(out.size()));
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            amps[static_cast<std::size_t>(i) * static_cast<std::size_t>(out.cols()) +
                 static_cast<std::size_t>(j)] = out(i, j);
    return DensityOperator(
        ComplexTensor::from_matrix(any.output_dims(), any.output_dims(), std::move(amps)));
}

KrausSet tensor_sets(const KrausSet& a, const KrausSet& b, double tol) {
    for (const KrausSet* s : {&a, &b}) {
        const CompletenessResult r = is_complete(*s, tol);
        if (!r.complete) throw IncompleteSet("tensor_sets: input set is not complete");
    }
    KrausSet out;
    for (const KrausBranch& fa : a.branches)
        for (const KrausBranch& fb : b.branches)
            out.branches.push_back({fa.label + "(x)" + fb.label, kron(fa.tensor, fb.tensor), {}});
    return out;
}

KrausSet compose_sets(const KrausSet& a, const KrausSet& b, double tol) {
    for (const KrausSet* s : {&a, &b}) {
        const CompletenessResult r = is_complete(*s, tol);
        if (!r.complete) throw IncompleteSet("compose_sets: input set is not complete");
    }
    if (a.front_tensor().output_dims() != b.front_tensor().input_dims())
        throw SignatureError("compose_sets: sets are not composable");
    KrausSet out;
    for (const KrausBranch& fb : b.branches)
        for (const KrausBranch& fa : a.branches)
            out.branches.push_back(
                {fb.label + "." + fa.label, compose(fb.tensor, fa.tensor), {}});
    return out;
}

CapExpansion expand_cap_to_bell_branches(const Diagram& diag, NodeId cap_node) {
    if (!diag.has_node(cap_node) || diag.node(cap_node).spec.kind != GenKind::Cap)
        throw QcatError("expand_cap_to_bell_branches: node is not a Cap");
    const int d = diag.node(cap_node).spec.dim;

    CapExpansion out;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Diagram branch = diag;
            // sqrt(d)<B_ab| = cap after Z^-a on the first leg, X^-b on the second.
            const WireId w0 = *branch.wire_at(Endpoint::node_input(cap_node, 0));
            const WireId w1 = *branch.wire_at(Endpoint::node_input(cap_node, 1));
            if (a != 0) {
                const NodeId z = branch.add_node(
                    GeneratorSpec::gate(GenKind::Zpow, d, {mod_d(-a, d)}));
                branch.rewire_to(w0, Endpoint::node_input(z, 0));
                branch.add_wire(Endpoint::node_output(z, 0), Endpoint::node_input(cap_node, 0));
            }
            if (b != 0) {
                const NodeId x = branch.add_node(
                    GeneratorSpec::gate(GenKind::Xpow, d, {mod_d(-b, d)}));
                branch.rewire_to(w1, Endpoint::node_input(x, 0));
                branch.add_wire(Endpoint::node_output(x, 0), Endpoint::node_input(cap_node, 1));
            }
            ComplexTensor value = evaluate(branch);
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            for (Complex& c : value.mutable_amplitudes()) c *= scale;
            std::ostringstream label;
            label << "(" << a << "," << b << ")";
            out.set.branches.push_back({label.str(), std::move(value), branch});
            out.branches.push_back({a, b, std::move(branch)});
        }
    return out;
}

CupEquivalence cup_equivalence(const ComplexTensor& psi, double sv_tol) {
    if (psi.n_outputs() != 2 || psi.n_inputs() != 0)
        throw SignatureError("cup_equivalence: expected a state with two output legs");
    const int d1 = psi.legs()[0].dim, d2 = psi.legs()[1].dim;
    if (d1 != d2) throw SignatureError("cup_equivalence: legs have unequal dimensions");
    const int d = d1;
    if (std::abs(psi.norm() - 1.0) > kDefaultTol)
        throw QcatError("cup_equivalence: state is not normalized");

    Eigen::MatrixXcd c(d, d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            c(x, y) = psi.amplitudes()[static_cast<std::size_t>(x) * d + y];

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
    CupEquivalence result;
    result.singular_values.assign(svd.singularValues().data(),
                                  svd.singularValues().data() + svd.singularValues().size());

    const double target = 1.0 / std::sqrt(static_cast<double>(d));
    for (double sv : result.singular_values)
        if (std::abs(sv - target) > sv_tol) return result;

    const Eigen::MatrixXcd u = std::sqrt(static_cast<double>(d)) * c;
    if ((u - u.transpose()).cwiseAbs().maxCoeff() > sv_tol) return result;
    if ((u * u.adjoint() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > sv_tol)
        return result;

    result.is_cup = true;
    std::vector<Complex> amps(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col) amps[static_cast<std::size_t>(r) * d + col] = u(r, col);
    result.local_unitary = ComplexTensor::from_matrix({d}, {d}, std::move(amps));
    return result;
}

}  // namespace qcat
