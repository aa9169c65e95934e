#include "qcat/generators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace qcat {

int mod_d(long value, int d) {
    const long m = value % d;
    return static_cast<int>(m < 0 ? m + d : m);
}

Complex root_of_unity(int d, long numer) {
    const long r = mod_d(numer, d);
    if (r == 0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

std::string kind_name(GenKind kind) {
    switch (kind) {
        case GenKind::H: return "H";
        case GenKind::NEG: return "NEG";
        case GenKind::Zpow: return "Zpow";
        case GenKind::Xpow: return "Xpow";
        case GenKind::ADD: return "ADD";
        case GenKind::NADD: return "NADD";
        case GenKind::SWAP: return "SWAP";
        case GenKind::BasisState: return "BasisState";
        case GenKind::PlusState: return "PlusState";
        case GenKind::BellState: return "BellState";
        case GenKind::Cup: return "Cup";
        case GenKind::Cap: return "Cap";
        case GenKind::NormalizedCup: return "NormalizedCup";
        case GenKind::NormalizedCap: return "NormalizedCap";
        case GenKind::CopyDot: return "CopyDot";
        case GenKind::PlusDot: return "PlusDot";
        case GenKind::Box: return "Box";
        case GenKind::ScalarNode: return "ScalarNode";
    }
    throw QcatError("unknown generator kind");
}

std::optional<GenKind> kind_from_name(const std::string& name) {
    static const std::unordered_map<std::string, GenKind> table = {
        {"H", GenKind::H},
        {"NEG", GenKind::NEG},
        {"Zpow", GenKind::Zpow},
        {"Xpow", GenKind::Xpow},
        {"ADD", GenKind::ADD},
        {"NADD", GenKind::NADD},
        {"SWAP", GenKind::SWAP},
        {"BasisState", GenKind::BasisState},
        {"PlusState", GenKind::PlusState},
        {"BellState", GenKind::BellState},
        {"Cup", GenKind::Cup},
        {"Cap", GenKind::Cap},
        {"NormalizedCup", GenKind::NormalizedCup},
        {"NormalizedCap", GenKind::NormalizedCap},
        {"CopyDot", GenKind::CopyDot},
        {"PlusDot", GenKind::PlusDot},
        {"Box", GenKind::Box},
        {"ScalarNode", GenKind::ScalarNode},
    };
    const auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool is_unitary(const ComplexTensor& t, double tol) {
    if (t.output_size() != t.input_size()) return false;
    const std::size_t n = t.output_size();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += t.entry(r, k) * std::conj(t.entry(c, k));
            if (std::abs(s - (r == c ? Complex(1.0) : Complex(0.0))) > tol) return false;
        }
    return true;
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw QcatError(message);
}

std::vector<LegType> operator_legs(std::span<const int> out_dims, std::span<const int> in_dims) {
    std::vector<LegType> legs;
    legs.reserve(out_dims.size() + in_dims.size());
    for (int d : out_dims) legs.push_back({LegDirection::output, d});
    for (int d : in_dims) legs.push_back({LegDirection::input, d});
    return legs;
}

ComplexTensor kron_power(const ComplexTensor& u, int count) {
    ComplexTensor acc = ComplexTensor::scalar(1.0);
    for (int i = 0; i < count; ++i) acc = kron(acc, u);
    return acc;
}

}  // namespace

ComplexTensor gate(GenKind kind, int d, std::span<const int> params) {
    switch (kind) {
        case GenKind::H: {
            require(d >= 2, "H requires dim >= 2");
            std::vector<Complex> amps(static_cast<std::size_t>(d) * d);
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    amps[static_cast<std::size_t>(a) * d + b] =
                        scale * root_of_unity(d, static_cast<long>(a) * b);
            return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
        }
        case GenKind::NEG: {
            require(d >= 2, "NEG requires dim >= 2");
            std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
            for (int a = 0; a < d; ++a) amps[static_cast<std::size_t>(mod_d(-a, d)) * d + a] = 1.0;
            return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
        }
        case GenKind::Zpow: {
            require(d >= 2, "Zpow requires dim >= 2");
            const int a = params.empty() ? 1 : mod_d(params[0], d);
            std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
            for (int k = 0; k < d; ++k)
                amps[static_cast<std::size_t>(k) * d + k] = root_of_unity(d, static_cast<long>(k) * a);
            return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
        }
        case GenKind::Xpow: {
            require(d >= 2, "Xpow requires dim >= 2");
            const int b = params.empty() ? 1 : mod_d(params[0], d);
            std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
            for (int k = 0; k < d; ++k) amps[static_cast<std::size_t>(mod_d(k + b, d)) * d + k] = 1.0;
            return ComplexTensor::from_matrix({d}, {d}, std::move(amps));
        }
        case GenKind::ADD: {
            require(d >= 2, "ADD requires dim >= 2");
            const std::size_t dd = static_cast<std::size_t>(d) * d;
            std::vector<Complex> amps(dd * dd, Complex(0.0));
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    const std::size_t row = static_cast<std::size_t>(x) * d + mod_d(x + y, d);
                    const std::size_t col = static_cast<std::size_t>(x) * d + y;
                    amps[row * dd + col] = 1.0;
                }
            return ComplexTensor::from_matrix({d, d}, {d, d}, std::move(amps));
        }
        case GenKind::NADD: {
            require(d >= 2, "NADD requires dim >= 2");
            const std::size_t dd = static_cast<std::size_t>(d) * d;
            std::vector<Complex> amps(dd * dd, Complex(0.0));
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    const std::size_t row = static_cast<std::size_t>(x) * d + mod_d(-x - y, d);
                    const std::size_t col = static_cast<std::size_t>(x) * d + y;
                    amps[row * dd + col] = 1.0;
                }
            return ComplexTensor::from_matrix({d, d}, {d, d}, std::move(amps));
        }
        case GenKind::SWAP: {
            const int d1 = d;
            const int d2 = params.empty() ? d : params[0];
            require(d1 >= 1 && d2 >= 1, "SWAP requires dims >= 1");
            const std::size_t total = static_cast<std::size_t>(d1) * d2;
            std::vector<Complex> amps(total * total, Complex(0.0));
            for (int a = 0; a < d1; ++a)
                for (int b = 0; b < d2; ++b) {
                    const std::size_t row = static_cast<std::size_t>(b) * d1 + a;
                    const std::size_t col = static_cast<std::size_t>(a) * d2 + b;
                    amps[row * total + col] = 1.0;
                }
            return ComplexTensor::from_matrix({d2, d1}, {d1, d2}, std::move(amps));
        }
        default:
            throw QcatError("gate(): unknown gate kind " + kind_name(kind));
    }
}

ComplexTensor state(GenKind kind, int d, std::span<const int> params) {
    switch (kind) {
        case GenKind::BasisState: {
            require(!params.empty(), "BasisState requires a basis index");
            const int k = params[0];
            require(k >= 0 && k < d, "basis index out of range");
            std::vector<Complex> amps(static_cast<std::size_t>(d), Complex(0.0));
            amps[static_cast<std::size_t>(k)] = 1.0;
            return ComplexTensor(operator_legs(std::array{d}, {}), std::move(amps));
        }
        case GenKind::PlusState: {
            std::vector<Complex> amps(static_cast<std::size_t>(d),
                                      Complex(1.0 / std::sqrt(static_cast<double>(d))));
            return ComplexTensor(operator_legs(std::array{d}, {}), std::move(amps));
        }
        case GenKind::BellState: {
            require(params.size() >= 2, "BellState requires labels a, b");
            const int a = params[0], b = params[1];
            require(a >= 0 && a < d && b >= 0 && b < d, "Bell label out of range");
            std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            for (int k = 0; k < d; ++k)
                amps[static_cast<std::size_t>(k) * d + mod_d(k + b, d)] =
                    scale * root_of_unity(d, static_cast<long>(a) * k);
            return ComplexTensor(operator_legs(std::array{d, d}, {}), std::move(amps));
        }
        default:
            throw QcatError("state(): unknown state kind " + kind_name(kind));
    }
}

ComplexTensor compact(GenKind kind, int d) {
    require(d >= 1, "compact structures require dim >= 1");
    std::vector<Complex> amps(static_cast<std::size_t>(d) * d, Complex(0.0));
    const bool normalized = kind == GenKind::NormalizedCup || kind == GenKind::NormalizedCap;
    const Complex v = normalized ? Complex(1.0 / std::sqrt(static_cast<double>(d))) : Complex(1.0);
    for (int k = 0; k < d; ++k) amps[static_cast<std::size_t>(k) * d + k] = v;
    switch (kind) {
        case GenKind::Cup:
        case GenKind::NormalizedCup:
            return ComplexTensor(operator_legs(std::array{d, d}, {}), std::move(amps));
        case GenKind::Cap:
        case GenKind::NormalizedCap:
            return ComplexTensor(operator_legs({}, std::array{d, d}), std::move(amps));
        default:
            throw QcatError("compact(): unknown kind " + kind_name(kind));
    }
}

ComplexTensor copy_dot(int d, int m, int n, const ComplexTensor* color) {
    require(d >= 1, "copy dot requires dim >= 1");
    require(m >= 0 && n >= 0, "copy dot arity must be nonnegative");
    if (m + n == 0) return ComplexTensor::scalar(static_cast<double>(d));

    if (color == nullptr) {
        std::vector<int> outs(static_cast<std::size_t>(n), d), ins(static_cast<std::size_t>(m), d);
        std::size_t total = 1;
        for (int i = 0; i < m + n; ++i) total *= static_cast<std::size_t>(d);
        std::vector<Complex> amps(total, Complex(0.0));
        // |k...k><k...k| sits at the all-equal multi-index.
        std::size_t stride = 0;
        {
            std::size_t s = 1;
            for (int i = 0; i < m + n; ++i) {
                stride += s;
                s *= static_cast<std::size_t>(d);
            }
        }
        for (int k = 0; k < d; ++k) amps[static_cast<std::size_t>(k) * stride] = 1.0;
        return ComplexTensor(operator_legs(outs, ins), std::move(amps));
    }

    require(color->n_outputs() == 1 && color->n_inputs() == 1 && color->legs()[0].dim == d,
            "dot color must be a dim x dim operator");
    std::vector<int> outs(static_cast<std::size_t>(n), d), ins(static_cast<std::size_t>(m), d);
    std::size_t total = 1;
    for (int i = 0; i < m + n; ++i) total *= static_cast<std::size_t>(d);
    std::vector<Complex> amps(total, Complex(0.0));
    // Entry = sum_k prod_j U[s_j,k] * prod_i conj(U[r_i,k]).
    std::vector<int> idx(static_cast<std::size_t>(m + n), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Complex sum = 0.0;
        for (int k = 0; k < d; ++k) {
            Complex term = 1.0;
            for (int j = 0; j < n; ++j) term *= color->entry(static_cast<std::size_t>(idx[j]), k);
            for (int i = 0; i < m; ++i)
                term *= std::conj(color->entry(static_cast<std::size_t>(idx[n + i]), k));
            sum += term;
        }
        amps[flat] = sum;
        for (int axis = m + n - 1; axis >= 0; --axis) {
            if (++idx[axis] < d) break;
            idx[axis] = 0;
        }
    }
    return ComplexTensor(operator_legs(outs, ins), std::move(amps));
}

ComplexTensor plus_dot(int d, int m, int n) {
    require(d >= 1, "plus dot requires dim >= 1");
    require(m >= 0 && n >= 0, "plus dot arity must be nonnegative");
    if (m + n == 0) return ComplexTensor::scalar(static_cast<double>(d));

    std::vector<int> outs(static_cast<std::size_t>(n), d), ins(static_cast<std::size_t>(m), d);
    std::size_t total = 1;
    for (int i = 0; i < m + n; ++i) total *= static_cast<std::size_t>(d);
    std::vector<Complex> amps(total, Complex(0.0));
    const double prefactor = std::pow(static_cast<double>(d), -(m + n - 2) / 2.0);
    std::vector<int> idx(static_cast<std::size_t>(m + n), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        long sum = 0;
        for (int i = 0; i < m + n; ++i) sum += idx[i];
        if (mod_d(sum, d) == 0) amps[flat] = prefactor;
        for (int axis = m + n - 1; axis >= 0; --axis) {
            if (++idx[axis] < d) break;
            idx[axis] = 0;
        }
    }
    return ComplexTensor(operator_legs(outs, ins), std::move(amps));
}

GeneratorSpec recolor(const GeneratorSpec& dot, const ComplexTensor& basis_change) {
    require(dot.is_dot(), "recolor applies to dots only");
    if (!is_unitary(basis_change, kDefaultTol)) throw QcatError("recolor: basis change is not unitary");
    require(basis_change.legs()[0].dim == dot.dim, "recolor: basis change dimension mismatch");
    GeneratorSpec out = dot;
    if (out.color.has_value()) {
        out.color = compose(basis_change, *out.color);
    } else {
        // Recoloring by the identity keeps the dot in the computational basis.
        if (equal_within(basis_change, ComplexTensor::identity(dot.dim), kDefaultTol))
            return out;
        out.color = basis_change;
    }
    return out;
}

GeneratorSpec GeneratorSpec::gate(GenKind kind, int d, std::vector<int> params) {
    GeneratorSpec s;
    s.kind = kind;
    s.dim = d;
    switch (kind) {
        case GenKind::H:
        case GenKind::NEG:
            break;
        case GenKind::Zpow:
        case GenKind::Xpow:
            require(!params.empty(), "power gate requires an exponent");
            s.params = {mod_d(params[0], d)};
            break;
        case GenKind::ADD:
        case GenKind::NADD:
            break;
        default:
            throw QcatError("GeneratorSpec::gate: not a gate kind: " + kind_name(kind));
    }
    return s;
}

GeneratorSpec GeneratorSpec::swap(int d1, int d2) {
    GeneratorSpec s;
    s.kind = GenKind::SWAP;
    s.dim = d1;
    s.dim2 = d2;
    return s;
}

GeneratorSpec GeneratorSpec::basis_state(int d, int k) {
    GeneratorSpec s;
    s.kind = GenKind::BasisState;
    s.dim = d;
    s.params = {mod_d(k, d)};
    return s;
}

GeneratorSpec GeneratorSpec::plus_state(int d) {
    GeneratorSpec s;
    s.kind = GenKind::PlusState;
    s.dim = d;
    return s;
}

GeneratorSpec GeneratorSpec::bell_state(int d, int a, int b) {
    GeneratorSpec s;
    s.kind = GenKind::BellState;
    s.dim = d;
    s.params = {mod_d(a, d), mod_d(b, d)};
    return s;
}

GeneratorSpec GeneratorSpec::cup(int d) {
    GeneratorSpec s;
    s.kind = GenKind::Cup;
    s.dim = d;
    return s;
}

GeneratorSpec GeneratorSpec::cap(int d) {
    GeneratorSpec s;
    s.kind = GenKind::Cap;
    s.dim = d;
    return s;
}

GeneratorSpec GeneratorSpec::normalized_cup(int d) {
    GeneratorSpec s;
    s.kind = GenKind::NormalizedCup;
    s.dim = d;
    return s;
}

GeneratorSpec GeneratorSpec::normalized_cap(int d) {
    GeneratorSpec s;
    s.kind = GenKind::NormalizedCap;
    s.dim = d;
    return s;
}

GeneratorSpec GeneratorSpec::copy_dot(int d, int m, int n, std::optional<ComplexTensor> color) {
    require(m >= 0 && n >= 0, "dot arity must be nonnegative");
    GeneratorSpec s;
    s.kind = GenKind::CopyDot;
    s.dim = d;
    s.params = {m, n};
    if (color.has_value()) {
        if (!is_unitary(*color, kDefaultTol)) throw QcatError("dot color must be unitary");
        s.color = std::move(color);
    }
    return s;
}

GeneratorSpec GeneratorSpec::plus_dot(int d, int m, int n, std::optional<ComplexTensor> color) {
    GeneratorSpec s = copy_dot(d, m, n, std::move(color));
    s.kind = GenKind::PlusDot;
    return s;
}

GeneratorSpec GeneratorSpec::box(ComplexTensor tensor, std::string label) {
    GeneratorSpec s;
    s.kind = GenKind::Box;
    s.dim = tensor.legs().empty() ? 1 : tensor.legs()[0].dim;
    s.box_tensor = std::move(tensor);
    s.label = std::move(label);
    return s;
}

GeneratorSpec GeneratorSpec::scalar_node(Complex value) {
    GeneratorSpec s;
    s.kind = GenKind::ScalarNode;
    s.dim = 1;
    s.scalar_value = value;
    return s;
}

int GeneratorSpec::n_outputs() const { return static_cast<int>(output_dims().size()); }
int GeneratorSpec::n_inputs() const { return static_cast<int>(input_dims().size()); }

std::vector<int> GeneratorSpec::output_dims() const {
    std::vector<int> outs;
    switch (kind) {
        case GenKind::H:
        case GenKind::NEG:
        case GenKind::Zpow:
        case GenKind::Xpow:
            outs = {dim};
            break;
        case GenKind::ADD:
        case GenKind::NADD:
            outs = {dim, dim};
            break;
        case GenKind::SWAP:
            outs = {dim2, dim};
            break;
        case GenKind::BasisState:
        case GenKind::PlusState:
            outs = {dim};
            break;
        case GenKind::BellState:
        case GenKind::Cup:
        case GenKind::NormalizedCup:
            outs = {dim, dim};
            break;
        case GenKind::Cap:
        case GenKind::NormalizedCap:
            break;
        case GenKind::CopyDot:
        case GenKind::PlusDot:
            outs.assign(static_cast<std::size_t>(params.at(1)), dim);
            break;
        case GenKind::Box:
            return adjoint ? dagger(*box_tensor).output_dims() : box_tensor->output_dims();
        case GenKind::ScalarNode:
            break;
    }
    if (adjoint) {
        // adjoint swaps roles; recompute from the base input dims
        GeneratorSpec base = *this;
        base.adjoint = false;
        return base.input_dims();
    }
    return outs;
}

std::vector<int> GeneratorSpec::input_dims() const {
    std::vector<int> ins;
    switch (kind) {
        case GenKind::H:
        case GenKind::NEG:
        case GenKind::Zpow:
        case GenKind::Xpow:
            ins = {dim};
            break;
        case GenKind::ADD:
        case GenKind::NADD:
            ins = {dim, dim};
            break;
        case GenKind::SWAP:
            ins = {dim, dim2};
            break;
        case GenKind::BasisState:
        case GenKind::PlusState:
        case GenKind::BellState:
        case GenKind::Cup:
        case GenKind::NormalizedCup:
            break;
        case GenKind::Cap:
        case GenKind::NormalizedCap:
            ins = {dim, dim};
            break;
        case GenKind::CopyDot:
        case GenKind::PlusDot:
            ins.assign(static_cast<std::size_t>(params.at(0)), dim);
            break;
        case GenKind::Box:
            return adjoint ? dagger(*box_tensor).input_dims() : box_tensor->input_dims();
        case GenKind::ScalarNode:
            break;
    }
    if (adjoint) {
        GeneratorSpec base = *this;
        base.adjoint = false;
        return base.output_dims();
    }
    return ins;
}

bool GeneratorSpec::is_single_wire() const { return n_outputs() == 1 && n_inputs() == 1; }

GeneratorSpec GeneratorSpec::daggered() const {
    GeneratorSpec s = *this;
    switch (kind) {
        case GenKind::NEG:
        case GenKind::NADD:
            return s;  // Hermitian
        case GenKind::Zpow:
            s.params = {mod_d(-params.at(0), dim)};
            return s;
        case GenKind::Xpow:
            s.params = {mod_d(-params.at(0), dim)};
            return s;
        case GenKind::SWAP:
            std::swap(s.dim, s.dim2);
            return s;
        case GenKind::Cup:
            s.kind = GenKind::Cap;
            return s;
        case GenKind::Cap:
            s.kind = GenKind::Cup;
            return s;
        case GenKind::NormalizedCup:
            s.kind = GenKind::NormalizedCap;
            return s;
        case GenKind::NormalizedCap:
            s.kind = GenKind::NormalizedCup;
            return s;
        case GenKind::CopyDot:
        case GenKind::PlusDot:
            s.params = {params.at(1), params.at(0)};
            return s;
        case GenKind::Box:
            s.box_tensor = dagger(*box_tensor);
            if (!s.label.empty() && s.label.back() == '\'')
                s.label.pop_back();
            else
                s.label += '\'';
            return s;
        case GenKind::ScalarNode:
            s.scalar_value = std::conj(scalar_value);
            return s;
        case GenKind::H:
        case GenKind::ADD:
        case GenKind::BasisState:
        case GenKind::PlusState:
        case GenKind::BellState:
            s.adjoint = !adjoint;
            return s;
    }
    throw QcatError("daggered: unknown kind");
}

GeneratorSpec GeneratorSpec::transposed_cb() const {
    GeneratorSpec s = *this;
    switch (kind) {
        case GenKind::H:    // H^T = H (and conj(H)^T = conj(H))
        case GenKind::NEG:  // permutation with NEG^T = NEG
        case GenKind::Zpow:
        case GenKind::ScalarNode:
            return s;
        case GenKind::Xpow:
            s.params = {mod_d(-params.at(0), dim)};
            return s;
        case GenKind::NADD:
            return s;  // real and symmetric
        case GenKind::ADD:
            s.adjoint = !adjoint;  // real, so transpose equals dagger
            return s;
        case GenKind::SWAP:
            std::swap(s.dim, s.dim2);
            return s;
        case GenKind::BasisState:
        case GenKind::PlusState:
            s.adjoint = !adjoint;  // real coefficients
            return s;
        case GenKind::BellState:
            s.adjoint = !adjoint;
            s.params = {mod_d(-params.at(0), dim), params.at(1)};
            return s;
        case GenKind::Cup:
            s.kind = GenKind::Cap;
            return s;
        case GenKind::Cap:
            s.kind = GenKind::Cup;
            return s;
        case GenKind::NormalizedCup:
            s.kind = GenKind::NormalizedCap;
            return s;
        case GenKind::NormalizedCap:
            s.kind = GenKind::NormalizedCup;
            return s;
        case GenKind::CopyDot:
        case GenKind::PlusDot: {
            const bool real_color =
                !color.has_value() || equal_within(*color, [&] {
                    ComplexTensor conj_u = *color;
                    for (Complex& c : conj_u.mutable_amplitudes()) c = std::conj(c);
                    return conj_u;
                }(), kDefaultTol);
            if (real_color) {
                s.params = {params.at(1), params.at(0)};
                return s;
            }
            return GeneratorSpec::box(transpose_cb(tensor_of(*this)), "dotT");
        }
        case GenKind::Box:
            s.box_tensor = transpose_cb(adjoint ? dagger(*box_tensor) : *box_tensor);
            s.adjoint = false;
            if (s.label.size() >= 2 && s.label.ends_with("~"))
                s.label.pop_back();
            else
                s.label += '~';
            return s;
    }
    throw QcatError("transposed_cb: unknown kind");
}

std::string GeneratorSpec::display() const {
    std::ostringstream os;
    os << kind_name(kind);
    switch (kind) {
        case GenKind::Zpow:
        case GenKind::Xpow:
            os << "(" << params.at(0) << ")";
            break;
        case GenKind::BasisState:
            os << "(" << params.at(0) << ")";
            break;
        case GenKind::BellState:
            os << "(" << params.at(0) << "," << params.at(1) << ")";
            break;
        case GenKind::CopyDot:
        case GenKind::PlusDot:
            os << "(" << params.at(0) << "->" << params.at(1) << ")";
            if (color.has_value()) os << "[colored]";
            break;
        case GenKind::Box:
            os << "[" << label << "]";
            break;
        default:
            break;
    }
    if (adjoint) os << "'";
    return os.str();
}

ComplexTensor tensor_of(const GeneratorSpec& spec) {
    GeneratorSpec base = spec;
    base.adjoint = false;
    ComplexTensor t = [&]() -> ComplexTensor {
        switch (base.kind) {
            case GenKind::H:
            case GenKind::NEG:
                return gate(base.kind, base.dim);
            case GenKind::Zpow:
            case GenKind::Xpow:
            case GenKind::ADD:
            case GenKind::NADD:
                return gate(base.kind, base.dim, base.params);
            case GenKind::SWAP: {
                const int p[1] = {base.dim2};
                return gate(GenKind::SWAP, base.dim, p);
            }
            case GenKind::BasisState:
            case GenKind::PlusState:
            case GenKind::BellState:
                return state(base.kind, base.dim, base.params);
            case GenKind::Cup:
            case GenKind::Cap:
            case GenKind::NormalizedCup:
            case GenKind::NormalizedCap:
                return compact(base.kind, base.dim);
            case GenKind::CopyDot:
                return copy_dot(base.dim, base.params.at(0), base.params.at(1),
                                base.color.has_value() ? &*base.color : nullptr);
            case GenKind::PlusDot: {
                ComplexTensor plain = plus_dot(base.dim, base.params.at(0), base.params.at(1));
                if (!base.color.has_value()) return plain;
                const int m = base.params.at(0), n = base.params.at(1);
                ComplexTensor un = kron_power(*base.color, n);
                ComplexTensor um_dag = kron_power(dagger(*base.color), m);
                return compose(compose(un, plain), um_dag);
            }
            case GenKind::Box:
                return *base.box_tensor;
            case GenKind::ScalarNode:
                return ComplexTensor::scalar(base.scalar_value);
        }
        throw QcatError("tensor_of: unknown kind");
    }();
    return spec.adjoint ? dagger(t) : t;
}

}  // namespace qcat
