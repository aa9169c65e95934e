#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcat {

using Complex = std::complex<double>;
/// A morphism from the tensor unit to itself is just a complex number.
using Scalar = Complex;

/// Default absolute, elementwise comparison tolerance used throughout.
inline constexpr double kDefaultTol = 1e-9;

struct QcatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Leg dimensions disagree where they must match.
struct DimensionError : QcatError {
    using QcatError::QcatError;
};

/// Two tensors do not share a leg signature.
struct SignatureError : QcatError {
    using QcatError::QcatError;
};

/// A tensor network is malformed (dangling or doubly used legs, ...).
struct NetworkError : QcatError {
    using QcatError::QcatError;
};

/// A network exceeds the size cap for dense evaluation.
struct NetworkTooLarge : QcatError {
    using QcatError::QcatError;
};

enum class LegDirection : std::uint8_t { input, output };

/// One leg of a tensor: a direction and a Hilbert-space dimension.
struct LegType {
    LegDirection direction;
    int dim;

    friend bool operator==(const LegType&, const LegType&) = default;
};

/// Dense multi-leg complex array. Legs are kept in canonical order:
/// all output legs first, then all input legs. Amplitudes are linearized
/// big-endian over the leg order (the first leg is the most significant).
class ComplexTensor {
public:
    ComplexTensor() : amplitudes_(1, Complex(0.0)) {}
    ComplexTensor(std::vector<LegType> legs, std::vector<Complex> amplitudes);

    static ComplexTensor scalar(Complex value);
    static ComplexTensor identity(int dim);
    /// Builds an operator from row-major matrix entries; rows run over the
    /// output multi-index, columns over the input multi-index.
    static ComplexTensor from_matrix(std::vector<int> out_dims, std::vector<int> in_dims,
                                     std::vector<Complex> entries);

    const std::vector<LegType>& legs() const { return legs_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::vector<Complex>& mutable_amplitudes() { return amplitudes_; }
    std::size_t size() const { return amplitudes_.size(); }

    int n_outputs() const { return n_outputs_; }
    int n_inputs() const { return static_cast<int>(legs_.size()) - n_outputs_; }
    std::vector<int> output_dims() const;
    std::vector<int> input_dims() const;
    std::size_t output_size() const;  // product of output dims
    std::size_t input_size() const;   // product of input dims

    bool is_scalar() const { return legs_.empty(); }
    Complex scalar_value() const;

    std::size_t flat_index(std::span<const int> indices) const;
    Complex at(std::span<const int> indices) const { return amplitudes_[flat_index(indices)]; }
    Complex& at(std::span<const int> indices) { return amplitudes_[flat_index(indices)]; }

    /// Matrix view accessors: row = big-endian output index, col = big-endian input index.
    Complex entry(std::size_t row, std::size_t col) const { return amplitudes_[row * input_size() + col]; }
    Complex& entry(std::size_t row, std::size_t col) { return amplitudes_[row * input_size() + col]; }

    double max_abs() const;
    double norm() const;  // Frobenius norm

    friend bool operator==(const ComplexTensor&, const ComplexTensor&) = default;

private:
    std::vector<LegType> legs_;
    std::vector<Complex> amplitudes_;
    int n_outputs_ = 0;
};

/// Kronecker product: a's outputs, then b's outputs; a's inputs, then b's inputs.
ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b);

/// Composition g∘f of linear maps in the computational basis.
/// Requires f's output dims to equal g's input dims, in order.
ComplexTensor compose(const ComplexTensor& g, const ComplexTensor& f);

/// Hermitian adjoint: inputs and outputs swapped, entries conjugate-transposed.
ComplexTensor dagger(const ComplexTensor& t);

/// Transpose in the computational basis: like dagger but without conjugation.
ComplexTensor transpose_cb(const ComplexTensor& t);

double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b);

/// True iff the tensors share a leg signature and agree elementwise within tol.
bool equal_within(const ComplexTensor& a, const ComplexTensor& b, double tol = kDefaultTol);

/// Returns lambda with a = lambda*b within tol, if such a factor exists.
/// lambda is read off at the largest-magnitude entry of b.
std::optional<Complex> proportional_within(const ComplexTensor& a, const ComplexTensor& b,
                                           double tol = kDefaultTol);

/// A leg of one node in a tensor network.
struct TensorLegRef {
    int node;
    int leg;

    friend bool operator==(const TensorLegRef&, const TensorLegRef&) = default;
};

/// An internal edge joining two node legs of equal dimension.
struct TensorEdge {
    TensorLegRef a;
    TensorLegRef b;
};

/// Contracts the network formed by `nodes` and `edges`. Every node leg must be
/// used exactly once, either by one edge endpoint or one boundary entry. The
/// result's legs follow the boundary order, which must be canonical (outputs
/// before inputs). The value is independent of the contraction order; when
/// `edge_order` is given the edges are eliminated in exactly that sequence,
/// otherwise a greedy smallest-intermediate heuristic picks the order.
ComplexTensor contract(std::span<const ComplexTensor> nodes, std::span<const TensorEdge> edges,
                       std::span<const TensorLegRef> boundary,
                       const std::vector<std::size_t>* edge_order = nullptr);

}  // namespace qcat
