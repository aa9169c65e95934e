#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcat/tensor.hpp"

namespace qcat {

enum class GenKind {
    H,
    NEG,
    Zpow,
    Xpow,
    ADD,
    NADD,
    SWAP,
    BasisState,
    PlusState,
    BellState,
    Cup,
    Cap,
    NormalizedCup,
    NormalizedCap,
    CopyDot,
    PlusDot,
    Box,
    ScalarNode,
};

std::string kind_name(GenKind kind);
std::optional<GenKind> kind_from_name(const std::string& name);

/// Symbolic description of a diagram node. Parameter meaning by kind:
///   Zpow/Xpow: {exponent}; BasisState: {k}; BellState: {a, b};
///   CopyDot/PlusDot: {m, n} (inputs, outputs). Exponents and basis indices
/// are stored reduced mod dim. `adjoint` marks the dagger of the base
/// generator (used for H, ADD and for turning states into effects).
struct GeneratorSpec {
    GenKind kind = GenKind::Box;
    int dim = 2;
    int dim2 = 0;  // SWAP only: dimension of the second wire
    std::vector<int> params;
    bool adjoint = false;
    std::optional<ComplexTensor> color;  // dots only: basis-change unitary U_B
    std::optional<ComplexTensor> box_tensor;
    Complex scalar_value = 1.0;  // ScalarNode only
    std::string label;           // Box only

    static GeneratorSpec gate(GenKind kind, int d, std::vector<int> params = {});
    static GeneratorSpec swap(int d1, int d2);
    static GeneratorSpec basis_state(int d, int k);
    static GeneratorSpec plus_state(int d);
    static GeneratorSpec bell_state(int d, int a, int b);
    static GeneratorSpec cup(int d);
    static GeneratorSpec cap(int d);
    static GeneratorSpec normalized_cup(int d);
    static GeneratorSpec normalized_cap(int d);
    static GeneratorSpec copy_dot(int d, int m, int n,
                                  std::optional<ComplexTensor> color = std::nullopt);
    static GeneratorSpec plus_dot(int d, int m, int n,
                                  std::optional<ComplexTensor> color = std::nullopt);
    static GeneratorSpec box(ComplexTensor tensor, std::string label = "f");
    static GeneratorSpec scalar_node(Complex value);

    int n_outputs() const;
    int n_inputs() const;
    std::vector<int> output_dims() const;
    std::vector<int> input_dims() const;

    bool is_dot() const { return kind == GenKind::CopyDot || kind == GenKind::PlusDot; }
    bool is_single_wire() const;  // one input and one output leg
    bool is_state() const { return n_inputs() == 0 && n_outputs() == 1; }
    bool is_effect() const { return n_outputs() == 0 && n_inputs() == 1; }

    /// Dagger of this generator, expressed again as a GeneratorSpec.
    GeneratorSpec daggered() const;
    /// Computational-basis transpose (no conjugation), as used when sliding
    /// a node around a cup or a cap.
    GeneratorSpec transposed_cb() const;

    /// Human-readable short form, e.g. "Zpow(2)" or "CopyDot(1->2)".
    std::string display() const;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// The semantic value of a generator as a dense tensor.
ComplexTensor tensor_of(const GeneratorSpec& spec);

/// Named gate constructors (kinds: H, NEG, Zpow, Xpow, ADD, NADD, SWAP).
ComplexTensor gate(GenKind kind, int d, std::span<const int> params = {});
/// Named state constructors (kinds: BasisState, PlusState, BellState).
ComplexTensor state(GenKind kind, int d, std::span<const int> params = {});
/// Compact structures (kinds: Cup, Cap, NormalizedCup, NormalizedCap).
ComplexTensor compact(GenKind kind, int d);
ComplexTensor copy_dot(int d, int m, int n, const ComplexTensor* color = nullptr);
ComplexTensor plus_dot(int d, int m, int n);

/// Changes the basis a dot operates in by the unitary U_B.
GeneratorSpec recolor(const GeneratorSpec& dot, const ComplexTensor& basis_change);

bool is_unitary(const ComplexTensor& t, double tol = kDefaultTol);

int mod_d(long value, int d);
Complex root_of_unity(int d, long numer);

}  // namespace qcat
