#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcat/diagram.hpp"

namespace qcat {

struct KrausBranch {
    std::string label;
    ComplexTensor tensor;
    std::optional<Diagram> diagram;
};

/// A set of morphisms sharing one signature, interpreted as Kraus branches.
struct KrausSet {
    std::vector<KrausBranch> branches;

    const ComplexTensor& front_tensor() const;
    void check_signatures() const;  // throws SignatureError on mismatch
};

struct IncompleteSet : QcatError {
    using QcatError::QcatError;
};

/// A density operator: Hermitian, unit-trace, positive semidefinite tensor
/// with matching input/output signature (all within fixed tolerances).
struct DensityOperator {
    explicit DensityOperator(ComplexTensor t);  // validates
    const ComplexTensor& tensor() const { return t_; }

private:
    ComplexTensor t_;
};

struct CompletenessResult {
    bool complete = false;
    double residual = 0.0;  // max-norm of sum f'f - I
};

CompletenessResult is_complete(const KrausSet& s, double tol = kDefaultTol);

/// rho -> sum_i f_i rho f_i^dagger. The set must be complete within tol.
DensityOperator apply_channel(const KrausSet& s, const DensityOperator& rho,
                              double tol = kDefaultTol);

/// Product set {a_i (x) b_j}; both inputs must be complete.
KrausSet tensor_sets(const KrausSet& a, const KrausSet& b, double tol = kDefaultTol);
/// Composed set {b_j after a_i}; both inputs must be complete and composable.
KrausSet compose_sets(const KrausSet& a, const KrausSet& b, double tol = kDefaultTol);

/// One branch of a cap expansion with its correction exponents (a, b).
struct CapBranch {
    int a = 0;
    int b = 0;
    Diagram diagram;
};

struct CapExpansion {
    KrausSet set;  // branch tensors scaled by 1/sqrt(d)
    std::vector<CapBranch> branches;
};

/// Expands one Cap node into the d^2 Bell-costate branches: branch (a,b)
/// replaces the cap by sqrt(d)<B_ab| realized as Z^-a, X^-b gates in front of
/// the cap. Branch (0,0) evaluates to the original diagram.
CapExpansion expand_cap_to_bell_branches(const Diagram& diag, NodeId cap_node);

struct CupEquivalence {
    bool is_cup = false;
    std::optional<ComplexTensor> local_unitary;  // U with psi = (U (x) I)|cup>
    std::vector<double> singular_values;
};

/// Cup recognizer: a normalized two-leg state is a cup state iff all its
/// singular values equal 1/sqrt(d) and sqrt(d) times its coefficient matrix
/// is a symmetric unitary; that matrix is the recovered local rotation.
CupEquivalence cup_equivalence(const ComplexTensor& psi, double sv_tol = 1e-6);

}  // namespace qcat
