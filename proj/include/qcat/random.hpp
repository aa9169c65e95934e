#pragma once

#include <random>

#include "qcat/tensor.hpp"

namespace qcat {

using Rng = std::mt19937_64;

Complex random_complex_gaussian(Rng& rng);

/// Haar-ish random unitary (QR of a complex Gaussian matrix, phases fixed).
ComplexTensor random_unitary(int d, Rng& rng);
/// Random real orthogonal matrix; a valid real dot color.
ComplexTensor random_real_orthogonal(int d, Rng& rng);
/// Random symmetric unitary U = V V^T.
ComplexTensor random_symmetric_unitary(int d, Rng& rng);

/// Dense random operator with Gaussian entries (not unitary).
ComplexTensor random_operator(int d, Rng& rng);
/// Normalized random state vector on one leg.
ComplexTensor random_state_tensor(int d, Rng& rng);
/// Random density operator rho = G G-dagger / Tr(G G-dagger) over the given
/// subsystem dimensions.
ComplexTensor random_density(const std::vector<int>& dims, Rng& rng);

}  // namespace qcat
