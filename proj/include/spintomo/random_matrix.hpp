#pragma once

#include "spintomo/linalg.hpp"
#include "spintomo/rng.hpp"

namespace spintomo {

/// Entries with independent standard-normal real and imaginary parts.
CMatrix random_complex_matrix(int rows, int cols, Rng& rng);
CVector random_unit_vector(int dim, Rng& rng);
/// Hilbert-Schmidt random density matrix G G^dagger / Tr.
CMatrix random_density_matrix(int dim, Rng& rng);
CMatrix random_hermitian(int dim, Rng& rng);

}  // namespace spintomo
