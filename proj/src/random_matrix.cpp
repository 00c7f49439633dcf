#include "spintomo/random_matrix.hpp"

namespace spintomo {

CMatrix random_complex_matrix(int rows, int cols, Rng& rng) {
  CMatrix a(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = standard_normal(rng);
      a(i, j) = Complex(re, standard_normal(rng));
    }
  }
  return a;
}

CVector random_unit_vector(int dim, Rng& rng) {
  CVector v = random_complex_matrix(dim, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_density_matrix(int dim, Rng& rng) {
  const CMatrix g = random_complex_matrix(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix random_hermitian(int dim, Rng& rng) {
  const CMatrix g = random_complex_matrix(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace spintomo
