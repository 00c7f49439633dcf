#include "spintomo/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace spintomo {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const CMatrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_residual(const CMatrix& a) {
  return max_abs(a.adjoint() * a - CMatrix::Identity(a.cols(), a.cols()));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

CMatrix exp_i_hermitian(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(kI * (t * w(k)));
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

void apply_local(CVector& psi, std::span<const int> dims, int site, const CMatrix& u) {
  // psi index = (outer * d + k) * inner + r, with d = dims[site].
  Eigen::Index inner = 1;
  for (std::size_t k = site + 1; k < dims.size(); ++k) inner *= dims[k];
  const Eigen::Index d = dims[site];
  const Eigen::Index outer = psi.size() / (d * inner);
  CVector column(d);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index r = 0; r < inner; ++r) {
      const Eigen::Index base = o * d * inner + r;
      for (Eigen::Index k = 0; k < d; ++k) column(k) = psi(base + k * inner);
      for (Eigen::Index k = 0; k < d; ++k) {
        Complex acc = 0.0;
        for (Eigen::Index l = 0; l < d; ++l) acc += u(k, l) * column(l);
        psi(base + k * inner) = acc;
      }
    }
  }
}

}  // namespace spintomo
