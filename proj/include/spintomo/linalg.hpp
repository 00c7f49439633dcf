#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace spintomo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

double max_abs(const CMatrix& a);
/// max |A - A^dagger|
double hermiticity_residual(const CMatrix& a);
/// max |A^dagger A - I|
double unitarity_residual(const CMatrix& a);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);

/// exp(i t H) for Hermitian H, through its spectral decomposition.
CMatrix exp_i_hermitian(const CMatrix& h, double t);

/// Applies `u` to tensor factor `site` of a state vector on a product space with factor dimensions `dims`.
void apply_local(CVector& psi, std::span<const int> dims, int site, const CMatrix& u);

}  // namespace spintomo
