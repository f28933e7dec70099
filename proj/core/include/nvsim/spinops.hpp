#pragma once

// Complex operator algebra: spin-1 operators, Gell-Mann basis, tensor
// products, partial traces and Hermitian matrix functions.

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace nvsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Spin-1 operators in the {+1, 0, -1} ordered basis, hbar = 1.
struct Spin1 {
  Matrix sx, sy, sz;
};
Spin1 spin1_operators();

// lambda_1..lambda_8 as printed, Tr[l_i l_j] = 2 delta_ij.
std::array<Matrix, 8> gellmann_basis();

Matrix kron(const Matrix& a, const Matrix& b);

// keep = 0 traces out the second factor, keep = 1 the first.
// dims = {d_left, d_right} with d_left*d_right == rho.rows().
Matrix partial_trace(const Matrix& rho, int keep, std::array<int, 2> dims);

// Hermitian PSD square root via eigendecomposition; eigenvalues below zero
// are clipped. Throws std::invalid_argument for non-Hermitian input.
Matrix herm_sqrt(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol = 1e-10);

double min_eigenvalue(const Matrix& herm);

// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows);

}  // namespace nvsim
