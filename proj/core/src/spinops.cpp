#include "nvsim/spinops.hpp"

#include <cmath>
#include <stdexcept>

namespace nvsim {

Spin1 spin1_operators() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix sx = Matrix::Zero(3, 3);
  sx(0, 1) = r; sx(1, 0) = r; sx(1, 2) = r; sx(2, 1) = r;
  Matrix sy = Matrix::Zero(3, 3);
  const Complex i(0.0, 1.0);
  sy(0, 1) = -i * r; sy(1, 0) = i * r;
  sy(1, 2) = -i * r; sy(2, 1) = i * r;
  Matrix sz = Matrix::Zero(3, 3);
  sz(0, 0) = 1.0; sz(2, 2) = -1.0;
  return {sx, sy, sz};
}

std::array<Matrix, 8> gellmann_basis() {
  std::array<Matrix, 8> l;
  for (auto& m : l) m = Matrix::Zero(3, 3);
  const Complex i(0.0, 1.0);
  l[0](0, 1) = 1; l[0](1, 0) = 1;
  l[1](0, 1) = -i; l[1](1, 0) = i;
  l[2](0, 0) = 1; l[2](1, 1) = -1;
  l[3](0, 2) = 1; l[3](2, 0) = 1;
  l[4](0, 2) = -i; l[4](2, 0) = i;
  l[5](1, 2) = 1; l[5](2, 1) = 1;
  l[6](1, 2) = -i; l[6](2, 1) = i;
  const double s = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = s; l[7](1, 1) = s; l[7](2, 2) = -2.0 * s;
  return l;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Matrix partial_trace(const Matrix& rho, int keep, std::array<int, 2> dims) {
  const int dl = dims[0], dr = dims[1];
  if (dl * dr != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (keep == 0) {
    Matrix out = Matrix::Zero(dl, dl);
    for (int a = 0; a < dl; ++a)
      for (int b = 0; b < dl; ++b)
        for (int k = 0; k < dr; ++k)
          out(a, b) += rho(a * dr + k, b * dr + k);
    return out;
  }
  Matrix out = Matrix::Zero(dr, dr);
  for (int a = 0; a < dr; ++a)
    for (int b = 0; b < dr; ++b)
      for (int k = 0; k < dl; ++k)
        out(a, b) += rho(k * dr + a, k * dr + b);
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

Matrix herm_sqrt(const Matrix& m) {
  if (!is_hermitian(m, 1e-9))
    throw std::invalid_argument("herm_sqrt: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd w = es.eigenvalues();
  for (int k = 0; k < w.size(); ++k) w(k) = std::sqrt(std::max(w(k), 0.0));
  return es.eigenvectors() * w.asDiagonal() *
         es.eigenvectors().adjoint();
}

double min_eigenvalue(const Matrix& herm) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  return es.eigenvalues().minCoeff();
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

}  // namespace nvsim
