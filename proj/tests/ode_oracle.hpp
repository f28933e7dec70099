#pragma once

// Independent ODE reference for the matrix-exponential propagator.
//
// Adaptive Dormand-Prince 5(4) on the interaction-picture equation
// u' = e^{-Dt} M e^{Dt} u, where D holds the exact Bohr frequencies of the
// Hamiltonian (diagonal in its eigenbasis) and M the transformed dissipator.
// Removing the stiff coherent rotation analytically lets the integrator take
// dissipation-scale steps while remaining an independent oracle.

#include "nvsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvsim_test {

inline nvsim::Matrix ode_oracle(const nvsim::Liouvillian& L,
                                const nvsim::ModelParams& p, double B,
                                const nvsim::Matrix& rho0, double t_final,
                                double rtol) {
  using namespace nvsim;
  const Matrix H = full_hamiltonian(p, B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const Matrix U = es.eigenvectors();
  const Eigen::VectorXd eps = es.eigenvalues();

  const Matrix T = kron(U.transpose(), U.adjoint());  // vec -> eigenbasis
  const Matrix Tinv = kron(U.conjugate(), U);
  Vector D(kSuper);
  for (int c = 0; c < kLevels; ++c)
    for (int r = 0; r < kLevels; ++r)
      D(c * kLevels + r) = Complex(0.0, -kTwoPi * (eps(r) - eps(c)));
  Matrix M = T * L.generator * Tinv;
  M -= Matrix(D.asDiagonal());

  auto phase = [&](double t) {
    return Vector((D * t).array().exp().matrix());
  };
  auto f = [&](double t, const Vector& u) {
    const Vector e = phase(t);
    Vector w = e.cwiseProduct(u);
    w = M * w;
    return Vector(e.cwiseInverse().cwiseProduct(w));
  };

  Vector u = T * vec(rho0);  // e^{D*0} = 1
  double t = 0.0, h = 1e-4;
  const double atol = 5e-15;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                   e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640,
                   e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  int rejected_in_a_row = 0;
  while (t < t_final) {
    h = std::min(h, t_final - t);
    const Vector k1 = f(t, u);
    const Vector k2 = f(t + a21 * h, u + h * (a21 * k1));
    const Vector k3 = f(t + 0.3 * h, u + h * (a31 * k1 + a32 * k2));
    const Vector k4 = f(t + 0.8 * h, u + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 =
        f(t + (8.0 / 9) * h,
          u + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 =
        f(t + h, u + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                          a65 * k5));
    const Vector unew =
        u + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = f(t + h, unew);
    const Vector diff =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err2 = 0.0;
    for (int i = 0; i < kSuper; ++i) {
      const double sc =
          atol + rtol * std::max(std::abs(u(i)), std::abs(unew(i)));
      const double q = std::abs(diff(i)) / sc;
      err2 += q * q;
    }
    const double err = std::sqrt(err2 / kSuper);
    if (err <= 1.0) {
      t += h;
      u = unew;
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row > 50) {
      throw std::runtime_error("ode_oracle: step control stalled");
    }
    h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
  }
  const Vector v = Tinv * phase(t_final).cwiseProduct(u);
  return unvec(v, kLevels);
}

// Choi matrix of the superoperator E acting on vec(rho), hermitized.
inline nvsim::Matrix choi_matrix(const nvsim::Matrix& E) {
  using namespace nvsim;
  Matrix choi = Matrix::Zero(kSuper, kSuper);
  for (int j = 0; j < kLevels; ++j)
    for (int i = 0; i < kLevels; ++i) {
      const Matrix block = unvec(E.col(j * kLevels + i), kLevels);
      choi.block(i * kLevels, j * kLevels, kLevels, kLevels) = block;
    }
  return Matrix(0.5 * (choi + choi.adjoint()));
}

}  // namespace nvsim_test
