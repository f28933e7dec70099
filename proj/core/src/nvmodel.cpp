#include "nvsim/nvmodel.hpp"

#include <stdexcept>

namespace nvsim {

namespace {

Matrix spin_hamiltonian(double D, double a_par, double a_perp,
                        const ModelParams& p, double B) {
  const auto [sx, sy, sz] = spin1_operators();
  const Matrix id3 = Matrix::Identity(3, 3);
  Matrix h = D * kron(sz * sz, id3);
  h += p.gamma_e * B * kron(sz, id3);
  h += p.P_quad * kron(id3, sz * sz);
  h += p.gamma_n * B * kron(id3, sz);
  h += a_par * kron(sz, sz);
  h += a_perp * (kron(sx, sx) + kron(sy, sy));
  return h;
}

}  // namespace

Matrix gs_hamiltonian(const ModelParams& p, double B) {
  return spin_hamiltonian(p.D_gs, p.C_par, p.C_perp, p, B);
}

Matrix es_hamiltonian(const ModelParams& p, double B) {
  return spin_hamiltonian(p.D_es, p.A_par, p.A_perp, p, B);
}

Matrix singlet_hamiltonian(const ModelParams& p, double B) {
  const auto [sx, sy, sz] = spin1_operators();
  (void)sx; (void)sy;
  return p.P_quad * sz * sz + p.gamma_n * B * sz;
}

Matrix full_hamiltonian(const ModelParams& p, double B) {
  Matrix h = Matrix::Zero(kLevels, kLevels);
  h.block(0, 0, 9, 9) = gs_hamiltonian(p, B);
  h.block(9, 9, 9, 9) = es_hamiltonian(p, B);
  h.block(18, 18, 3, 3) = singlet_hamiltonian(p, B);
  return h;
}

std::vector<JumpOperator> jump_operators(const RateTable& r,
                                         double laser_scale) {
  if (laser_scale < 0.0) throw std::invalid_argument("negative laser_scale");
  for (double g : {r.Gamma0, r.Gamma1, r.Gamma2, r.Gamma3, r.Gamma4,
                   r.Gamma5, r.Gamma6, r.Gamma7, r.T1_gs, r.T2_gs, r.T1_es,
                   r.T2_es})
    if (g < 0.0) throw std::invalid_argument("negative rate");

  std::vector<JumpOperator> ops;
  auto arrow = [&](double rate, auto&& pairs) {
    Matrix L = Matrix::Zero(kLevels, kLevels);
    for (auto [to, from] : pairs) L(to, from) = 1.0;
    ops.push_back({rate, std::move(L)});
  };
  using P = std::pair<int, int>;
  std::vector<P> up, down;
  for (int ms = 0; ms < 3; ++ms)
    for (int mi = 0; mi < 3; ++mi) {
      up.emplace_back(es_index(ms, mi), gs_index(ms, mi));
      down.emplace_back(gs_index(ms, mi), es_index(ms, mi));
    }
  if (laser_scale > 0.0) arrow(laser_scale * r.Gamma0, up);
  arrow(r.Gamma1, down);

  auto isc = [&](double rate, int ms) {
    std::vector<P> ps;
    for (int mi = 0; mi < 3; ++mi)
      ps.emplace_back(singlet_index(mi), es_index(ms, mi));
    arrow(rate, ps);
  };
  isc(r.Gamma2, 0);  // m_S = +1
  isc(r.Gamma3, 2);  // m_S = -1
  isc(r.Gamma4, 1);  // m_S = 0

  auto singlet_decay = [&](double rate, int ms) {
    std::vector<P> ps;
    for (int mi = 0; mi < 3; ++mi)
      ps.emplace_back(gs_index(ms, mi), singlet_index(mi));
    arrow(rate, ps);
  };
  singlet_decay(r.Gamma5, 0);
  singlet_decay(r.Gamma6, 2);
  singlet_decay(r.Gamma7, 1);

  // Electron T1: directed hops between each ordered sublevel pair at
  // 1/(3 T1); gives exactly exp(-t/T1) population relaxation.
  for (auto [base, t1] : {std::pair{0, r.T1_gs}, std::pair{3, r.T1_es}})
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        std::vector<P> ps;
        for (int mi = 0; mi < 3; ++mi)
          ps.emplace_back((base + a) * 3 + mi, (base + b) * 3 + mi);
        arrow(1.0 / (3.0 * t1), ps);
      }
  // Electron T2: per-sublevel projectors, identity on the nucleus; gives
  // exactly exp(-t/T2) coherence decay between distinct sublevels.
  for (auto [base, t2] : {std::pair{0, r.T2_gs}, std::pair{3, r.T2_es}})
    for (int ms = 0; ms < 3; ++ms) {
      std::vector<P> ps;
      for (int mi = 0; mi < 3; ++mi)
        ps.emplace_back((base + ms) * 3 + mi, (base + ms) * 3 + mi);
      arrow(1.0 / t2, ps);
    }
  return ops;
}

Matrix hamiltonian_superop(const Matrix& H) {
  const int n = static_cast<int>(H.rows());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix Hw = kTwoPi * H;  // MHz -> rad/us
  return Complex(0.0, -1.0) * (kron(id, Hw) - kron(Hw.transpose(), id));
}

void add_dissipator(Matrix& G, double rate, const Matrix& L) {
  const int n = static_cast<int>(L.rows());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix LdL = L.adjoint() * L;
  G += rate * (kron(L.conjugate(), L) -
               0.5 * (kron(id, LdL) + kron(LdL.transpose(), id)));
}

namespace {
std::uint64_t next_liouvillian_id() {
  static std::uint64_t counter = 0;
  return ++counter;
}
}  // namespace

Liouvillian build_liouvillian(const ModelParams& p, const RateTable& r,
                              double B, double laser_scale) {
  Liouvillian L;
  L.generator = hamiltonian_superop(full_hamiltonian(p, B));
  for (const auto& [rate, op] : jump_operators(r, laser_scale))
    add_dissipator(L.generator, rate, op);
  L.laser_on = laser_scale > 0.0;
  L.field_G = B;
  L.laser_scale = laser_scale;
  L.id = next_liouvillian_id();
  return L;
}

double find_eslac(const ModelParams& p) {
  auto gap = [&](double B) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(es_hamiltonian(p, B));
    const auto& V = es.eigenvectors();
    // eigenvectors adiabatically connected to |0,0> (row 4) and |-1,+1>
    // (row 6), identified by maximum overlap
    int i00 = 0, im1p1 = 0;
    for (int k = 1; k < 9; ++k) {
      if (std::abs(V(4, k)) > std::abs(V(4, i00))) i00 = k;
      if (std::abs(V(6, k)) > std::abs(V(6, im1p1))) im1p1 = k;
    }
    return std::abs(es.eigenvalues()(i00) - es.eigenvalues()(im1p1));
  };
  double best_B = 400.0, best = gap(400.0);
  for (double B = 400.0; B <= 620.0 + 1e-9; B += 0.05) {
    double g = gap(B);
    if (g < best) { best = g; best_B = B; }
  }
  // local refinement to 0.01 G
  double lo = best_B - 0.05, hi = best_B + 0.05;
  for (double B = lo; B <= hi + 1e-9; B += 0.01) {
    double g = gap(B);
    if (g < best) { best = g; best_B = B; }
  }
  return best_B;
}

}  // namespace nvsim
