#include "nvsim/tomography.hpp"

#include <cmath>
#include <stdexcept>

namespace nvsim {

namespace {

const Eigen::Matrix2cd& pauli(int k) {
  static const std::array<Eigen::Matrix2cd, 4> ps = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    const Complex i(0.0, 1.0);
    p[0] = Eigen::Matrix2cd::Identity();
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -i, i, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return ps[k];
}

Eigen::Vector4cd vec2(const Eigen::Matrix2cd& m) {
  Eigen::Vector4cd v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

// chi from the channel action on the four |i><j| operator inputs
ProcessMatrix chi_from_outputs(const std::array<Eigen::Matrix2cd, 4>& out) {
  // column (j*2+i) of the superoperator is vec(E(|i><j|))
  Eigen::Matrix4cd S;
  S.col(0) = vec2(out[0]);  // |0><0| (nuclear |+1>)
  S.col(1) = vec2(out[1]);  // |1><0|
  S.col(2) = vec2(out[2]);  // |0><1|
  S.col(3) = vec2(out[3]);  // |1><1| (nuclear |0>)
  ProcessMatrix chi;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      Eigen::Matrix4cd basis;
      const Eigen::Matrix2cd pnT = pauli(n).transpose();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          basis.block(a * 2, b * 2, 2, 2) = pnT(a, b) * pauli(m);
      chi.chi(m, n) = (basis.adjoint() * S).trace() / 4.0;
    }
  return chi;
}

Eigen::Matrix2cd basis_op(int i, int j) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(i, j) = 1.0;
  return m;
}

}  // namespace

ProcessMatrix chi_ideal() {
  ProcessMatrix chi;
  chi.chi.setZero();
  chi.chi(0, 0) = 0.5;
  chi.chi(3, 3) = 0.5;
  return chi;
}

ProcessMatrix qpt_chi(const QubitChannel& channel) {
  std::array<Eigen::Matrix2cd, 4> out;
  out[0] = channel(basis_op(0, 0));
  out[1] = channel(basis_op(1, 0));
  out[2] = channel(basis_op(0, 1));
  out[3] = channel(basis_op(1, 1));
  // linearity / Hermiticity-preservation consistency
  const Eigen::Matrix2cd mix = channel(0.5 * (basis_op(0, 0) + basis_op(1, 1)));
  if ((mix - 0.5 * (out[0] + out[3])).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("qpt_chi: channel not linear");
  if ((out[2] - out[1].adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("qpt_chi: channel not Hermiticity-preserving");
  return chi_from_outputs(out);
}

double process_fidelity(const ProcessMatrix& chi_exp,
                        const ProcessMatrix& chi_id) {
  for (const auto* c : {&chi_exp, &chi_id})
    if (min_eigenvalue(0.5 * (c->chi + c->chi.adjoint())) < -1e-6)
      throw std::invalid_argument("process_fidelity: non-PSD process matrix");
  const Matrix a = 0.5 * (chi_exp.chi + chi_exp.chi.adjoint());
  const Matrix b = 0.5 * (chi_id.chi + chi_id.chi.adjoint());
  const Matrix sb = herm_sqrt(b);
  const Matrix inner = sb * a * sb;
  return herm_sqrt(0.5 * (inner + inner.adjoint())).trace().real();
}

double linear_process_fidelity(const ProcessMatrix& chi_exp,
                               const ProcessMatrix& chi_id) {
  return (chi_id.chi * chi_exp.chi).trace().real();
}

namespace {

// thermal GS electron (x) 2x2 nuclear operator, embedded in 21 levels
Matrix embed_thermal(const Eigen::Matrix2cd& x) {
  Matrix rho = Matrix::Zero(kLevels, kLevels);
  for (int ms = 0; ms < 3; ++ms)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        rho(gs_index(ms, a), gs_index(ms, b)) = x(a, b) / 3.0;
  return rho;
}

Eigen::Matrix2cd nuclear_qubit_block(const Matrix& rho21) {
  const Matrix nuc = partial_trace(rho21, 1, {7, 3});
  Eigen::Matrix2cd out;
  out << nuc(0, 0), nuc(0, 1), nuc(1, 0), nuc(1, 1);
  return out;
}

Eigen::Matrix2cd measurement_dephase(const Eigen::Matrix2cd& x) {
  const Eigen::Matrix2cd sz = pauli(3);
  return 0.5 * (x + sz * x * sz);
}

}  // namespace

QubitChannel nuclear_pump_channel(SimContext& ctx, double pump_us) {
  if (pump_us <= 0.0)
    return [](const Eigen::Matrix2cd& x) { return measurement_dephase(x); };
  auto evolve = [&ctx, pump_us](const Eigen::Matrix2cd& x) {
    Matrix rho = embed_thermal(x);
    rho = propagate(ctx.laser_on(), rho, pump_us, &ctx.cache());
    rho = propagate(ctx.laser_off(), rho, 1.0, &ctx.cache());
    return nuclear_qubit_block(rho);
  };
  // renormalize by the mean retained trace of the two basis inputs
  const double norm = 0.5 * (evolve(basis_op(0, 0)).trace().real() +
                             evolve(basis_op(1, 1)).trace().real());
  return [evolve, norm](const Eigen::Matrix2cd& x) {
    return measurement_dephase(Eigen::Matrix2cd(evolve(x) / norm));
  };
}

std::vector<std::vector<double>> nuclear_fidelity_map(
    const std::vector<double>& fields_G, const std::vector<double>& pump_us,
    const ModelParams& p, const RateTable& r) {
  if (fields_G.empty() || pump_us.empty())
    throw std::invalid_argument("nuclear_fidelity_map: empty grid");
  const ProcessMatrix ideal = chi_ideal();
  std::vector<std::vector<double>> grid(fields_G.size());
  for (std::size_t fi = 0; fi < fields_G.size(); ++fi) {
    SimContext ctx(p, r, fields_G[fi]);
    // the four operator inputs |0><0|, |1><0|, |0><1|, |1><1|, advanced
    // incrementally across the time grid
    std::array<Vector, 4> v = {vec(embed_thermal(basis_op(0, 0))),
                               vec(embed_thermal(basis_op(1, 0))),
                               vec(embed_thermal(basis_op(0, 1))),
                               vec(embed_thermal(basis_op(1, 1)))};
    double reached = 0.0;
    grid[fi].reserve(pump_us.size());
    for (double t : pump_us) {
      if (t < reached)
        throw std::invalid_argument("pump times must be non-decreasing");
      if (t > reached) {
        const Matrix& U = ctx.cache().get(ctx.laser_on(), t - reached);
        for (auto& vk : v) vk = U * vk;
        reached = t;
      }
      if (t == 0.0) {
        grid[fi].push_back(process_fidelity(ideal, ideal));
        continue;
      }
      const Matrix& Urelax = ctx.cache().get(ctx.laser_off(), 1.0);
      std::array<Eigen::Matrix2cd, 4> out;
      for (int k = 0; k < 4; ++k)
        out[k] = nuclear_qubit_block(unvec(Urelax * v[k], kLevels));
      const double norm =
          0.5 * (out[0].trace().real() + out[3].trace().real());
      for (auto& o : out) o = measurement_dephase(Eigen::Matrix2cd(o / norm));
      grid[fi].push_back(process_fidelity(chi_from_outputs(out), ideal));
    }
  }
  return grid;
}

Matrix physicalize(const Matrix& rho_raw) {
  const Matrix sym = 0.5 * (rho_raw + rho_raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  Eigen::VectorXd w = es.eigenvalues();
  const int n = static_cast<int>(w.size());
  for (int pass = 0; pass < n + 1; ++pass) {
    int npos = 0;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      if (w(k) < 0.0) w(k) = 0.0;
      if (w(k) > 0.0) { ++npos; total += w(k); }
    }
    const double excess = total - 1.0;
    if (std::abs(excess) < 1e-15 || npos == 0) break;
    bool went_negative = false;
    for (int k = 0; k < n; ++k)
      if (w(k) > 0.0) {
        w(k) -= excess / npos;
        if (w(k) < 0.0) went_negative = true;
      }
    if (!went_negative) break;
  }
  // exact unit trace
  double total = w.sum();
  if (total > 0.0) w /= total;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double state_fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows())
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  const Matrix s = herm_sqrt(rho);
  const Matrix inner = s * sigma * s;
  const double f = herm_sqrt(0.5 * (inner + inner.adjoint())).trace().real();
  return std::clamp(f * f, 0.0, 1.0);
}

QstResult qst_qutrit(SimContext& ctx, const Matrix& rho_prep,
                     double noise_sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto noisy = [&](double y) {
    return noise_sigma > 0.0 ? y * (1.0 + noise_sigma * gauss(rng)) : y;
  };

  QstResult res;
  auto [c_plus, c_minus] = qst_calibration(ctx);
  res.c_plus = c_plus;
  res.c_minus = c_minus;
  Eigen::Matrix<double, 4, 3> C;
  C << c_plus, 0.0, c_minus,       // direct readout
       c_plus, c_minus, 0.0,       // swap 0 <-> -1
       0.0, c_plus, c_minus,       // swap 0 <-> +1
       1.0, 1.0, 1.0;              // trace constraint
  if (std::abs(C.topRows(3).determinant()) < 1e-12)
    throw std::invalid_argument("qst_qutrit: singular calibration matrix");

  const double ref = ctx.reference_yield();
  auto contrast_of = [&](const Matrix& rho) {
    const double y = pl_trace(ctx.laser_on(), ctx.rates(), rho, 0.35, 0.005,
                              &ctx.cache()).yield;
    return (ref - noisy(y)) / ref;
  };

  const auto lambdas = gellmann_basis();
  Matrix rho3 = Matrix::Identity(3, 3) / 3.0;
  for (int li = 0; li < 8; ++li) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(lambdas[li]);
    // electron rotation mapping the lambda eigenbasis to populations
    Matrix u = Matrix::Identity(kLevels, kLevels);
    const Matrix ue = es.eigenvectors().adjoint();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int nmi = 0; nmi < 3; ++nmi)
          u(gs_index(a, nmi), gs_index(b, nmi)) = ue(a, b);
    Matrix rot = dephase_electron(u * rho_prep * u.adjoint());
    Eigen::Vector4d r;
    r(0) = contrast_of(rot);
    r(1) = contrast_of(adiabatic_swap(rot, Branch::kZeroMinus));
    r(2) = contrast_of(adiabatic_swap(rot, Branch::kZeroPlus));
    r(3) = 1.0;
    const Eigen::Vector3d pops =
        C.colPivHouseholderQr().solve(r);  // least squares with trace row
    res.lambda_expectations[li] = es.eigenvalues().dot(pops);
    rho3 += 0.5 * res.lambda_expectations[li] * lambdas[li];
  }
  res.rho = physicalize(rho3);
  return res;
}

}  // namespace nvsim
