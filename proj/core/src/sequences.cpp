#include "nvsim/sequences.hpp"

#include "nvsim/fitting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nvsim {

namespace {
constexpr double kHardRabi = 12.0;   // MHz, hard electron pulses
constexpr double kCnotRabi = 0.8;    // MHz
constexpr double kCnotDur = 0.625;   // us
constexpr double kRelax = 1.0;       // us laser-off relaxation after pumping

int branch_orbital(Branch b) { return b == Branch::kZeroMinus ? 2 : 0; }
}  // namespace

Liouvillian mw_liouvillian(const ModelParams& p, const RateTable& r, double B,
                           const MWSeg& seg, bool dissipation) {
  const Matrix hgs = gs_hamiltonian(p, B);
  const int tgt = branch_orbital(seg.branch);
  // carrier on the m_I=0 hyperfine line of the addressed branch
  const double fc = (hgs(tgt * 3 + 1, tgt * 3 + 1) - hgs(4, 4)).real() +
                    seg.carrier_detuning;
  // Rotating frame, RWA: keep only the electron-diagonal GS blocks.
  Matrix h = Matrix::Zero(kLevels, kLevels);
  for (int ms = 0; ms < 3; ++ms)
    h.block(ms * 3, ms * 3, 3, 3) = hgs.block(ms * 3, ms * 3, 3, 3);
  const Complex drive =
      0.5 * seg.rabi * std::exp(Complex(0.0, seg.phase));
  for (int n = 0; n < 3; ++n) {
    h(tgt * 3 + n, tgt * 3 + n) -= fc;
    h(3 + n, tgt * 3 + n) += drive;
    h(tgt * 3 + n, 3 + n) += std::conj(drive);
  }
  h.block(9, 9, 9, 9) = es_hamiltonian(p, B);
  h.block(18, 18, 3, 3) = singlet_hamiltonian(p, B);

  Liouvillian L;
  L.generator = hamiltonian_superop(h);
  if (dissipation)
    for (const auto& [rate, op] : jump_operators(r, 0.0))
      add_dissipator(L.generator, rate, op);
  L.laser_on = false;
  L.field_G = B;
  L.laser_scale = 0.0;
  static std::uint64_t mw_ids = 1uLL << 40;  // disjoint from build_liouvillian
  L.id = ++mw_ids;
  return L;
}

SimContext::SimContext(const ModelParams& p, const RateTable& r, double B,
                       bool dissipation)
    : p_(p), r_(r), B_(B), dissipation_(dissipation) {}

const Liouvillian& SimContext::laser(double scale) {
  auto it = lasers_.find(scale);
  if (it == lasers_.end()) {
    RateTable r = r_;
    if (!dissipation_) {
      // keep the generator purely coherent for unitarity checks
      r.Gamma1 = r.Gamma2 = r.Gamma3 = r.Gamma4 = 0.0;
      r.Gamma5 = r.Gamma6 = r.Gamma7 = 0.0;
      r.T1_gs = r.T2_gs = r.T1_es = r.T2_es =
          std::numeric_limits<double>::infinity();
    }
    it = lasers_.emplace(scale, build_liouvillian(p_, r, B_, scale)).first;
  }
  return it->second;
}

const Liouvillian& SimContext::mw(const MWSeg& seg) {
  const auto key = std::make_tuple(static_cast<int>(seg.branch), seg.rabi,
                                   seg.carrier_detuning, seg.phase);
  auto it = mws_.find(key);
  if (it == mws_.end())
    it = mws_.emplace(key, mw_liouvillian(p_, r_, B_, seg, dissipation_))
             .first;
  return it->second;
}

const Matrix& SimContext::init_state() {
  if (!init_) {
    Matrix rho = Matrix::Identity(kLevels, kLevels) / kLevels;
    rho = propagate(laser_on(), rho, 20.0, &cache_);
    rho = propagate(laser_off(), rho, kRelax, &cache_);
    init_ = rho;
  }
  return *init_;
}

double SimContext::reference_yield() {
  if (!ref_)
    ref_ = pl_trace(laser_on(), r_, basis_state(1, 0), 0.35, 0.005,
                    &cache_).yield;
  return *ref_;
}

Matrix dephase_electron(const Matrix& rho) {
  Matrix out = rho;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) out.block(a * 3, b * 3, 3, 3).setZero();
  return out;
}

Matrix adiabatic_swap(const Matrix& rho, Branch branch) {
  const int tgt = branch_orbital(branch);
  Matrix u = Matrix::Identity(kLevels, kLevels);
  for (int n = 0; n < 3; ++n) {
    const int a = gs_index(1, n), b = gs_index(tgt, n);
    u(a, a) = 0.0; u(b, b) = 0.0;
    u(a, b) = 1.0; u(b, a) = 1.0;
  }
  return u * rho * u.adjoint();
}

Matrix nuclear_rotation(const Matrix& rho, double angle, double axis_phase) {
  Matrix u = Matrix::Identity(kLevels, kLevels);
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  const Complex i(0.0, 1.0);
  const int a = gs_index(1, 0), b = gs_index(1, 1);  // |0,+1>, |0,0>
  u(a, a) = c; u(b, b) = c;
  u(a, b) = -i * s * std::exp(-i * axis_phase);
  u(b, a) = -i * s * std::exp(i * axis_phase);
  return u * rho * u.adjoint();
}

Matrix prepare_thermal(const Matrix& rho, SimContext& ctx) {
  const double cp = ctx.params().C_par;
  const MWSeg first{Branch::kZeroMinus, kHardRabi, -cp, 0.0,
                    1.23 / (kTwoPi * kHardRabi)};
  const MWSeg second{Branch::kZeroPlus, kHardRabi, cp, 0.0,
                     (kPi / 2.0) / (kTwoPi * kHardRabi)};
  Matrix out = propagate(ctx.mw(first), rho, first.dur, &ctx.cache());
  out = propagate(ctx.mw(second), out, second.dur, &ctx.cache());
  return dephase_electron(out);
}

double prepare_thermal_duration() {
  return (1.23 + kPi / 2.0) / (kTwoPi * kHardRabi);
}

Matrix cnot_pulse(const Matrix& rho, SimContext& ctx) {
  const MWSeg base{Branch::kZeroMinus, kCnotRabi, 0.0, 0.0, kCnotDur};
  if (ctx.t2star_us <= 0.0)
    return propagate(ctx.mw(base), rho, base.dur, &ctx.cache());
  // Gauss-Hermite average over carrier detuning, sigma_omega = sqrt(2)/T2*.
  static const double node[4] = {0.0, 0.81628788285896466304,
                                 1.67355162876747144503,
                                 2.65196135683523349245};
  static const double wgt[4] = {0.81026461755680732676,
                                0.42560725261012780052,
                                0.05451558281912703059,
                                0.00097178124509951915};
  const double sigma_f = (std::sqrt(2.0) / ctx.t2star_us) / kTwoPi;  // MHz
  Matrix acc = Matrix::Zero(kLevels, kLevels);
  double norm = 0.0;
  for (int k = -3; k <= 3; ++k) {
    const int a = std::abs(k);
    const double det = std::sqrt(2.0) * sigma_f * (k < 0 ? -node[a] : node[a]);
    const double w = wgt[a] * (k == 0 ? 1.0 : 1.0);
    MWSeg seg = base;
    seg.carrier_detuning = det;
    acc += w * propagate(ctx.mw(seg), rho, seg.dur, &ctx.cache());
    norm += w;
  }
  return acc / norm;
}

SequenceResult run_sequence(const Sequence& seq, const Matrix& rho0,
                            SimContext& ctx) {
  SequenceResult res{rho0, std::nullopt};
  for (std::size_t k = 0; k < seq.segments.size(); ++k) {
    const Segment& seg = seq.segments[k];
    if (res.pl)
      throw std::invalid_argument("Readout must be the terminal segment");
    if (const auto* l = std::get_if<LaserSeg>(&seg)) {
      if (l->dur < 0.0) throw std::invalid_argument("negative duration");
      res.rho = propagate(ctx.laser(l->scale), res.rho, l->dur, &ctx.cache());
    } else if (const auto* m = std::get_if<MWSeg>(&seg)) {
      if (m->dur < 0.0 || m->rabi < 0.0)
        throw std::invalid_argument("negative MW parameters");
      if (m->rabi == 0.0 && m->dur > 0.0)
        throw std::invalid_argument("degenerate MW pulse (rabi = 0)");
      res.rho = propagate(ctx.mw(*m), res.rho, m->dur, &ctx.cache());
    } else if (const auto* w = std::get_if<WaitSeg>(&seg)) {
      if (w->dur < 0.0) throw std::invalid_argument("negative duration");
      res.rho = propagate(ctx.laser_off(), res.rho, w->dur, &ctx.cache());
    } else if (std::get_if<DephaseSeg>(&seg)) {
      res.rho = dephase_electron(res.rho);
    } else if (const auto* s = std::get_if<SwapSeg>(&seg)) {
      res.rho = adiabatic_swap(res.rho, s->branch);
    } else if (const auto* rd = std::get_if<ReadoutSeg>(&seg)) {
      res.pl = pl_trace(ctx.laser_on(), ctx.rates(), res.rho, rd->window,
                        0.005, &ctx.cache());
    }
  }
  return res;
}

namespace {

double ramsey_point(RamseyKind kind, double repump, double theta,
                    SimContext& ctx) {
  const ModelParams& p = ctx.params();
  const double wn = kTwoPi * (p.P_quad + p.gamma_n * ctx.field());
  Matrix rho = ctx.init_state();
  if (kind == RamseyKind::kTransverse) {
    rho = nuclear_rotation(rho, kPi / 2.0, 0.0);
    rho = prepare_thermal(rho, ctx);
    double elapsed = prepare_thermal_duration();
    if (repump > 0.0) {
      rho = propagate(ctx.laser_on(), rho, repump, &ctx.cache());
      rho = propagate(ctx.laser_off(), rho, kRelax, &ctx.cache());
      elapsed += repump + kRelax;
    }
    // second-pulse axis tracks the nuclear rotating frame
    rho = nuclear_rotation(rho, kPi / 2.0, theta + wn * elapsed);
  } else {
    rho = nuclear_rotation(rho, kPi / 2.0, 0.0);
    rho = nuclear_rotation(rho, kPi / 2.0, theta);
    if (kind == RamseyKind::kLongitudinal) rho = prepare_thermal(rho, ctx);
    if (repump > 0.0) {
      rho = propagate(ctx.laser_on(), rho, repump, &ctx.cache());
      rho = propagate(ctx.laser_off(), rho, kRelax, &ctx.cache());
    }
  }
  rho = cnot_pulse(rho, ctx);
  return pl_trace(ctx.laser_on(), ctx.rates(), rho, 0.35, 0.005,
                  &ctx.cache()).yield /
         ctx.reference_yield();
}

}  // namespace

FringeData ramsey_experiment(RamseyKind kind, double repump,
                             const std::vector<double>& thetas,
                             SimContext& ctx) {
  if (thetas.empty()) throw std::invalid_argument("empty theta grid");
  FringeData out;
  out.thetas = thetas;
  out.signal.reserve(thetas.size());
  for (double th : thetas)
    out.signal.push_back(ramsey_point(kind, repump, th, ctx));
  return out;
}

std::vector<RepumpPoint> repump_scan(const std::vector<double>& times,
                                     RamseyKind kind, SimContext& ctx,
                                     int theta_count) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  std::vector<double> thetas(theta_count);
  for (int k = 0; k < theta_count; ++k) thetas[k] = kTwoPi * k / theta_count;
  std::vector<RepumpPoint> out;
  out.reserve(times.size());
  for (double t : times) {
    const FringeData fd = ramsey_experiment(kind, t, thetas, ctx);
    const FitResult fit = fit_ramsey(fd.thetas, fd.signal);
    out.push_back({t, fit.get("V"), fit.get("phi"), fit.residual_norm,
                   fit.converged});
  }
  return out;
}

PopulationTrack population_track(NuclearInit init, double horizon,
                                 SimContext& ctx, int points) {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (points < 2) throw std::invalid_argument("need at least 2 points");
  const int mi0 = init == NuclearInit::kPlusOne ? 0 : 1;
  Matrix rho = Matrix::Zero(kLevels, kLevels);
  for (int ms = 0; ms < 3; ++ms)
    rho(gs_index(ms, mi0), gs_index(ms, mi0)) = 1.0 / 3.0;
  const double dt = horizon / (points - 1);
  const Matrix& U = ctx.cache().get(ctx.laser_on(), dt);
  Vector v = vec(rho);
  PopulationTrack track;
  for (int k = 0; k < points; ++k) {
    track.times.push_back(k * dt);
    std::array<double, 9> gs{};
    for (int ms = 0; ms < 3; ++ms)
      for (int mi = 0; mi < 3; ++mi) {
        const int idx = gs_index(ms, mi);
        gs[idx] = v(idx * kLevels + idx).real();
      }
    std::array<double, 3> agg{};
    for (int o = 0; o < 7; ++o)
      for (int mi = 0; mi < 3; ++mi) {
        const int idx = o * 3 + mi;
        agg[mi] += v(idx * kLevels + idx).real();
      }
    track.gs_pops.push_back(gs);
    track.mi_aggregates.push_back(agg);
    if (k + 1 < points) v = U * v;
  }
  return track;
}

std::pair<double, double> qst_calibration(SimContext& ctx) {
  const double ref = ctx.reference_yield();
  auto swapped_yield = [&](Branch b) {
    const Matrix rho = adiabatic_swap(basis_state(1, 0), b);
    return pl_trace(ctx.laser_on(), ctx.rates(), rho, 0.35, 0.005,
                    &ctx.cache()).yield;
  };
  const double c_plus = (ref - swapped_yield(Branch::kZeroPlus)) / ref;
  const double c_minus = (ref - swapped_yield(Branch::kZeroMinus)) / ref;
  return {c_plus, c_minus};
}

}  // namespace nvsim
