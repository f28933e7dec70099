#include "nvsim/engine.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <bit>
#include <cmath>
#include <stdexcept>

namespace nvsim {

namespace {
std::uint64_t duration_key(double t) { return std::bit_cast<std::uint64_t>(t); }
}  // namespace

Propagator make_propagator(const Liouvillian& L, double t) {
  if (t < 0.0) throw std::invalid_argument("negative duration");
  Propagator p;
  p.matrix = (L.generator * t).exp();
  if (!p.matrix.allFinite())
    throw std::runtime_error("propagator has non-finite entries");
  p.duration = t;
  p.source_id = L.id;
  return p;
}

const Matrix& PropagatorCache::get(const Liouvillian& L, double t) {
  const auto key = std::make_pair(L.id, duration_key(t));
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  Matrix U = make_propagator(L, t).matrix;
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.try_emplace(key, std::move(U)).first->second;
}

Matrix propagate(const Liouvillian& L, const Matrix& rho, double t,
                 PropagatorCache* cache) {
  if (t == 0.0) return rho;
  const int n = static_cast<int>(rho.rows());
  if (cache) return unvec(cache->get(L, t) * vec(rho), n);
  return unvec(make_propagator(L, t).matrix * vec(rho), n);
}

namespace {
double es_rate(const RateTable& r, const Vector& v) {
  double pop = 0.0;
  for (int o = 3; o < 6; ++o)
    for (int mi = 0; mi < 3; ++mi) {
      const int k = o * 3 + mi;
      pop += v(k * kLevels + k).real();
    }
  return r.Gamma1 * pop;
}
}  // namespace

PLRecord pl_trace(const Liouvillian& L_on, const RateTable& r,
                  const Matrix& rho0, double window, double dt,
                  PropagatorCache* cache) {
  if (!L_on.laser_on) throw std::invalid_argument("pl_trace needs laser on");
  if (window <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("pl_trace window/dt must be positive");
  PropagatorCache local;
  PropagatorCache& memo = cache ? *cache : local;
  const Matrix& U = memo.get(L_on, dt);
  Vector v = vec(rho0);
  PLRecord rec;
  double t = 0.0, r0 = es_rate(r, v);
  rec.samples.emplace_back(t, r0);
  while (t < window - 1e-12) {
    v = U * v;
    const double r1 = es_rate(r, v);
    rec.yield += 0.5 * (r0 + r1) * dt;
    r0 = r1;
    t += dt;
    rec.samples.emplace_back(t, r1);
  }
  return rec;
}

Matrix basis_state(int orbital, int nuclear) {
  Matrix rho = Matrix::Zero(kLevels, kLevels);
  const int k = orbital * 3 + nuclear;
  rho(k, k) = 1.0;
  return rho;
}

double contrast(int ms, int mi, const ModelParams& p, const RateTable& r,
                double B, double window, PropagatorCache* cache) {
  if (ms < 0 || ms > 2 || mi < 0 || mi > 2)
    throw std::invalid_argument("contrast expects a GS basis state");
  const Liouvillian L_on = build_liouvillian(p, r, B, 1.0);
  PropagatorCache local;
  PropagatorCache& memo = cache ? *cache : local;
  const double ref = pl_trace(L_on, r, basis_state(1, 0), window, 0.005,
                              &memo).yield;
  const double y = pl_trace(L_on, r, basis_state(ms, mi), window, 0.005,
                            &memo).yield;
  return (ref - y) / ref;
}

double pump_polarization(const ModelParams& p, const RateTable& r, double B,
                         double pump, PropagatorCache* cache) {
  if (pump <= 0.0) throw std::invalid_argument("pump must be positive");
  const Liouvillian L_on = build_liouvillian(p, r, B, 1.0);
  const Liouvillian L_off = build_liouvillian(p, r, B, 0.0);
  Matrix rho = Matrix::Identity(kLevels, kLevels) / kLevels;
  rho = propagate(L_on, rho, pump, cache);
  rho = propagate(L_off, rho, 1.0, cache);
  double n[3] = {0.0, 0.0, 0.0};
  for (int mi = 0; mi < 3; ++mi)
    for (int ms = 0; ms < 3; ++ms)
      n[mi] += rho(gs_index(ms, mi), gs_index(ms, mi)).real();
  return 1.0 - 1.5 * (n[1] + n[2]) / (n[0] + n[1] + n[2]);
}

}  // namespace nvsim
