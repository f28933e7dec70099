#pragma once

// Time evolution under piecewise-constant Liouvillians, PL integration and
// basis-state contrast.

#include "nvsim/nvmodel.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace nvsim {

struct Propagator {
  Matrix matrix;       // 441x441 = exp(L*t)
  double duration;     // us
  std::uint64_t source_id;
};

// Memo of exp(L*t) keyed by (Liouvillian id, duration). Pure memo: safe
// concurrent reads, idempotent inserts.
class PropagatorCache {
 public:
  const Matrix& get(const Liouvillian& L, double t);

 private:
  std::map<std::pair<std::uint64_t, std::uint64_t>, Matrix> memo_;
  std::mutex mu_;
};

Propagator make_propagator(const Liouvillian& L, double t);

// rho(t) = unvec(exp(L t) vec(rho)).
Matrix propagate(const Liouvillian& L, const Matrix& rho, double t,
                 PropagatorCache* cache = nullptr);

struct PLRecord {
  double yield = 0.0;  // time-integrated radiative rate (dimensionless)
  std::vector<std::pair<double, double>> samples;  // (t us, rate MHz)
};

// Instantaneous rate = Gamma1 * (total ES population); yield by trapezoid
// over [0, window] stepped at dt.
PLRecord pl_trace(const Liouvillian& L_on, const RateTable& r,
                  const Matrix& rho0, double window = 0.35,
                  double dt = 0.005, PropagatorCache* cache = nullptr);

// GS basis state label by (m_S, m_I) indices in {+1,0,-1} order.
Matrix basis_state(int orbital, int nuclear);

// Readout contrast C = (I_{|0,+1>} - I_state)/I_{|0,+1>}.
double contrast(int ms, int mi, const ModelParams& p, const RateTable& r,
                double B, double window = 0.35,
                PropagatorCache* cache = nullptr);

// Pump the fully mixed state laser-on for `pump`, relax 1 us, return
// P = 1 - 1.5 (n0 + n-1)/(n0 + n-1 + n+1) from GS nuclear populations.
double pump_polarization(const ModelParams& p, const RateTable& r, double B,
                         double pump = 20.0, PropagatorCache* cache = nullptr);

}  // namespace nvsim
