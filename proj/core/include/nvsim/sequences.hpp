#pragma once

// Pulse-sequence description and execution: microwave rotations, laser
// segments, waits, electron dephasing, and the named Ramsey/repump/population
// experiments.

#include "nvsim/engine.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace nvsim {

enum class Branch { kZeroMinus, kZeroPlus };  // 0<->-1 and 0<->+1

struct LaserSeg { double scale = 1.0; double dur = 0.0; };
struct MWSeg {
  Branch branch = Branch::kZeroMinus;
  double rabi = 0.0;              // MHz
  double carrier_detuning = 0.0;  // MHz relative to the m_I=0 line
  double phase = 0.0;             // rad
  double dur = 0.0;               // us
};
struct WaitSeg { double dur = 0.0; };
struct DephaseSeg {};
struct SwapSeg { Branch branch = Branch::kZeroMinus; };
struct ReadoutSeg { double window = 0.35; };

using Segment = std::variant<LaserSeg, MWSeg, WaitSeg, DephaseSeg, SwapSeg,
                             ReadoutSeg>;

struct Sequence {
  std::string label;
  std::vector<Segment> segments;
  double field_G = 0.0;
};

// Shared per-field workspace: Liouvillians and cached propagators for one
// (params, rates, field) combination.
class SimContext {
 public:
  SimContext(const ModelParams& p, const RateTable& r, double B,
             bool dissipation = true);

  const ModelParams& params() const { return p_; }
  const RateTable& rates() const { return r_; }
  double field() const { return B_; }
  bool dissipation() const { return dissipation_; }

  const Liouvillian& laser(double scale);
  const Liouvillian& laser_off() { return laser(0.0); }
  const Liouvillian& laser_on() { return laser(1.0); }
  const Liouvillian& mw(const MWSeg& seg);

  PropagatorCache& cache() { return cache_; }

  // Fully mixed state pumped 20 us laser-on, then 1 us relaxation.
  const Matrix& init_state();
  // PL yield of |0,+1> used to normalize all readouts.
  double reference_yield();

  // Optional ensemble inhomogeneous broadening of the CNOT pulse:
  // Gaussian carrier-detuning average with sigma_omega = sqrt(2)/T2*.
  double t2star_us = 0.0;  // 0 disables

 private:
  ModelParams p_;
  RateTable r_;
  double B_;
  bool dissipation_;
  PropagatorCache cache_;
  std::map<double, Liouvillian> lasers_;
  std::map<std::tuple<int, double, double, double>, Liouvillian> mws_;
  std::optional<Matrix> init_;
  std::optional<double> ref_;
};

// Generator of the MW segment: rotating frame of the addressed branch with
// the electron-diagonal GS blocks retained (RWA), carrier referenced to the
// m_I=0 line plus carrier_detuning.
Liouvillian mw_liouvillian(const ModelParams& p, const RateTable& r, double B,
                           const MWSeg& seg, bool dissipation = true);

struct SequenceResult {
  Matrix rho;
  std::optional<PLRecord> pl;
};

SequenceResult run_sequence(const Sequence& seq, const Matrix& rho0,
                            SimContext& ctx);

// Zero all GS density-matrix blocks between distinct electron sublevels.
Matrix dephase_electron(const Matrix& rho);

// Exact population-and-coherence swap of the two addressed GS electron
// sublevels (idealized adiabatic passage).
Matrix adiabatic_swap(const Matrix& rho, Branch branch);

// Exact rotation by `angle` about an equatorial axis with azimuth
// `axis_phase` on the nuclear {|0,+1>, |0,0>} subspace.
Matrix nuclear_rotation(const Matrix& rho, double angle, double axis_phase);

// 1.23 rad on 0<->-1 then pi/2 on 0<->+1 (rabi 12 MHz, carriers on the
// populated m_I=+1 lines), followed by electron dephasing.
Matrix prepare_thermal(const Matrix& rho, SimContext& ctx);
// Total wall-clock duration of the two prepare_thermal pulses.
double prepare_thermal_duration();

// 625 ns, 0.8 MHz pi pulse resonant with |0,0> -> |-1,0>.
Matrix cnot_pulse(const Matrix& rho, SimContext& ctx);

enum class RamseyKind { kLongitudinal, kTransverse, kControl };

struct FringeData {
  std::vector<double> thetas;  // rad, strictly increasing
  std::vector<double> signal;  // PL normalized to the |0,+1> reference
};

FringeData ramsey_experiment(RamseyKind kind, double repump,
                             const std::vector<double>& thetas,
                             SimContext& ctx);

struct RepumpPoint {
  double time = 0.0;        // us
  double visibility = 0.0;  // V of the fringe-model fit
  double phase = 0.0;       // rad
  double residual = 0.0;    // fit residual norm
  bool converged = false;
};

std::vector<RepumpPoint> repump_scan(const std::vector<double>& times,
                                     RamseyKind kind, SimContext& ctx,
                                     int theta_count = 12);

enum class NuclearInit { kPlusOne, kZero };  // thermal (x) |+1> or |0>

struct PopulationTrack {
  std::vector<double> times;                    // us
  std::vector<std::array<double, 9>> gs_pops;   // per GS basis state
  std::vector<std::array<double, 3>> mi_aggregates;  // m_I {+1,0,-1} totals
};

// Laser-on evolution of thermal-electron (x) nuclear basis state.
PopulationTrack population_track(NuclearInit init, double horizon,
                                 SimContext& ctx, int points = 120);

// Contrasts of |+1,+1> and |-1,+1> measured through the adiabatic-swap
// calibration sequences, relative to |0,+1>.
std::pair<double, double> qst_calibration(SimContext& ctx);

}  // namespace nvsim
