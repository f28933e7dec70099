#pragma once

// Qutrit state tomography with readout inversion and physicalization;
// nuclear-qubit process tomography and process fidelity.

#include "nvsim/sequences.hpp"

#include <functional>
#include <random>

namespace nvsim {

struct ProcessMatrix {
  Eigen::Matrix4cd chi;  // basis order {I, sx, sy, sz}
};

ProcessMatrix chi_ideal();  // diag(1/2, 0, 0, 1/2)

// A linear, Hermiticity-preserving map on 2x2 nuclear {+1,0} states.
using QubitChannel = std::function<Eigen::Matrix2cd(const Eigen::Matrix2cd&)>;

// Evaluate the channel on the four |i><j| operator inputs and convert the
// reconstructed superoperator to chi in the Pauli basis.
ProcessMatrix qpt_chi(const QubitChannel& channel);

// Main-text form F = Tr sqrt( sqrt(chi_id) chi_exp sqrt(chi_id) ).
double process_fidelity(const ProcessMatrix& chi_exp,
                        const ProcessMatrix& chi_id);
// Alternate linear metric Tr[chi_id chi_exp], for comparison.
double linear_process_fidelity(const ProcessMatrix& chi_exp,
                               const ProcessMatrix& chi_id);

// The laser-pump nuclear channel at (B, t): thermal electron (x) rho_n,
// pumped laser-on for t plus 1 us relaxation, nuclear partial trace,
// projected to {+1,0} and renormalized, composed with the measurement
// dephasing rho -> (rho + sz rho sz)/2.
QubitChannel nuclear_pump_channel(SimContext& ctx, double pump_us);

// Grid of process fidelities versus chi_ideal.
std::vector<std::vector<double>> nuclear_fidelity_map(
    const std::vector<double>& fields_G, const std::vector<double>& pump_us,
    const ModelParams& p, const RateTable& r);

// Nearest unit-trace PSD matrix by eigenvalue clipping with uniform
// redistribution of the deficit.
Matrix physicalize(const Matrix& rho_raw);

// Uhlmann fidelity (Tr sqrt( sqrt(rho) sigma sqrt(rho) ))^2.
double state_fidelity(const Matrix& rho, const Matrix& sigma);

struct QstResult {
  Matrix rho;                 // 3x3 electron reduced state, {+1,0,-1}
  double c_plus = 0.0;        // calibration contrasts used
  double c_minus = 0.0;
  std::array<double, 8> lambda_expectations{};
};

// Eight Gell-Mann measurement settings, each diagonalized by an exact
// electron rotation, read out directly and through the two adiabatic swaps,
// inverted via R = C P and assembled by the Gell-Mann expansion.
// `noise_sigma` adds Gaussian noise of that relative scale to every yield.
QstResult qst_qutrit(SimContext& ctx, const Matrix& rho_prep,
                     double noise_sigma = 0.0, std::uint64_t seed = 0);

}  // namespace nvsim
