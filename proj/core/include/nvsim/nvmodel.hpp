#pragma once

// The 21-level NV model: Hamiltonians (MHz), the optical rate table and the
// vectorized Lindblad generator (time unit microseconds, rad/us inside the
// generator).

#include "nvsim/spinops.hpp"

#include <cstdint>
#include <vector>

namespace nvsim {

inline constexpr int kLevels = 21;  // 7 orbital x 3 nuclear
inline constexpr int kSuper = kLevels * kLevels;

// Orbital index: GS m_S {+1,0,-1} = 0..2, ES m_S {+1,0,-1} = 3..5, singlet 6.
// Nuclear index: m_I {+1,0,-1} = 0..2. Full index = orbital*3 + nuclear.
inline int gs_index(int ms, int mi) { return ms * 3 + mi; }
inline int es_index(int ms, int mi) { return (3 + ms) * 3 + mi; }
inline int singlet_index(int mi) { return 18 + mi; }

struct ModelParams {
  double D_gs = 2870.0;     // MHz
  double D_es = 1420.0;     // MHz
  double gamma_e = 2.8;     // MHz/G
  double gamma_n = 3.0e-4;  // MHz/G
  double P_quad = -4.85;    // MHz
  double A_par = -43.0;     // MHz (ES hyperfine)
  double A_perp = -23.0;    // MHz
  double C_par = 2.1;       // MHz (GS hyperfine)
  double C_perp = 2.1;      // MHz
};

struct RateTable {
  double Gamma0 = 6.74;   // MHz, optical pumping GS->ES
  double Gamma1 = 67.4;   // MHz, radiative ES->GS
  double Gamma2 = 91.6;   // MHz, ISC ES m_S=+1 -> singlet
  double Gamma3 = 91.6;   // MHz, ISC ES m_S=-1 -> singlet
  double Gamma4 = 9.9;    // MHz, ISC ES m_S=0 -> singlet
  double Gamma5 = 1.06;   // MHz, singlet -> GS m_S=+1
  double Gamma6 = 1.06;   // MHz, singlet -> GS m_S=-1
  double Gamma7 = 4.83;   // MHz, singlet -> GS m_S=0
  double T1_gs = 10000.0; // us
  double T2_gs = 100.0;   // us
  double T1_es = 1000.0;  // us
  double T2_es = 0.01;    // us
};

// 9x9 GS/ES spin Hamiltonians in MHz, basis |m_S> (x) |m_I>.
Matrix gs_hamiltonian(const ModelParams& p, double B);
Matrix es_hamiltonian(const ModelParams& p, double B);
// 3x3 nuclear Hamiltonian of the metastable singlet.
Matrix singlet_hamiltonian(const ModelParams& p, double B);
// 21x21 block-diagonal Hamiltonian diag(H_gs, H_es, H_singlet), MHz.
Matrix full_hamiltonian(const ModelParams& p, double B);

struct JumpOperator {
  double rate;  // MHz (= 1/us)
  Matrix op;    // 21x21
};

// Collective (nuclear-spin and coherence preserving) jump operators: one
// operator per decay class (pump, radiative, the three ISC channels, the
// three singlet exits), summed over the preserved quantum numbers. Each
// operator maps every basis state to a single basis state of the same m_I.
std::vector<JumpOperator> jump_operators(const RateTable& r,
                                         double laser_scale);

struct Liouvillian {
  Matrix generator;  // 441x441, rad/us for the coherent part
  bool laser_on = false;
  double field_G = 0.0;
  double laser_scale = 0.0;
  std::uint64_t id = 0;  // cache identity
};

// Generator = -i 2pi [H, .] + sum Gamma_i D[L_i] acting on vec(rho)
// (column stacking).
Liouvillian build_liouvillian(const ModelParams& p, const RateTable& r,
                              double B, double laser_scale);

// Add a dissipator for (rate, L) in superoperator form to G.
void add_dissipator(Matrix& G, double rate, const Matrix& L);
// -i*2pi*(I (x) H - H^T (x) I) for H in MHz.
Matrix hamiltonian_superop(const Matrix& H);

// Field in [400, 620] G minimizing the ES gap of the eigenpair adiabatically
// connected to |0,0> and |-1,+1>, resolved to better than 0.1 G.
double find_eslac(const ModelParams& p);

}  // namespace nvsim
