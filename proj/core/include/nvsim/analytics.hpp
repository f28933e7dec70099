#pragma once

// Closed-form models: the 4-level excited-state phase susceptibility,
// sensitivity ratios, the polarization metric and the excitation-rate
// scaling rule.

#include "nvsim/nvmodel.hpp"

namespace nvsim {

// All frequencies converted to rad/us at this boundary.
struct ESFourLevelModel {
  double omega0 = 0.0;   // 2pi (P + gamma_n B)
  double omega_e = 0.0;  // 2pi (D_es - gamma_e B)
  double omega = 0.0;    // omega0 + omega_e + 2pi A_par
  double Omega = 0.0;    // sqrt((2pi A_perp)^2 + omega^2)
  double T_es = 0.01;    // us
};

ESFourLevelModel make_es_four_level(const ModelParams& p, double B,
                                    double T_es = 0.01);

// d(phi)/dt = (1/2)[Omega^2 w / (Omega^2 cos^2(Omega t/2) +
//                   w^2 sin^2(Omega t/2)) - omega_e - 2pi A_par], rad/us.
double phase_velocity(const ESFourLevelModel& model, double t);

// chi_phi = <dphi>/T with <dphi> = int_0^inf e^{-t/T} dphi/dt dt,
// rad per us of ES residence.
double phase_susceptibility(const ModelParams& p, double B,
                            double T_es = 0.01);

// Per-us-of-pumping variant: chi_phi scaled by the mean ES residence accrued
// per us of laser pumping (excitation rate x T_es).
double phase_susceptibility_per_pump_us(const ModelParams& p,
                                        const RateTable& r, double B,
                                        double laser_scale = 1.0,
                                        double T_es = 0.01);

// Field where the 4-level detuning omega vanishes.
double four_level_resonance_field(const ModelParams& p);

struct SensitivityEstimate {
  double visibility = 0.0;
  double T2n = 1.0;  // us
  double N = 1.0;    // relative repetition count
  double relative_eta() const;  // 1/(V sqrt(N T2n))
};

double sensitivity_ratio(const SensitivityEstimate& a,
                         const SensitivityEstimate& b);

// P = 1 - (3/2)(I0 + I-)/(I0 + I- + I+).
double polarization_metric(double I0, double Iminus, double Iplus);

// Gamma0 = gamma1 * power/psat.
double excitation_rate_from_power(double power_mW, double psat_mW,
                                  double gamma1_MHz);

}  // namespace nvsim
