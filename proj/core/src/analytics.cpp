#include "nvsim/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace nvsim {

ESFourLevelModel make_es_four_level(const ModelParams& p, double B,
                                    double T_es) {
  if (T_es <= 0.0) throw std::invalid_argument("T_es must be positive");
  ESFourLevelModel m;
  m.omega0 = kTwoPi * (p.P_quad + p.gamma_n * B);
  m.omega_e = kTwoPi * (p.D_es - p.gamma_e * B);
  m.omega = m.omega0 + m.omega_e + kTwoPi * p.A_par;
  m.Omega = std::hypot(kTwoPi * p.A_perp, m.omega);
  m.T_es = T_es;
  return m;
}

double phase_velocity(const ESFourLevelModel& m, double t) {
  const double c = std::cos(0.5 * m.Omega * t);
  const double s = std::sin(0.5 * m.Omega * t);
  const double den = m.Omega * m.Omega * c * c + m.omega * m.omega * s * s;
  const double a_par = m.omega - m.omega0 - m.omega_e;  // 2pi A_par
  return 0.5 * (m.Omega * m.Omega * m.omega / den - m.omega_e - a_par);
}

namespace {

template <typename F>
double simpson(const F& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

}  // namespace

double phase_susceptibility(const ModelParams& p, double B, double T_es) {
  const ESFourLevelModel m = make_es_four_level(p, B, T_es);
  // <dphi> = int_0^inf e^{-t/T} (dphi/dt) dt, truncated at 20 T where the
  // weight is ~2e-9 of the integrand scale; piecewise per half period so
  // the quadrature never straddles a resonance peak of dphi/dt.
  const double horizon = 20.0 * T_es;
  const double half_period = kPi / std::max(m.Omega, 1e-12);
  auto g = [&](double t) { return std::exp(-t / T_es) * phase_velocity(m, t); };
  double acc = 0.0, t0 = 0.0;
  while (t0 < horizon) {
    const double t1 = std::min(t0 + half_period, horizon);
    acc += integrate(g, t0, t1, 1e-9);
    t0 = t1;
  }
  return acc / T_es;
}

double phase_susceptibility_per_pump_us(const ModelParams& p,
                                        const RateTable& r, double B,
                                        double laser_scale, double T_es) {
  return phase_susceptibility(p, B, T_es) * laser_scale * r.Gamma0 * T_es;
}

double four_level_resonance_field(const ModelParams& p) {
  return (p.P_quad + p.D_es + p.A_par) / (p.gamma_e - p.gamma_n);
}

double SensitivityEstimate::relative_eta() const {
  if (visibility == 0.0)
    throw std::invalid_argument("zero visibility");
  return 1.0 / (visibility * std::sqrt(N * T2n));
}

double sensitivity_ratio(const SensitivityEstimate& a,
                         const SensitivityEstimate& b) {
  return a.relative_eta() / b.relative_eta();
}

double polarization_metric(double I0, double Iminus, double Iplus) {
  const double total = I0 + Iminus + Iplus;
  if (I0 < 0.0 || Iminus < 0.0 || Iplus < 0.0 || total <= 0.0)
    throw std::invalid_argument("polarization_metric: bad intensities");
  return 1.0 - 1.5 * (I0 + Iminus) / total;
}

double excitation_rate_from_power(double power_mW, double psat_mW,
                                  double gamma1_MHz) {
  if (psat_mW <= 0.0 || power_mW < 0.0)
    throw std::invalid_argument("excitation_rate_from_power: bad powers");
  return gamma1_MHz * power_mW / psat_mW;
}

}  // namespace nvsim
