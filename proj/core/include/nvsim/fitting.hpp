#pragma once

// Damped Gauss-Newton nonlinear least squares and the registered fit models:
// Ramsey fringe, saturation curve, constrained Lorentzian triplet, and the
// hyperfine double-sinusoid decay.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nvsim {

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // Gauss-Newton approximation
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;  // randomized restarts only; 0 = deterministic
  std::string convention;  // model notes (e.g. sign conventions used)

  double get(const std::string& name) const;
};

struct NllsModel {
  std::function<double(double x, const Eigen::VectorXd& p)> f;
  // gradient of f with respect to the parameters
  std::function<Eigen::VectorXd(double x, const Eigen::VectorXd& p)> grad;
};

struct Bounds {
  Eigen::VectorXd lo, hi;  // applied by projection after each step
};

FitResult nlls_fit(const NllsModel& model,
                   const std::vector<std::string>& names,
                   const Eigen::VectorXd& init,
                   const std::vector<double>& xs,
                   const std::vector<double>& ys,
                   const std::optional<Bounds>& bounds = std::nullopt);

// The registered models with analytic gradients, exposed for validation.
NllsModel ramsey_model();                                // {V, phi, B}
NllsModel saturation_model(bool literal_form = false);   // {I0, Psat, B}
NllsModel odmr_triplet_model(double hyperfine_MHz = 2.16,
                             bool shared_width = true);
NllsModel t2star_model(double C_par_MHz = 2.1);

// S(theta) = (V/2) cos(theta + phi) + B, V >= 0, phi in (-pi, pi].
FitResult fit_ramsey(const std::vector<double>& thetas,
                     const std::vector<double>& signal);

// Standard form I(P) = I0 (P/Psat)/(1 + P/Psat) + B; literal_form fits the
// printed decreasing I0/(1 + P/Psat) + B instead.
FitResult fit_saturation(const std::vector<double>& powers_mW,
                         const std::vector<double>& intensities,
                         bool literal_form = false);

// Sum of three Lorentzians with centers (c-d, c, c+d), d fixed; params
// {center, width} (+widths per line when shared_width = false) and the three
// peak amplitudes. Integrated intensity of a line = amplitude * pi * width.
FitResult fit_odmr_triplet(const std::vector<double>& freqs_MHz,
                           const std::vector<double>& signal,
                           double hyperfine_MHz = 2.16,
                           bool shared_width = true);
// Integrated intensities (low line, center, high line) of a triplet fit.
std::array<double, 3> odmr_intensities(const FitResult& fit);

// C(t) = exp(-t/T2*) [A1 cos(w t + phi1) + A2 cos((w + 2 pi C_par) t + phi2)]
// + B. The printed growing exponential is treated as a decaying one; the
// convention is recorded in FitResult::convention.
FitResult fit_t2star(const std::vector<double>& times_us,
                     const std::vector<double>& signal,
                     double C_par_MHz = 2.1);

// Residual-resampling bootstrap around nlls_fit; returns one FitResult per
// replicate, each seeded from `seed`.
std::vector<FitResult> bootstrap_fit(const NllsModel& model,
                                     const std::vector<std::string>& names,
                                     const Eigen::VectorXd& init,
                                     const std::vector<double>& xs,
                                     const std::vector<double>& ys,
                                     int replicates = 200,
                                     std::uint64_t seed = 1);

}  // namespace nvsim
