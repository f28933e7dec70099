#include "nvsim/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nvsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_phase(double phi) {
  phi -= kTwoPi * std::floor((phi + kPi) / kTwoPi);
  if (phi <= -kPi) phi += kTwoPi;
  return phi;
}

Eigen::VectorXd residuals(const NllsModel& m, const Eigen::VectorXd& p,
                          const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  Eigen::VectorXd r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) r(i) = m.f(xs[i], p) - ys[i];
  return r;
}
}  // namespace

NllsModel ramsey_model() {
  NllsModel m;
  m.f = [](double th, const Eigen::VectorXd& p) {
    return 0.5 * p(0) * std::cos(th + p(1)) + p(2);
  };
  m.grad = [](double th, const Eigen::VectorXd& p) {
    Eigen::VectorXd g(3);
    g << 0.5 * std::cos(th + p(1)), -0.5 * p(0) * std::sin(th + p(1)), 1.0;
    return g;
  };
  return m;
}

NllsModel saturation_model(bool literal_form) {
  NllsModel m;
  if (!literal_form) {
    m.f = [](double P, const Eigen::VectorXd& p) {
      const double u = P / p(1);
      return p(0) * u / (1.0 + u) + p(2);
    };
    m.grad = [](double P, const Eigen::VectorXd& p) {
      const double u = P / p(1);
      const double d = 1.0 + u;
      Eigen::VectorXd g(3);
      g << u / d, -p(0) * (P / (p(1) * p(1))) / (d * d), 1.0;
      return g;
    };
  } else {
    m.f = [](double P, const Eigen::VectorXd& p) {
      return p(0) / (1.0 + P / p(1)) + p(2);
    };
    m.grad = [](double P, const Eigen::VectorXd& p) {
      const double d = 1.0 + P / p(1);
      Eigen::VectorXd g(3);
      g << 1.0 / d, p(0) * (P / (p(1) * p(1))) / (d * d), 1.0;
      return g;
    };
  }
  return m;
}

double FitResult::get(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return params(k);
  throw std::out_of_range("unknown fit parameter: " + name);
}

FitResult nlls_fit(const NllsModel& model,
                   const std::vector<std::string>& names,
                   const Eigen::VectorXd& init,
                   const std::vector<double>& xs,
                   const std::vector<double>& ys,
                   const std::optional<Bounds>& bounds) {
  if (xs.size() != ys.size() || xs.size() < static_cast<std::size_t>(init.size()))
    throw std::invalid_argument("nlls_fit: bad data shape");
  const int np = static_cast<int>(init.size());
  const int nd = static_cast<int>(xs.size());

  auto project = [&](Eigen::VectorXd p) {
    if (bounds)
      for (int k = 0; k < np; ++k)
        p(k) = std::clamp(p(k), bounds->lo(k), bounds->hi(k));
    return p;
  };

  FitResult out;
  out.names = names;
  Eigen::VectorXd p = project(init);
  Eigen::VectorXd r = residuals(model, p, xs, ys);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  for (; iter < 200 && !converged; ++iter) {
    Eigen::MatrixXd J(nd, np);
    for (int i = 0; i < nd; ++i) J.row(i) = model.grad(xs[i], p).transpose();
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool stepped = false;
    for (int inner = 0; inner < 60; ++inner) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda;
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      if (!step.allFinite()) { lambda *= 10.0; continue; }
      const Eigen::VectorXd cand = project(p + step);
      const Eigen::VectorXd rc = residuals(model, cand, xs, ys);
      const double cc = rc.squaredNorm();
      if (cc <= cost) {
        const double rel = (cost - cc) / std::max(cost, 1e-300);
        if (step.norm() < 1e-10 || rel < 1e-12) converged = true;
        p = cand; r = rc; cost = cc;
        lambda = std::max(lambda / 3.0, 1e-14);
        stepped = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) {
      // damping exhausted; converged only if already at a stationary point
      converged = g.norm() < 1e-10 * std::max(1.0, std::sqrt(cost));
      break;
    }
  }
  out.params = p;
  out.residual_norm = std::sqrt(cost);
  out.iterations = iter;
  out.converged = converged || cost < 1e-24;

  Eigen::MatrixXd J(nd, np);
  for (int i = 0; i < nd; ++i) J.row(i) = model.grad(xs[i], p).transpose();
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  const double dof = std::max(nd - np, 1);
  const double s2 = cost / dof;
  const Eigen::MatrixXd inv =
      JtJ.completeOrthogonalDecomposition().pseudoInverse();
  out.covariance = s2 * inv;
  return out;
}

FitResult fit_ramsey(const std::vector<double>& thetas,
                     const std::vector<double>& signal) {
  if (thetas.size() < 4) throw std::invalid_argument("fit_ramsey: need >= 4 points");
  const double span = *std::max_element(thetas.begin(), thetas.end()) -
                      *std::min_element(thetas.begin(), thetas.end());
  if (span < kPi) throw std::invalid_argument("fit_ramsey: theta span < pi");
  const std::size_t n = thetas.size();
  double a = 0, b = 0, mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a += signal[i] * std::cos(thetas[i]);
    b += signal[i] * std::sin(thetas[i]);
    mean += signal[i];
  }
  a *= 2.0 / n; b *= 2.0 / n; mean /= n;

  const NllsModel m = ramsey_model();
  Eigen::VectorXd init(3);
  init << 2.0 * std::hypot(a, b), std::atan2(-b, a), mean;
  FitResult fit = nlls_fit(m, {"V", "phi", "B"}, init, thetas, signal);
  if (fit.params(0) < 0.0) {
    fit.params(0) = -fit.params(0);
    fit.params(1) += kPi;
  }
  fit.params(1) = wrap_phase(fit.params(1));
  if (fit.params(0) < 1e-12) fit.convention = "degenerate: phi undefined";
  return fit;
}

FitResult fit_saturation(const std::vector<double>& powers_mW,
                         const std::vector<double>& intensities,
                         bool literal_form) {
  if (powers_mW.size() < 4)
    throw std::invalid_argument("fit_saturation: need >= 4 points");
  const double pmax = *std::max_element(powers_mW.begin(), powers_mW.end());

  const NllsModel m = saturation_model(literal_form);
  // Psat is the only nonlinear parameter; seed by scanning it with the
  // remaining two solved linearly.
  double best_cost = std::numeric_limits<double>::infinity();
  Eigen::VectorXd init(3);
  init << 1.0, pmax / 2.0, 0.0;
  for (int k = 0; k < 60; ++k) {
    const double psat = pmax * std::pow(10.0, -2.0 + 3.0 * k / 59.0);
    Eigen::MatrixXd A(powers_mW.size(), 2);
    Eigen::VectorXd y(powers_mW.size());
    for (std::size_t i = 0; i < powers_mW.size(); ++i) {
      const double u = powers_mW[i] / psat;
      A(i, 0) = literal_form ? 1.0 / (1.0 + u) : u / (1.0 + u);
      A(i, 1) = 1.0;
      y(i) = intensities[i];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    const double cost = (A * c - y).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      init << c(0), psat, c(1);
    }
  }
  Bounds bounds;
  bounds.lo = Eigen::Vector3d(-1e300, 1e-12, -1e300);
  bounds.hi = Eigen::Vector3d(1e300, 1e300, 1e300);
  FitResult fit = nlls_fit(m, {"I0", "Psat", "B"}, init, powers_mW,
                           intensities, bounds);
  fit.convention = literal_form ? "literal printed form I0/(1+P/Psat)+B"
                                : "standard saturating form";
  if (fit.params(1) <= 0.0) {
    fit.converged = false;
    fit.convention += "; non-positive Psat";
  }
  return fit;
}

namespace {
double lorentz(double f, double c, double w) {
  return w * w / ((f - c) * (f - c) + w * w);
}
}  // namespace

NllsModel odmr_triplet_model(double hyperfine_MHz, bool shared_width) {
  const double d = hyperfine_MHz;
  const int nw = shared_width ? 1 : 3;
  auto width_of = [nw](const Eigen::VectorXd& p, int line) {
    return nw == 1 ? p(1) : p(1 + line);
  };
  NllsModel m;
  m.f = [d, nw, width_of](double f, const Eigen::VectorXd& p) {
    double s = 0.0;
    for (int line = 0; line < 3; ++line)
      s += p(1 + nw + line) * lorentz(f, p(0) + (line - 1) * d,
                                      width_of(p, line));
    return s;
  };
  m.grad = [d, nw, width_of](double f, const Eigen::VectorXd& p) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(1 + nw + 3);
    for (int line = 0; line < 3; ++line) {
      const double c = p(0) + (line - 1) * d;
      const double w = width_of(p, line);
      const double a = p(1 + nw + line);
      const double den = (f - c) * (f - c) + w * w;
      g(0) += a * w * w * 2.0 * (f - c) / (den * den);
      const double dw = a * 2.0 * w * (f - c) * (f - c) / (den * den);
      if (nw == 1) g(1) += dw; else g(1 + line) = dw;
      g(1 + nw + line) = w * w / den;
    }
    return g;
  };
  return m;
}

NllsModel t2star_model(double C_par_MHz) {
  const double delta = kTwoPi * C_par_MHz;  // rad/us between the two tones
  NllsModel m;
  m.f = [delta](double t, const Eigen::VectorXd& p) {
    const double e = std::exp(-t / p(0));
    return e * (p(1) * std::cos(p(3) * t + p(4)) +
                p(2) * std::cos((p(3) + delta) * t + p(5))) + p(6);
  };
  m.grad = [delta](double t, const Eigen::VectorXd& p) {
    const double e = std::exp(-t / p(0));
    const double c1 = std::cos(p(3) * t + p(4));
    const double c2 = std::cos((p(3) + delta) * t + p(5));
    const double s1 = std::sin(p(3) * t + p(4));
    const double s2 = std::sin((p(3) + delta) * t + p(5));
    Eigen::VectorXd g(7);
    g(0) = e * (t / (p(0) * p(0))) * (p(1) * c1 + p(2) * c2);
    g(1) = e * c1;
    g(2) = e * c2;
    g(3) = -e * t * (p(1) * s1 + p(2) * s2);
    g(4) = -e * p(1) * s1;
    g(5) = -e * p(2) * s2;
    g(6) = 1.0;
    return g;
  };
  return m;
}

FitResult fit_odmr_triplet(const std::vector<double>& freqs_MHz,
                           const std::vector<double>& signal,
                           double hyperfine_MHz, bool shared_width) {
  const double fmin = *std::min_element(freqs_MHz.begin(), freqs_MHz.end());
  const double fmax = *std::max_element(freqs_MHz.begin(), freqs_MHz.end());
  if (fmax - fmin < 2.0 * hyperfine_MHz)
    throw std::invalid_argument("fit_odmr_triplet: span too narrow");
  const double d = hyperfine_MHz;

  // seed: scan center and width, amplitudes solved linearly
  double best_cost = std::numeric_limits<double>::infinity();
  double c0 = 0.5 * (fmin + fmax), w0 = d / 4.0;
  Eigen::Vector3d amp0(0, 0, 0);
  for (double c : freqs_MHz) {
    if (c - d < fmin || c + d > fmax) continue;
    for (double w : {d / 10.0, d / 4.0, d / 2.0, d}) {
      Eigen::MatrixXd A(freqs_MHz.size(), 3);
      Eigen::VectorXd y(freqs_MHz.size());
      for (std::size_t i = 0; i < freqs_MHz.size(); ++i) {
        A(i, 0) = lorentz(freqs_MHz[i], c - d, w);
        A(i, 1) = lorentz(freqs_MHz[i], c, w);
        A(i, 2) = lorentz(freqs_MHz[i], c + d, w);
        y(i) = signal[i];
      }
      const Eigen::Vector3d amp = A.colPivHouseholderQr().solve(y);
      const double cost = (A * amp - y).squaredNorm();
      if (cost < best_cost) { best_cost = cost; c0 = c; w0 = w; amp0 = amp; }
    }
  }

  const int nw = shared_width ? 1 : 3;
  const int np = 1 + nw + 3;
  const NllsModel m = odmr_triplet_model(hyperfine_MHz, shared_width);
  Eigen::VectorXd init(np);
  init(0) = c0;
  for (int k = 0; k < nw; ++k) init(1 + k) = w0;
  for (int k = 0; k < 3; ++k) init(1 + nw + k) = amp0(k);
  std::vector<std::string> names{"center"};
  if (shared_width) names.push_back("width");
  else names.insert(names.end(), {"width_low", "width_center", "width_high"});
  names.insert(names.end(), {"A_low", "A_center", "A_high"});
  FitResult fit = nlls_fit(m, names, init, freqs_MHz, signal);
  if (fit.params(0) - d < fmin || fit.params(0) + d > fmax)
    throw std::invalid_argument("fit_odmr_triplet: centers outside data range");
  fit.convention = shared_width ? "shared width" : "independent widths";
  return fit;
}

std::array<double, 3> odmr_intensities(const FitResult& fit) {
  const bool shared = fit.names[1] == "width";
  std::array<double, 3> out{};
  for (int line = 0; line < 3; ++line) {
    const double w = shared ? fit.params(1) : fit.params(1 + line);
    const double a = fit.params((shared ? 2 : 4) + line);
    out[line] = a * kPi * w;
  }
  return out;
}

FitResult fit_t2star(const std::vector<double>& times_us,
                     const std::vector<double>& signal, double C_par_MHz) {
  if (times_us.size() < 20)
    throw std::invalid_argument("fit_t2star: need >= 20 points");
  const double delta = kTwoPi * C_par_MHz;  // rad/us between the two tones
  const double span = *std::max_element(times_us.begin(), times_us.end());
  const std::size_t n = times_us.size();

  // seed: grid over (omega, T2*) with the remaining 5 parameters linear
  double best_cost = std::numeric_limits<double>::infinity();
  double w_best = delta, tau_best = span;
  Eigen::VectorXd lin_best = Eigen::VectorXd::Zero(5);
  const double wmax = kPi / (span / static_cast<double>(n - 1)) * 0.9;
  for (int kw = 1; kw <= 220; ++kw) {
    const double w = wmax * kw / 220.0;
    for (int kt = 0; kt < 12; ++kt) {
      const double tau = 0.05 * span * std::pow(200.0, kt / 11.0);
      Eigen::MatrixXd A(n, 5);
      Eigen::VectorXd y(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = times_us[i];
        const double e = std::exp(-t / tau);
        A(i, 0) = e * std::cos(w * t);
        A(i, 1) = e * std::sin(w * t);
        A(i, 2) = e * std::cos((w + delta) * t);
        A(i, 3) = e * std::sin((w + delta) * t);
        A(i, 4) = 1.0;
        y(i) = signal[i];
      }
      const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
      const double cost = (A * c - y).squaredNorm();
      if (cost < best_cost) {
        best_cost = cost; w_best = w; tau_best = tau; lin_best = c;
      }
    }
  }

  const NllsModel m = t2star_model(C_par_MHz);
  Eigen::VectorXd init(7);
  init << tau_best, std::hypot(lin_best(0), lin_best(1)),
      std::hypot(lin_best(2), lin_best(3)), w_best,
      std::atan2(-lin_best(1), lin_best(0)),
      std::atan2(-lin_best(3), lin_best(2)), lin_best(4);
  Bounds bounds;
  bounds.lo = Eigen::VectorXd::Constant(7, -1e300);
  bounds.hi = Eigen::VectorXd::Constant(7, 1e300);
  bounds.lo(0) = 1e-6;  // T2* forced positive
  FitResult fit = nlls_fit(m, {"T2star", "A1", "A2", "omega", "phi1", "phi2",
                               "B"}, init, times_us, signal, bounds);
  fit.convention = "decaying exp(-t/T2*) (printed e^{t/T2*} read as typo)";
  return fit;
}

std::vector<FitResult> bootstrap_fit(const NllsModel& model,
                                     const std::vector<std::string>& names,
                                     const Eigen::VectorXd& init,
                                     const std::vector<double>& xs,
                                     const std::vector<double>& ys,
                                     int replicates, std::uint64_t seed) {
  const FitResult base = nlls_fit(model, names, init, xs, ys);
  std::vector<double> fitted(xs.size()), resid(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fitted[i] = model.f(xs[i], base.params);
    resid[i] = ys[i] - fitted[i];
  }
  std::vector<FitResult> out;
  out.reserve(replicates);
  for (int rep = 0; rep < replicates; ++rep) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(rep));
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<double> yr(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      yr[i] = fitted[i] + resid[pick(rng)];
    FitResult fr = nlls_fit(model, names, base.params, xs, yr);
    fr.seed = seed + static_cast<std::uint64_t>(rep);
    out.push_back(std::move(fr));
  }
  return out;
}

}  // namespace nvsim
