#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the phase-space estimators; Fock amplitudes are built directly from
// <n|beta> = exp(-|beta|^2/2) beta^n / sqrt(n!).

#include <cmath>
#include <complex>
#include <vector>

#include "wgsim/common.hpp"
#include "wgsim/evolution.hpp"

namespace testsupport {

using wgsim::Complex;

/// Unnormalized Fock amplitudes of sum_j c_j |beta_j>, n < cutoff.
inline std::vector<Complex> fock_amplitudes(const std::vector<Complex>& betas, const std::vector<Complex>& coeffs,
                                            std::size_t cutoff) {
  std::vector<Complex> out(cutoff);
  for (std::size_t n = 0; n < cutoff; ++n) {
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const double log_mag = -0.5 * std::norm(betas[j]) - 0.5 * std::lgamma(n + 1.0);
      out[n] += coeffs[j] * std::exp(log_mag) * std::pow(betas[j], static_cast<double>(n));
    }
  }
  return out;
}

inline std::vector<double> normalized_populations(const std::vector<Complex>& amps) {
  double total = 0.0;
  for (auto a : amps) total += std::norm(a);
  std::vector<double> p;
  for (auto a : amps) p.push_back(std::norm(a) / total);
  return p;
}

inline double poisson(double mean, std::size_t n) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

/// Even/odd-style cat Wigner function for real beta and
/// |psi> = (a|beta> + b e^{i theta}|-beta>)/sqrt(N); direct closed form.
inline double cat_wigner(double beta, double a, double b, double theta, Complex xi) {
  const double n = a * a + b * b + 2 * a * b * std::cos(theta) * std::exp(-2 * beta * beta);
  const double gp = std::exp(-2 * std::norm(xi - beta));
  const double gm = std::exp(-2 * std::norm(xi + beta));
  const double g0 = std::exp(-2 * std::norm(xi));
  const double fringe = 2 * a * b * g0 * std::cos(4 * beta * xi.imag() + theta);
  return 2 / wgsim::kPi * (a * a * gp + b * b * gm + fringe) / n;
}

/// One window on pair (1,2) with pulse area `area`; window centred in [0, L].
inline wgsim::CouplingSchedule two_mode_schedule(double area, double length = 20000.0, double sigma = 250.0,
                                                 int d = 8) {
  const wgsim::PhysicalConstants c;
  wgsim::CouplingWindow w{0, 1.0, length / 2, sigma, d};
  w.J = area / w.pulse_area(c);
  return wgsim::CouplingSchedule(2, {w}, length, c);
}

/// Four-mode schedule with the shipped default window layout.
inline wgsim::CouplingSchedule four_mode_schedule() {
  const wgsim::PhysicalConstants c;
  const double areas[] = {0.23, 0.46, 0.22, 0.21, 0.49};
  const std::size_t pairs[] = {0, 1, 2, 1, 0};
  std::vector<wgsim::CouplingWindow> windows;
  for (int k = 0; k < 5; ++k) {
    wgsim::CouplingWindow w{pairs[k], 1.0, 5000.0 * (k + 1), 250.0, 8};
    w.J = areas[k] * wgsim::kPi / w.pulse_area(c);
    windows.push_back(w);
  }
  return wgsim::CouplingSchedule(4, windows, 30000.0, c);
}

}  // namespace testsupport
