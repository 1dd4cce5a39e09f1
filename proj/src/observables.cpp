#include "wgsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wgsim/parallel.hpp"

namespace wgsim {

namespace {

void check_mode(const GeneralizedPState& state, std::size_t mode) {
  require(mode < state.modes(),
          "mode index " + std::to_string(mode) + " out of range for " + std::to_string(state.modes()) + " modes");
}

// Real part of a weighted sum whose imaginary part must cancel.
double real_checked(Complex sum, double scale, const char* what) {
  const double residue = std::abs(sum.imag());
  if (residue > kResidueTol * std::max(1.0, scale)) {
    throw InvariantViolation(std::string(what) + ": imaginary residue " + std::to_string(residue) +
                             " exceeds tolerance");
  }
  return sum.real();
}

template <class Term>
std::pair<Complex, double> weighted_sum(const GeneralizedPState& state, Term term) {
  Complex sum{};
  double scale = 0.0;
  for (const auto& c : state.components()) {
    const Complex t = c.weight * term(c);
    sum += t;
    scale += std::abs(t);
  }
  return {sum, scale};
}

}  // namespace

Complex occupation_sum(const GeneralizedPState& state, std::size_t mode) {
  check_mode(state, mode);
  return weighted_sum(state, [mode](const WeightedComponent& c) {
           return c.alpha[mode] * std::conj(c.alpha_tilde[mode]);
         }).first;
}

Complex pair_moment_sum(const GeneralizedPState& state, std::size_t i, std::size_t j) {
  check_mode(state, i);
  check_mode(state, j);
  return weighted_sum(state, [i, j](const WeightedComponent& c) {
           return std::conj(c.alpha_tilde[i]) * std::conj(c.alpha_tilde[j]) * c.alpha[i] * c.alpha[j];
         }).first;
}

double mean_occupation(const GeneralizedPState& state, std::size_t mode) {
  check_mode(state, mode);
  const auto [sum, scale] = weighted_sum(state, [mode](const WeightedComponent& c) {
    return c.alpha[mode] * std::conj(c.alpha_tilde[mode]);
  });
  return real_checked(sum, scale, "mean occupation");
}

std::optional<double> cross_g2(const GeneralizedPState& state, std::size_t i, std::size_t j) {
  require(i != j, "cross g2 needs two distinct modes");
  check_mode(state, i);
  check_mode(state, j);
  const double ni = mean_occupation(state, i);
  const double nj = mean_occupation(state, j);
  if (ni <= kOccupationFloor || nj <= kOccupationFloor) return std::nullopt;
  const auto [sum, scale] = weighted_sum(state, [i, j](const WeightedComponent& c) {
    return std::conj(c.alpha_tilde[i]) * std::conj(c.alpha_tilde[j]) * c.alpha[i] * c.alpha[j];
  });
  return real_checked(sum, scale, "cross correlation") / (ni * nj);
}

CorrelationSet correlations(const GeneralizedPState& state) {
  CorrelationSet out;
  const std::size_t n = state.modes();
  out.occupations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.occupations.push_back(mean_occupation(state, i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.pairs.emplace_back(i, j);
      out.cross_g2.push_back(cross_g2(state, i, j));
    }
  }
  return out;
}

double PhotonDistribution::total() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double PhotonDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probabilities.size(); ++n) m += static_cast<double>(n) * probabilities[n];
  return m;
}

PhotonDistribution photon_distribution(const GeneralizedPState& state, std::size_t mode, std::size_t n_max) {
  check_mode(state, mode);
  constexpr std::size_t kLogSpaceFrom = 30;
  std::vector<Complex> sums(n_max + 1);
  std::vector<double> scales(n_max + 1, 0.0);
  for (const auto& c : state.components()) {
    // x = alpha alpha~^*; term_n = x^n / n! e^{-x}
    const Complex x = c.alpha[mode] * std::conj(c.alpha_tilde[mode]);
    Complex term = c.weight * std::exp(-x);
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (n > 0) {
        if (n <= kLogSpaceFrom) {
          term *= x / static_cast<double>(n);
        } else if (x == Complex{}) {
          term = 0.0;
        } else {
          const double nn = static_cast<double>(n);
          term = c.weight * std::exp(nn * std::log(x) - std::lgamma(nn + 1.0) - x);
        }
      }
      sums[n] += term;
      scales[n] += std::abs(term);
    }
  }
  PhotonDistribution out;
  out.probabilities.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.probabilities.push_back(real_checked(sums[n], scales[n], "photon-number probability"));
  }
  return out;
}

double WignerGridSpec::cell_area() const {
  return (re_max - re_min) / (resolution - 1.0) * (im_max - im_min) / (resolution - 1.0);
}

double WignerGrid::integral() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * spec.cell_area();
}

double WignerGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double WignerGrid::max() const { return *std::max_element(values.begin(), values.end()); }

double wigner_at(const GeneralizedPState& state, std::size_t mode, Complex xi) {
  double w = 0.0;
  for (const auto& c : state.components()) {
    const Complex e = -2.0 * (std::conj(xi) - std::conj(c.alpha_tilde[mode])) * (xi - c.alpha[mode]);
    w += (c.weight * std::exp(e)).real();
  }
  return 2.0 / kPi * w;
}

WignerGrid wigner(const GeneralizedPState& state, std::size_t mode, const WignerGridSpec& spec) {
  check_mode(state, mode);
  require(std::isfinite(spec.re_min) && std::isfinite(spec.re_max) && std::isfinite(spec.im_min) &&
              std::isfinite(spec.im_max),
          "Wigner grid extents must be finite");
  require(spec.re_max > spec.re_min && spec.im_max > spec.im_min, "Wigner grid extents must be increasing");
  require(spec.resolution >= 2, "Wigner grid resolution must be at least 2");
  WignerGrid grid{spec, std::vector<double>(spec.resolution * spec.resolution)};
  parallel_for(spec.resolution, [&](std::size_t row) {
    const double im = spec.im_at(row);
    for (std::size_t col = 0; col < spec.resolution; ++col) {
      grid.values[row * spec.resolution + col] = wigner_at(state, mode, {spec.re_at(col), im});
    }
  });
  return grid;
}

}  // namespace wgsim
