#pragma once

// Expectation values from weighted components. For a delta-term state every
// estimator is a weighted sum of c-number kernel traces Tr[O Lambda_v].
// The imaginary part of each sum must vanish for a Hermitian-paired state;
// it is checked against kResidueTol and never silently dropped.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "wgsim/common.hpp"
#include "wgsim/phasespace.hpp"

namespace wgsim {

inline constexpr double kOccupationFloor = 1e-9;
inline constexpr double kResidueTol = 1e-10;

/// Raw weighted sum of alpha_i alpha~_i^*; the real part is <n_i>.
Complex occupation_sum(const GeneralizedPState& state, std::size_t mode);

/// Raw weighted sum of alpha~_i^* alpha~_j^* alpha_i alpha_j.
Complex pair_moment_sum(const GeneralizedPState& state, std::size_t i, std::size_t j);

double mean_occupation(const GeneralizedPState& state, std::size_t mode);

/// g2_ij = <a_i^+ a_j^+ a_i a_j> / (<n_i><n_j>); nullopt when either
/// occupation is below kOccupationFloor.
std::optional<double> cross_g2(const GeneralizedPState& state, std::size_t i, std::size_t j);

/// Occupations of all modes plus g2 for every pair i < j in lexicographic order.
struct CorrelationSet {
  std::vector<double> occupations;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::optional<double>> cross_g2;
};

CorrelationSet correlations(const GeneralizedPState& state);

struct PhotonDistribution {
  std::vector<double> probabilities;  ///< P(n), n = 0..n_max

  double total() const;
  double mean() const;
};

PhotonDistribution photon_distribution(const GeneralizedPState& state, std::size_t mode, std::size_t n_max);

struct WignerGridSpec {
  double re_min = -4.0;
  double re_max = 4.0;
  double im_min = -4.0;
  double im_max = 4.0;
  std::size_t resolution = 201;

  double re_at(std::size_t col) const { return re_min + (re_max - re_min) * col / (resolution - 1.0); }
  double im_at(std::size_t row) const { return im_min + (im_max - im_min) * row / (resolution - 1.0); }
  double cell_area() const;
};

/// Row-major samples: row r is Im(xi) = im_at(r), column c is Re(xi) = re_at(c).
struct WignerGrid {
  WignerGridSpec spec;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * spec.resolution + col]; }
  /// Riemann sum of the samples times the cell area.
  double integral() const;
  double min() const;
  double max() const;
};

/// Single-mode reduced Wigner function at xi.
double wigner_at(const GeneralizedPState& state, std::size_t mode, Complex xi);
WignerGrid wigner(const GeneralizedPState& state, std::size_t mode, const WignerGridSpec& spec = {});

}  // namespace wgsim
