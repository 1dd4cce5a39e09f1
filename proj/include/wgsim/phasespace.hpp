#pragma once

// Multimode states as finite sums of complex-weighted coherent dyadic kernels
//   rho = sum_v w_v |alpha_v><alpha~_v| / <alpha~_v|alpha_v>
// i.e. a generalized-P distribution made of delta terms only.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "wgsim/common.hpp"

namespace wgsim {

/// One delta term of the distribution: weight w with a (alpha, alpha~) pair per mode.
struct WeightedComponent {
  Complex weight;
  std::vector<Complex> alpha;
  std::vector<Complex> alpha_tilde;
};

/// Immutable list of weighted components over a fixed number of modes.
///
/// Construction validates shapes, finiteness, nonzero weights, unit trace
/// (sum of weights) and the Hermiticity pairing: every (w, a, a~) has a
/// partner (w*, a~, a) in the list.
class GeneralizedPState {
 public:
  GeneralizedPState(std::size_t modes, std::vector<WeightedComponent> components);

  std::size_t modes() const { return modes_; }
  std::size_t size() const { return components_.size(); }
  std::span<const WeightedComponent> components() const { return components_; }
  const WeightedComponent& operator[](std::size_t i) const { return components_[i]; }

  Complex trace() const;

  /// Exhaustive pairing check, O(size^2).
  bool is_hermitian_paired(double tol = 1e-12) const;

 private:
  std::size_t modes_;
  std::vector<WeightedComponent> components_;
};

/// psi ∝ a|beta> + b e^{i theta}|-beta>, with a^2 + b^2 = 1.
struct CatSpec {
  Complex beta;
  double a = 1.0 / 1.4142135623730951;
  double b = 1.0 / 1.4142135623730951;
  double theta = 0.0;
};

/// General coherent-state superposition psi ∝ sum_j c_j |beta_j>.
struct Superposition {
  std::vector<Complex> amplitudes;
  std::vector<Complex> coeffs;
};

struct CoherentSpec {
  Complex beta;
};

/// Single-mode input declaration as it appears in run configurations.
using ModeSpec = std::variant<CoherentSpec, CatSpec, Superposition>;

GeneralizedPState coherent_state(Complex beta);
GeneralizedPState cat_state(const CatSpec& spec);
GeneralizedPState multi_cat_state(std::span<const Complex> amplitudes, std::span<const Complex> coeffs);
GeneralizedPState product_state(std::span<const GeneralizedPState> single_mode_states);

/// Ket-level description of a mode spec (used by the Fock-basis oracle).
Superposition to_superposition(const ModeSpec& spec);
GeneralizedPState make_state(const ModeSpec& spec);
GeneralizedPState make_product_state(std::span<const ModeSpec> specs);

}  // namespace wgsim
