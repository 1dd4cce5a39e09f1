#include "wgsim/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wgsim {

namespace {

constexpr double kZeroWeight = 1e-15;
constexpr double kTraceTol = 1e-12;

bool amplitudes_close(const std::vector<Complex>& x, const std::vector<Complex>& y, double tol) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - y[i]) > tol * std::max(1.0, std::abs(x[i]))) return false;
  }
  return true;
}

// log <beta_k|beta_j>
Complex log_overlap(Complex bra, Complex ket) {
  return -0.5 * std::norm(ket) - 0.5 * std::norm(bra) + std::conj(bra) * ket;
}

}  // namespace

GeneralizedPState::GeneralizedPState(std::size_t modes, std::vector<WeightedComponent> components)
    : modes_(modes), components_(std::move(components)) {
  require(modes_ > 0, "state must have at least one mode");
  require(!components_.empty(), "state must have at least one component");
  double abs_sum = 0.0;
  for (std::size_t v = 0; v < components_.size(); ++v) {
    const auto& c = components_[v];
    const std::string where = "component " + std::to_string(v);
    require(c.alpha.size() == modes_ && c.alpha_tilde.size() == modes_,
            where + ": amplitude vectors must have one entry per mode");
    require(is_finite(c.weight) && c.weight != Complex{}, where + ": weight must be finite and nonzero");
    for (std::size_t i = 0; i < modes_; ++i) {
      require(is_finite(c.alpha[i]) && is_finite(c.alpha_tilde[i]), where + ": non-finite amplitude");
    }
    abs_sum += std::abs(c.weight);
  }
  const double drift = std::abs(trace() - 1.0);
  require(drift <= kTraceTol * std::max(1.0, abs_sum),
          "weights must sum to one (trace deviation " + std::to_string(drift) + ")");
  require(is_hermitian_paired(), "state violates the Hermiticity pairing");
}

Complex GeneralizedPState::trace() const {
  Complex sum{};
  for (const auto& c : components_) sum += c.weight;
  return sum;
}

bool GeneralizedPState::is_hermitian_paired(double tol) const {
  for (const auto& c : components_) {
    const bool found = std::any_of(components_.begin(), components_.end(), [&](const WeightedComponent& d) {
      return std::abs(d.weight - std::conj(c.weight)) <= tol * std::max(1.0, std::abs(c.weight)) &&
             amplitudes_close(d.alpha, c.alpha_tilde, tol) && amplitudes_close(d.alpha_tilde, c.alpha, tol);
    });
    if (!found) return false;
  }
  return true;
}

GeneralizedPState coherent_state(Complex beta) {
  require(is_finite(beta), "coherent amplitude must be finite");
  return GeneralizedPState(1, {WeightedComponent{1.0, {beta}, {beta}}});
}

GeneralizedPState multi_cat_state(std::span<const Complex> amplitudes, std::span<const Complex> coeffs) {
  require(!amplitudes.empty(), "superposition needs at least one amplitude");
  require(amplitudes.size() == coeffs.size(), "amplitude and coefficient lists differ in length");
  require(std::any_of(coeffs.begin(), coeffs.end(), [](Complex c) { return c != Complex{}; }),
          "superposition coefficients are all zero");
  for (std::size_t j = 0; j < amplitudes.size(); ++j) {
    require(is_finite(amplitudes[j]) && is_finite(coeffs[j]), "superposition entries must be finite");
  }

  const std::size_t m = amplitudes.size();
  // Unnormalized weights c_j c_k^* <beta_k|beta_j> (ket j, bra k) in log space;
  // the largest real part is shifted to zero before exponentiating.
  std::vector<Complex> log_w(m * m);
  std::vector<bool> present(m * m, false);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (coeffs[j] == Complex{} || coeffs[k] == Complex{}) continue;
      Complex lw = std::log(coeffs[j] * std::conj(coeffs[k]));
      if (j != k) lw += log_overlap(amplitudes[k], amplitudes[j]);
      log_w[k * m + j] = lw;
      present[k * m + j] = true;
      shift = std::max(shift, lw.real());
    }
  }

  std::vector<Complex> raw(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!present[k * m + j]) continue;
      if (j == k) {
        raw[k * m + j] = std::exp(log_w[k * m + j].real() - shift);
      } else if (j > k) {
        raw[k * m + j] = std::exp(log_w[k * m + j] - shift);
        // (k, j) is the Hermitian partner of (j, k); keep the pairing exact.
        raw[j * m + k] = std::conj(raw[k * m + j]);
      }
    }
  }

  Complex norm{};
  double abs_sum = 0.0;
  for (const auto& r : raw) {
    norm += r;
    abs_sum += std::abs(r);
  }
  require(std::abs(norm) > 1e-13 * abs_sum, "superposition has vanishing norm");
  const double n = norm.real();

  std::vector<WeightedComponent> comps;
  comps.reserve(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!present[k * m + j]) continue;
      const Complex w = raw[k * m + j] / n;
      if (std::abs(w) < kZeroWeight) continue;
      comps.push_back({w, {amplitudes[j]}, {amplitudes[k]}});
    }
  }
  return GeneralizedPState(1, std::move(comps));
}

GeneralizedPState cat_state(const CatSpec& spec) {
  require(std::isfinite(spec.a) && std::isfinite(spec.b) && std::isfinite(spec.theta), "cat parameters must be finite");
  require(std::abs(spec.a * spec.a + spec.b * spec.b - 1.0) <= 1e-12, "cat coefficients must satisfy a^2 + b^2 = 1");
  const Complex amps[] = {spec.beta, -spec.beta};
  const Complex coeffs[] = {spec.a, spec.b * std::polar(1.0, spec.theta)};
  return multi_cat_state(amps, coeffs);
}

GeneralizedPState product_state(std::span<const GeneralizedPState> single_mode_states) {
  require(!single_mode_states.empty(), "product of an empty list of states");
  for (const auto& s : single_mode_states) require(s.modes() == 1, "product_state expects single-mode factors");

  std::vector<WeightedComponent> comps{WeightedComponent{1.0, {}, {}}};
  for (const auto& s : single_mode_states) {
    std::vector<WeightedComponent> next;
    next.reserve(comps.size() * s.size());
    for (const auto& c : comps) {
      for (const auto& f : s.components()) {
        WeightedComponent p = c;
        p.weight *= f.weight;
        p.alpha.push_back(f.alpha[0]);
        p.alpha_tilde.push_back(f.alpha_tilde[0]);
        next.push_back(std::move(p));
      }
    }
    comps = std::move(next);
  }
  std::erase_if(comps, [](const WeightedComponent& c) { return std::abs(c.weight) < kZeroWeight; });
  return GeneralizedPState(single_mode_states.size(), std::move(comps));
}

Superposition to_superposition(const ModeSpec& spec) {
  struct Visitor {
    Superposition operator()(const CoherentSpec& c) const { return {{c.beta}, {1.0}}; }
    Superposition operator()(const CatSpec& c) const {
      return {{c.beta, -c.beta}, {c.a, c.b * std::polar(1.0, c.theta)}};
    }
    Superposition operator()(const Superposition& s) const { return s; }
  };
  return std::visit(Visitor{}, spec);
}

GeneralizedPState make_state(const ModeSpec& spec) {
  struct Visitor {
    GeneralizedPState operator()(const CoherentSpec& c) const { return coherent_state(c.beta); }
    GeneralizedPState operator()(const CatSpec& c) const { return cat_state(c); }
    GeneralizedPState operator()(const Superposition& s) const { return multi_cat_state(s.amplitudes, s.coeffs); }
  };
  return std::visit(Visitor{}, spec);
}

GeneralizedPState make_product_state(std::span<const ModeSpec> specs) {
  std::vector<GeneralizedPState> factors;
  factors.reserve(specs.size());
  for (const auto& s : specs) factors.push_back(make_state(s));
  return product_state(factors);
}

}  // namespace wgsim
