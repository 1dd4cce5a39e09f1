#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wgsim/observables.hpp"

using namespace wgsim;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

// <n1 n2> / (<n1><n2>) for a two-mode product ket given by per-mode Fock amplitudes.
double product_g2(const std::vector<Complex>& m1, const std::vector<Complex>& m2) {
  const auto p1 = testsupport::normalized_populations(m1);
  const auto p2 = testsupport::normalized_populations(m2);
  double n1 = 0, n2 = 0, n12 = 0;
  for (std::size_t a = 0; a < p1.size(); ++a) {
    for (std::size_t b = 0; b < p2.size(); ++b) {
      n1 += a * p1[a] * p2[b];
      n2 += b * p1[a] * p2[b];
      n12 += double(a) * b * p1[a] * p2[b];
    }
  }
  return n12 / (n1 * n2);
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("coherent occupation is |beta|^2") {
  CHECK(mean_occupation(coherent_state(Complex(0, 1.4)), 0) == doctest::Approx(1.96).epsilon(1e-15));
  CHECK(mean_occupation(coherent_state(0.0), 0) == 0.0);
}

TEST_CASE("kitten occupation matches the closed form") {
  CHECK(std::abs(mean_occupation(cat_state({1.0, kH, kH, 0.0}), 0) - std::tanh(1.0)) < 1e-12);
  // odd cat: |b|^2 coth(|b|^2)
  CHECK(std::abs(mean_occupation(cat_state({2.0, kH, kH, kPi}), 0) - 4.0 / std::tanh(4.0)) < 1e-12);
  // theta = pi/2: the interference terms cancel in <n>
  CHECK(std::abs(mean_occupation(cat_state({1.0, kH, kH, kPi / 2}), 0) - 1.0) < 1e-12);
}

TEST_CASE("photon distribution of the even cat") {
  const auto d = photon_distribution(cat_state({2.0, kH, kH, 0.0}), 0, 40);
  REQUIRE(d.probabilities.size() == 41);
  for (std::size_t n = 1; n < 41; n += 2) CHECK(std::abs(d.probabilities[n]) < 1e-14);
  CHECK(std::abs(d.probabilities[0] - 4 * std::exp(-4.0) / (2 * (1 + std::exp(-8.0)))) < 1e-12);
  const auto ref = testsupport::normalized_populations(testsupport::fock_amplitudes({2.0, -2.0}, {kH, kH}, 41));
  for (std::size_t n = 0; n < 41; ++n) CHECK(std::abs(d.probabilities[n] - ref[n]) < 1e-13);
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distribution mean equals the occupation estimator") {
  for (double theta : {0.0, kPi / 2}) {
    const auto s = cat_state({1.0, kH, kH, theta});
    CHECK(std::abs(photon_distribution(s, 0, 40).mean() - mean_occupation(s, 0)) < 1e-10);
  }
}

TEST_CASE("coherent distribution is Poisson including the log-space branch") {
  const Complex beta = std::polar(6.0, 0.3);
  const auto d = photon_distribution(coherent_state(beta), 0, 90);
  for (std::size_t n : {0u, 5u, 30u, 31u, 36u, 60u, 90u}) {
    CAPTURE(n);
    const double p = testsupport::poisson(36.0, n);
    CHECK(std::abs(d.probabilities[n] - p) < 1e-12 * std::max(1.0, p) + 1e-300);
  }
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("phase superposition distribution matches the Fock expansion") {
  const Complex amps[] = {1.2, Complex(0, 1.2), -1.2};
  const Complex coeffs[] = {0.5, Complex(0.3, 0.4), 0.2};
  const auto s = multi_cat_state(amps, coeffs);
  const auto ref = testsupport::normalized_populations(
      testsupport::fock_amplitudes({amps[0], amps[1], amps[2]}, {coeffs[0], coeffs[1], coeffs[2]}, 30));
  const auto d = photon_distribution(s, 0, 29);
  for (std::size_t n = 0; n < 30; ++n) CHECK(std::abs(d.probabilities[n] - ref[n]) < 1e-13);
}

TEST_CASE("cross g2 of product states factorizes") {
  const ModeSpec specs[] = {CatSpec{1.0, kH, kH, kPi / 2}, CoherentSpec{std::polar(1.0, kPi / 8)}};
  const auto s = make_product_state(specs);
  const auto g = cross_g2(s, 0, 1);
  REQUIRE(g.has_value());
  CHECK(std::abs(*g - 1.0) < 1e-12);
  // Brute-force Fock computation at cutoff 20.
  const auto m1 = testsupport::fock_amplitudes({1.0, -1.0}, {kH, kH * Complex(0, 1)}, 20);
  const auto m2 = testsupport::fock_amplitudes({std::polar(1.0, kPi / 8)}, {1.0}, 20);
  CHECK(std::abs(product_g2(m1, m2) - *g) < 1e-8);
}

TEST_CASE("cross g2 of a 50:50 split kitten matches the analytic value") {
  // Even cat and vacuum through a symmetric splitter give |c, ic> + |-c, -ic>
  // with c = b/sqrt(2); the pair moment is |c|^4 on every component.
  const double b = 1.3, c2 = b * b / 2;
  GeneralizedPState in = cat_state({b, kH, kH, 0.0});
  const ModeSpec vac = CoherentSpec{0.0};
  const GeneralizedPState parts[] = {in, make_state(vac)};
  const auto two = product_state(parts);
  // Apply the splitter by hand.
  std::vector<WeightedComponent> comps;
  for (const auto& c : two.components()) {
    auto split = [](const std::vector<Complex>& a) {
      return std::vector<Complex>{(a[0] + Complex(0, 1) * a[1]) * kH, (Complex(0, 1) * a[0] + a[1]) * kH};
    };
    comps.push_back({c.weight, split(c.alpha), split(c.alpha_tilde)});
  }
  const GeneralizedPState out(2, comps);
  const double e = std::exp(-2 * b * b);
  const double n_each = c2 * (1 - e) / (1 + e);
  const double pair = c2 * c2;  // alpha-bar^2 alpha^2 is the same on all four components
  CHECK(mean_occupation(out, 0) == doctest::Approx(n_each).epsilon(1e-12));
  CHECK(*cross_g2(out, 0, 1) == doctest::Approx(pair / (n_each * n_each)).epsilon(1e-12));
}

TEST_CASE("correlation set enumerates pairs lexicographically") {
  const ModeSpec specs[] = {CoherentSpec{1.0}, CoherentSpec{2.0}, CoherentSpec{0.0}, CoherentSpec{Complex(0, 1)}};
  const auto c = correlations(make_product_state(specs));
  REQUIRE(c.pairs.size() == 6);
  CHECK(c.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(c.pairs[5] == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(c.occupations[1] == doctest::Approx(4.0));
  CHECK(*c.cross_g2[0] == doctest::Approx(1.0));
  // mode 3 is vacuum: every pair involving it is undefined
  CHECK_FALSE(c.cross_g2[1].has_value());
  CHECK_FALSE(c.cross_g2[3].has_value());
  CHECK_FALSE(c.cross_g2[5].has_value());
  CHECK(c.cross_g2[2].has_value());
  CHECK(c.cross_g2[4].has_value());
}

TEST_CASE("Wigner function of cats matches the closed form") {
  for (double theta : {0.0, kPi / 2, kPi}) {
    const auto s = cat_state({1.5, kH, kH, theta});
    for (Complex xi : {Complex(0, 0), Complex(0.3, 0.2), Complex(-1.4, 0.1), Complex(0.2, -0.9)}) {
      CHECK(std::abs(wigner_at(s, 0, xi) - testsupport::cat_wigner(1.5, kH, kH, theta, xi)) < 1e-12);
    }
  }
  CHECK(wigner_at(coherent_state(Complex(0.5, 0.5)), 0, Complex(0.5, 0.5)) == doctest::Approx(2 / kPi));
}

TEST_CASE("Wigner grid of the phase kitten is normalized and negative") {
  const auto grid = wigner(cat_state({1.0, kH, kH, kPi / 2}), 0);
  CHECK(grid.values.size() == 201 * 201);
  CHECK(std::abs(grid.integral() - 1.0) < 1e-3);
  CHECK(grid.min() < 0.0);
  // Rows index the imaginary axis.
  CHECK(grid.at(0, 100) == doctest::Approx(wigner_at(cat_state({1.0, kH, kH, kPi / 2}), 0, Complex(0, -4))));
}

TEST_CASE("square four-component cat Wigner grid integrates to one") {
  const Complex amps[] = {2.0, Complex(0, 2), -2.0, Complex(0, -2)};
  const Complex coeffs[] = {0.5, 0.5, 0.5, 0.5};
  const auto grid = wigner(multi_cat_state(amps, coeffs), 0);
  CHECK(std::abs(grid.integral() - 1.0) < 1e-3);
}

TEST_CASE("reduced Wigner of one mode of a product state ignores the other") {
  const ModeSpec specs[] = {CatSpec{1.0, kH, kH, kPi / 2}, CoherentSpec{Complex(0.7, -0.2)}};
  const auto s = make_product_state(specs);
  const auto single = cat_state({1.0, kH, kH, kPi / 2});
  for (Complex xi : {Complex(0.1, 0.4), Complex(-0.6, 0.0)}) {
    CHECK(wigner_at(s, 0, xi) == doctest::Approx(wigner_at(single, 0, xi)).epsilon(1e-12));
  }
}

TEST_CASE("argument checks") {
  const auto s = coherent_state(1.0);
  CHECK_THROWS_AS(mean_occupation(s, 1), std::invalid_argument);
  CHECK_THROWS_AS(photon_distribution(s, 2, 5), std::invalid_argument);
  WignerGridSpec bad;
  bad.resolution = 1;
  CHECK_THROWS_AS(wigner(s, 0, bad), std::invalid_argument);
  bad = {};
  bad.re_max = bad.re_min;
  CHECK_THROWS_AS(wigner(s, 0, bad), std::invalid_argument);
  const ModeSpec specs[] = {CoherentSpec{1.0}, CoherentSpec{1.0}};
  CHECK_THROWS_AS(cross_g2(make_product_state(specs), 1, 1), std::invalid_argument);
}

}  // TEST_SUITE
