#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "support.hpp"
#include "wgsim/observables.hpp"
#include "wgsim/qrc.hpp"

using namespace wgsim;
using namespace wgsim::qrc;

namespace {

// Two noisy, overlapping Gaussian blobs in features n_1, n_2.
std::vector<FeatureRecord> synthetic(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<FeatureRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureRecord r;
    r.label = static_cast<int>(i % 2);
    r.occupations = {g(rng) + 0.8 * r.label, 2.0 * g(rng) - 0.5 * r.label, 3.0, g(rng)};
    r.cross_g2 = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("qrc") {

TEST_CASE("spiral dataset shape and normalization") {
  const auto d = generate_spirals(800, 0.03, 7);
  REQUIRE(d.size() == 800);
  std::size_t ones = 0;
  double extent = 0.0;
  for (const auto& p : d.points) {
    ones += p.label;
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  CHECK(ones == 400);
  CHECK(extent == doctest::Approx(1.0).epsilon(1e-15));

  const auto again = generate_spirals(800, 0.03, 7);
  const auto other = generate_spirals(800, 0.03, 8);
  CHECK(again.points[123].x == d.points[123].x);
  CHECK(other.points[123].x != d.points[123].x);
}

TEST_CASE("noise-free spirals are point-symmetric between classes") {
  const auto d = generate_spirals(200, 0.0, 1, kPi / 4, 2 * kPi);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(d.points[k].x == doctest::Approx(-d.points[k + 100].x).epsilon(1e-12));
    CHECK(d.points[k].y == doctest::Approx(-d.points[k + 100].y).epsilon(1e-12));
  }
  // outermost point of class 0 sits at angle t_max = 2 pi, radius 1
  CHECK(d.points[99].x == doctest::Approx(1.0));
  CHECK(std::abs(d.points[99].y) < 1e-12);
}

TEST_CASE("spiral argument checks") {
  CHECK_THROWS_AS(generate_spirals(7, 0.03, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_spirals(8, -1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_spirals(8, 0.0, 0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("encoding templates") {
  const EncodingSpec q;
  const auto in = q.inputs(0.5, -1.0);
  CHECK(std::abs(std::get<CoherentSpec>(in[0]).beta - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(std::get<CatSpec>(in[1]).beta == Complex(1.0));
  CHECK(std::get<CatSpec>(in[1]).theta == 0.0);
  CHECK(std::abs(std::get<CoherentSpec>(in[2]).beta - Complex(1.4, 0.0)) < 1e-15);
  CHECK(std::get<CoherentSpec>(in[3]).beta == Complex(0, 1));
  EncodingSpec c;
  c.classical = true;
  CHECK(std::get<CoherentSpec>(c.inputs(0, 0)[1]).beta == Complex(1.0));
}

TEST_CASE("classical encoding gives unit cross correlations everywhere") {
  const auto t = transfer_matrix(testsupport::four_mode_schedule(), 5.0);
  EncodingSpec c;
  c.classical = true;
  for (double x : {-1.0, -0.2, 0.7}) {
    const auto r = features_at(x, 0.3, 1, c, t);
    for (double g : r.cross_g2) CHECK(std::abs(g - 1.0) < 1e-10);
    double total = 0.0;
    for (double n : r.occupations) total += n;
    CHECK(total == doctest::Approx(1.0 + 1.0 + 1.96 + 1.0).epsilon(1e-10));
  }
}

TEST_CASE("features agree with propagating the state directly") {
  const auto s = testsupport::four_mode_schedule();
  const auto t = transfer_matrix(s, 5.0);
  const EncodingSpec q;
  const auto r = features_at(0.4, -0.6, 0, q, t);
  const auto in = q.inputs(0.4, -0.6);
  const auto out = propagate(make_product_state(in), s, 5.0, 30000.0).back().state;
  const auto c = correlations(out);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.occupations[i] == doctest::Approx(c.occupations[i]).epsilon(1e-10));
  for (std::size_t p = 0; p < 6; ++p) CHECK(r.cross_g2[p] == doctest::Approx(*c.cross_g2[p]).epsilon(1e-10));
  // the kitten makes the output non-classical
  CHECK(std::any_of(r.cross_g2.begin(), r.cross_g2.end(), [](double g) { return std::abs(g - 1.0) > 1e-3; }));
}

TEST_CASE("undefined correlations surface as invariant violations") {
  const CouplingSchedule idle(4, {}, 100.0);
  const auto t = transfer_matrix(idle, 1.0);
  EncodingSpec e;
  e.mode4 = 0.0;
  SpiralDataset d;
  d.points = {{0.1, 0.1, 0}, {0.2, 0.2, 1}};
  CHECK_THROWS_AS(extract_features(d, e, t), InvariantViolation);
  CHECK_THROWS_AS(extract_features(d, e, testsupport::two_mode_schedule(1.0), 1.0), std::invalid_argument);
}

TEST_CASE("feature masks") {
  CHECK(mask_indices(FeatureMask::occupations) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(mask_indices(FeatureMask::correlations) == std::vector<std::size_t>{4, 5, 6, 7, 8, 9});
  CHECK(mask_indices(FeatureMask::all).size() == 10);
  CHECK(to_string(FeatureMask::correlations) == "correlations");
}

TEST_CASE("standardizer uses the population standard deviation") {
  const auto s = Standardizer::fit({{1.0, 5.0}, {3.0, 5.0}});
  CHECK(s.mean[0] == 2.0);
  CHECK(s.stddev[0] == 1.0);
  CHECK_FALSE(s.degenerate[0]);
  CHECK(s.degenerate[1]);
  const double row[] = {4.0, 7.0};
  const auto z = s.apply(row);
  CHECK(z[0] == 2.0);
  CHECK(z[1] == 0.0);
  CHECK_THROWS_AS(Standardizer::fit({}), std::invalid_argument);
}

TEST_CASE("logistic readout reaches a stationary point") {
  const auto data = synthetic(400, 3);
  const auto m = fit_readout(data, FeatureMask::occupations);
  CHECK(m.diagnostics.gradient_norm <= 1e-8);
  CHECK(m.diagnostics.iterations < 100);
  for (std::size_t k = 1; k < m.diagnostics.loss_history.size(); ++k) {
    CHECK(m.diagnostics.loss_history[k] <= m.diagnostics.loss_history[k - 1]);
  }
  // Independent check of the score equations on standardized features.
  std::vector<double> score(5, 0.0);
  for (const auto& r : data) {
    const double p = m.probability(r);
    const double row[] = {r.occupations[0], r.occupations[1], r.occupations[2], r.occupations[3]};
    const auto z = m.standardizer.apply(row);
    for (int j = 0; j < 4; ++j) score[j] += (p - r.label) * z[j];
    score[4] += p - r.label;
  }
  for (double s : score) CHECK(std::abs(s) / data.size() < 1e-7);
  // n_3 is constant: flagged, weight stays 0
  REQUIRE(m.diagnostics.warnings.size() == 1);
  CHECK(m.weights[2] == 0.0);
  CHECK(accuracy(m, data) > 0.6);
}

TEST_CASE("all-correlation-constant features predict the base rate") {
  const auto data = synthetic(100, 4);
  const auto m = fit_readout(data, FeatureMask::correlations);
  CHECK(m.diagnostics.warnings.size() == 6);
  CHECK(m.probability(data[0]) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("class-balanced splits are deterministic and disjoint") {
  const auto data = synthetic(400, 5);
  ResampleSpec spec{10, 150, 50, 42};
  const auto a = draw_split(data, spec, 3);
  const auto b = draw_split(data, spec, 3);
  const auto c = draw_split(data, spec, 4);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(a.train != c.train);
  CHECK(a.train.size() == 300);
  CHECK(a.test.size() == 100);
  std::set<std::size_t> seen(a.train.begin(), a.train.end());
  for (auto k : a.test) CHECK(seen.insert(k).second);
  std::size_t ones = 0;
  for (auto k : a.train) ones += data[k].label;
  CHECK(ones == 150);
  ResampleSpec big{1, 201, 50, 0};
  CHECK_THROWS_AS(draw_split(data, big, 0), std::invalid_argument);
}

TEST_CASE("evaluate shares splits across variants and reports the sample std") {
  const auto data = synthetic(400, 6);
  const Variant v[] = {{"a", &data, FeatureMask::occupations}, {"b", &data, FeatureMask::occupations}};
  const ResampleSpec spec{12, 150, 50, 9};
  const auto rep = evaluate(v, spec);
  REQUIRE(rep.variants.size() == 2);
  CHECK(rep.variants[0].accuracies == rep.variants[1].accuracies);
  const auto& acc = rep.variants[0].accuracies;
  double mean = 0.0;
  for (double x : acc) mean += x / acc.size();
  double ss = 0.0;
  for (double x : acc) ss += (x - mean) * (x - mean);
  CHECK(rep.variants[0].mean == doctest::Approx(mean));
  CHECK(rep.variants[0].stddev == doctest::Approx(std::sqrt(ss / (acc.size() - 1))));
  // reproducible under a fixed seed
  CHECK(evaluate(v, spec).variants[0].accuracies == acc);
  const std::vector<FeatureRecord> short_data(data.begin(), data.begin() + 10);
  const Variant mismatch[] = {{"a", &data, FeatureMask::all}, {"b", &short_data, FeatureMask::all}};
  CHECK_THROWS_AS(evaluate(mismatch, spec), std::invalid_argument);
}

TEST_CASE("decision boundary grid covers the square with x fastest") {
  const auto t = transfer_matrix(testsupport::four_mode_schedule(), 5.0);
  const auto data = extract_features(generate_spirals(40, 0.03, 1), EncodingSpec{}, t);
  const auto m = fit_readout(data, FeatureMask::correlations);
  const auto grid = decision_boundary(m, EncodingSpec{}, t, 11);
  REQUIRE(grid.size() == 121);
  CHECK(grid[0].x == -1.0);
  CHECK(grid[0].y == -1.0);
  CHECK(grid[1].x == doctest::Approx(-0.8));
  CHECK(grid[1].y == -1.0);
  CHECK(grid[120].x == 1.0);
  CHECK(grid[120].y == 1.0);
  for (const auto& p : grid) CHECK((p.p >= 0.0 && p.p <= 1.0));
}

}  // TEST_SUITE
