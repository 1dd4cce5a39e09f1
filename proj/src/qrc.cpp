#include "wgsim/qrc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wgsim/observables.hpp"
#include "wgsim/parallel.hpp"

namespace wgsim::qrc {

SpiralDataset generate_spirals(std::size_t n_points, double noise, std::uint64_t seed, double t_min, double t_max) {
  require(n_points >= 2 && n_points % 2 == 0, "spiral dataset needs an even number of points");
  require(noise >= 0.0 && std::isfinite(noise), "noise must be non-negative");
  require(t_min > 0.0 && t_max > t_min, "spiral parameter range must satisfy 0 < t_min < t_max");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t per_class = n_points / 2;

  SpiralDataset data;
  data.points.reserve(n_points);
  for (int label = 0; label < 2; ++label) {
    for (std::size_t k = 0; k < per_class; ++k) {
      const double t = per_class == 1 ? t_max : t_min + (t_max - t_min) * k / (per_class - 1.0);
      const double r = t / t_max;
      const double phi = t + label * kPi;
      data.points.push_back({r * std::cos(phi) + noise * gauss(rng), r * std::sin(phi) + noise * gauss(rng), label});
    }
  }
  double extent = 0.0;
  for (const auto& p : data.points) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  for (auto& p : data.points) {
    p.x /= extent;
    p.y /= extent;
  }
  return data;
}

std::array<ModeSpec, 4> EncodingSpec::inputs(double x, double y) const {
  const ModeSpec mode2 = classical ? ModeSpec{CoherentSpec{classical_mode2}} : ModeSpec{kitten};
  return {CoherentSpec{std::polar(mode1_magnitude, kPi * x / 2)}, mode2,
          CoherentSpec{std::polar(mode3_magnitude, mode3_phase + kPi * y / 2)}, CoherentSpec{mode4}};
}

std::array<double, kFeatureCount> FeatureRecord::vector() const {
  std::array<double, kFeatureCount> v{};
  std::copy(occupations.begin(), occupations.end(), v.begin());
  std::copy(cross_g2.begin(), cross_g2.end(), v.begin() + kOccupationFeatures);
  return v;
}

FeatureRecord features_at(double x, double y, int label, const EncodingSpec& encoding, const TransferMatrix& transfer) {
  const auto in = encoding.inputs(x, y);
  const auto out = apply(transfer, make_product_state(in));
  const auto corr = correlations(out);
  FeatureRecord rec{x, y, label, {}, {}};
  std::copy(corr.occupations.begin(), corr.occupations.end(), rec.occupations.begin());
  for (std::size_t p = 0; p < kCorrelationFeatures; ++p) {
    if (!corr.cross_g2[p]) throw InvariantViolation("cross g2 undefined: output mode occupation below floor");
    rec.cross_g2[p] = *corr.cross_g2[p];
  }
  return rec;
}

std::vector<FeatureRecord> extract_features(const SpiralDataset& dataset, const EncodingSpec& encoding,
                                            const CouplingSchedule& schedule, double dz) {
  require(schedule.modes() == 4, "the reservoir encoding needs a four-mode schedule");
  return extract_features(dataset, encoding, transfer_matrix(schedule, dz));
}

std::vector<FeatureRecord> extract_features(const SpiralDataset& dataset, const EncodingSpec& encoding,
                                            const TransferMatrix& transfer) {
  require(transfer.U.rows() == 4, "the reservoir encoding needs a four-mode transfer matrix");
  std::vector<FeatureRecord> out(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t k) {
    const auto& p = dataset.points[k];
    try {
      out[k] = features_at(p.x, p.y, p.label, encoding, transfer);
    } catch (const InvariantViolation& e) {
      throw InvariantViolation("feature extraction failed at point " + std::to_string(k) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("feature extraction failed at point " + std::to_string(k) + ": " + e.what());
    }
  });
  return out;
}

std::vector<std::size_t> mask_indices(FeatureMask mask) {
  std::vector<std::size_t> idx;
  const std::size_t begin = mask == FeatureMask::correlations ? kOccupationFeatures : 0;
  const std::size_t end = mask == FeatureMask::occupations ? kOccupationFeatures : kFeatureCount;
  for (std::size_t i = begin; i < end; ++i) idx.push_back(i);
  return idx;
}

std::string to_string(FeatureMask mask) {
  switch (mask) {
    case FeatureMask::occupations:
      return "occupations";
    case FeatureMask::correlations:
      return "correlations";
    case FeatureMask::all:
      return "all";
  }
  return "unknown";
}

namespace {

std::vector<double> masked(const FeatureRecord& r, const std::vector<std::size_t>& idx) {
  const auto v = r.vector();
  std::vector<double> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

double log1p_exp(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "cannot standardize an empty training set");
  const std::size_t d = rows.front().size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  s.degenerate.assign(d, false);
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j] / n;
  }
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) s.stddev[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]) / n;
  }
  for (std::size_t j = 0; j < d; ++j) {
    s.stddev[j] = std::sqrt(s.stddev[j]);
    s.degenerate[j] = s.stddev[j] <= 1e-9 * std::max(1.0, std::abs(s.mean[j]));
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = degenerate[j] ? 0.0 : (row[j] - mean[j]) / stddev[j];
  return out;
}

double ReadoutModel::probability(const FeatureRecord& record) const {
  const auto z = standardizer.apply(masked(record, mask_indices(mask)));
  double s = bias;
  for (std::size_t j = 0; j < z.size(); ++j) s += weights[j] * z[j];
  return sigmoid(s);
}

ReadoutModel fit_readout(std::span<const FeatureRecord> train, FeatureMask mask) {
  require(!train.empty(), "training set is empty");
  const auto idx = mask_indices(mask);
  std::vector<std::vector<double>> raw;
  raw.reserve(train.size());
  for (const auto& r : train) raw.push_back(masked(r, idx));

  ReadoutModel model;
  model.mask = mask;
  model.standardizer = Standardizer::fit(raw);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (model.standardizer.degenerate[j]) {
      model.diagnostics.warnings.push_back("feature " + std::to_string(idx[j]) +
                                           " has zero variance in the training set; standardized to 0");
    }
  }

  const std::size_t n = train.size();
  const std::size_t d = idx.size() + 1;  // last column is the intercept
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = model.standardizer.apply(raw[i]);
    for (std::size_t j = 0; j + 1 < d; ++j) x(i, j) = z[j];
    x(i, d - 1) = 1.0;
    y(i) = train[i].label;
  }

  auto loss = [&](const Eigen::VectorXd& theta) {
    const Eigen::VectorXd s = x * theta;
    double l = 0.0;
    for (std::size_t i = 0; i < n; ++i) l += log1p_exp(s(i)) - y(i) * s(i);
    return l / static_cast<double>(n);
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  double current = loss(theta);
  auto& diag = model.diagnostics;
  diag.loss_history.push_back(current);
  constexpr std::size_t kMaxIterations = 10000;
  constexpr double kGradientTol = 1e-8;
  for (diag.iterations = 0; diag.iterations < kMaxIterations; ++diag.iterations) {
    const Eigen::VectorXd s = x * theta;
    Eigen::VectorXd p(n), curvature(n);
    for (std::size_t i = 0; i < n; ++i) {
      p(i) = sigmoid(s(i));
      curvature(i) = p(i) * (1.0 - p(i));
    }
    const Eigen::VectorXd grad = x.transpose() * (p - y) / static_cast<double>(n);
    diag.gradient_norm = grad.norm();
    if (diag.gradient_norm <= kGradientTol) break;

    Eigen::MatrixXd hess = x.transpose() * curvature.asDiagonal() * x / static_cast<double>(n);
    hess.diagonal().array() += 1e-12 * std::max(1.0, hess.diagonal().maxCoeff());
    Eigen::VectorXd step = hess.ldlt().solve(-grad);
    if (!step.allFinite() || grad.dot(step) >= 0.0) step = -grad;

    // Backtracking (Armijo) keeps the loss sequence non-increasing.
    double t = 1.0;
    double trial = loss(theta + step);
    const double slope = grad.dot(step);
    int halvings = 0;
    while (!(trial <= current + 1e-4 * t * slope) && halvings < 60) {
      t *= 0.5;
      trial = loss(theta + t * step);
      ++halvings;
    }
    if (!(trial <= current)) break;  // no further descent representable
    theta += t * step;
    const bool stalled = current - trial <= 0.0;
    current = trial;
    diag.loss_history.push_back(current);
    if (stalled && t * step.norm() <= 1e-15 * std::max(1.0, theta.norm())) break;
  }

  model.weights.assign(theta.data(), theta.data() + d - 1);
  model.bias = theta(d - 1);
  return model;
}

double accuracy(const ReadoutModel& model, std::span<const FeatureRecord> records) {
  require(!records.empty(), "cannot score an empty set");
  std::size_t correct = 0;
  for (const auto& r : records) correct += model.predict(r) == r.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

Split draw_split(std::span<const FeatureRecord> records, const ResampleSpec& spec, std::size_t r) {
  require(spec.train_per_class >= 1 && spec.test_per_class >= 1, "train and test splits must be non-empty");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const int label = records[k].label;
    require(label == 0 || label == 1, "labels must be 0 or 1");
    by_class[label].push_back(k);
  }
  const std::size_t need = spec.train_per_class + spec.test_per_class;
  require(by_class[0].size() >= need && by_class[1].size() >= need,
          "insufficient points per class for the requested class-balanced draws");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(r)};
  std::mt19937_64 rng(seq);
  Split split;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    split.train.insert(split.train.end(), members.begin(), members.begin() + spec.train_per_class);
    split.test.insert(split.test.end(), members.begin() + spec.train_per_class, members.begin() + need);
  }
  return split;
}

EvaluationReport evaluate(std::span<const Variant> variants, const ResampleSpec& spec) {
  require(!variants.empty(), "no variants to evaluate");
  require(spec.n_resamples >= 1, "at least one resample is required");
  const auto& reference = *variants.front().features;
  for (const auto& v : variants) {
    require(v.features != nullptr && v.features->size() == reference.size(),
            "all variants must carry features for the same dataset");
  }
  draw_split(reference, spec, 0);  // validates class balance up front

  EvaluationReport report;
  for (const auto& v : variants) report.variants.push_back({v.name, v.mask, std::vector<double>(spec.n_resamples)});

  parallel_for(spec.n_resamples, [&](std::size_t r) {
    const Split split = draw_split(reference, spec, r);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const auto& feats = *variants[v].features;
      std::vector<FeatureRecord> train, test;
      for (auto k : split.train) train.push_back(feats[k]);
      for (auto k : split.test) test.push_back(feats[k]);
      const auto model = fit_readout(train, variants[v].mask);
      report.variants[v].accuracies[r] = accuracy(model, test);
    }
  });

  for (auto& v : report.variants) {
    const double n = static_cast<double>(v.accuracies.size());
    v.mean = std::accumulate(v.accuracies.begin(), v.accuracies.end(), 0.0) / n;
    double ss = 0.0;
    for (double a : v.accuracies) ss += (a - v.mean) * (a - v.mean);
    v.stddev = v.accuracies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return report;
}

EvaluationReport evaluate(const SpiralDataset& dataset, const EncodingSpec& quantum, const EncodingSpec& classical,
                          const CouplingSchedule& schedule, double dz, const ResampleSpec& spec) {
  require(dataset.size() >= 2 * (spec.train_per_class + spec.test_per_class),
          "dataset too small for the requested resample size");
  const auto transfer = transfer_matrix(schedule, dz);
  const auto classical_features = extract_features(dataset, classical, transfer);
  const auto quantum_features = extract_features(dataset, quantum, transfer);
  const Variant variants[] = {
      {"classical_occupations", &classical_features, FeatureMask::occupations},
      {"quantum_occupations", &quantum_features, FeatureMask::occupations},
      {"quantum_correlations", &quantum_features, FeatureMask::correlations},
  };
  return evaluate(variants, spec);
}

std::vector<BoundaryPoint> decision_boundary(const ReadoutModel& model, const EncodingSpec& encoding,
                                             const TransferMatrix& transfer, std::size_t resolution) {
  require(resolution >= 2, "boundary grid resolution must be at least 2");
  std::vector<BoundaryPoint> out(resolution * resolution);
  parallel_for(resolution, [&](std::size_t row) {
    const double y = -1.0 + 2.0 * row / (resolution - 1.0);
    for (std::size_t col = 0; col < resolution; ++col) {
      const double x = -1.0 + 2.0 * col / (resolution - 1.0);
      out[row * resolution + col] = {x, y, model.probability(features_at(x, y, 0, encoding, transfer))};
    }
  });
  return out;
}

}  // namespace wgsim::qrc
