#pragma once

// Reservoir-computing experiment on the four-mode interferometer: spiral
// data are phase-encoded into coherent inputs, the fixed linear optics acts
// as a feature map (4 occupations + 6 cross-g2), and only a logistic
// readout is trained.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wgsim/evolution.hpp"
#include "wgsim/phasespace.hpp"

namespace wgsim::qrc {

struct SpiralPoint {
  double x = 0.0;
  double y = 0.0;
  int label = 0;
};

struct SpiralDataset {
  std::vector<SpiralPoint> points;

  std::size_t size() const { return points.size(); }
};

/// Two interlaced Archimedean spirals: class k at angle t + k pi and radius
/// proportional to t for t in [t_min, t_max], Gaussian noise of scale `noise`,
/// then rescaled so every coordinate lies in [-1, 1].
SpiralDataset generate_spirals(std::size_t n_points, double noise, std::uint64_t seed, double t_min = kPi / 4,
                               double t_max = 2 * kPi);

/// Input templates for a data point (x, y):
///   mode 1 |m1 e^{i pi x/2}>, mode 2 kitten (or coherent in the classical
///   baseline), mode 3 |m3 e^{i(phi3 + pi y/2)}>, mode 4 fixed coherent.
struct EncodingSpec {
  bool classical = false;
  double mode1_magnitude = 1.0;
  CatSpec kitten{1.0, 0.70710678118654752, 0.70710678118654752, 0.0};
  Complex classical_mode2{1.0, 0.0};
  double mode3_magnitude = 1.4;
  double mode3_phase = kPi / 2;
  Complex mode4{0.0, 1.0};

  std::array<ModeSpec, 4> inputs(double x, double y) const;
};

inline constexpr std::size_t kOccupationFeatures = 4;
inline constexpr std::size_t kCorrelationFeatures = 6;
inline constexpr std::size_t kFeatureCount = kOccupationFeatures + kCorrelationFeatures;

struct FeatureRecord {
  double x = 0.0;
  double y = 0.0;
  int label = 0;
  std::array<double, kOccupationFeatures> occupations{};
  std::array<double, kCorrelationFeatures> cross_g2{};  ///< g12 g13 g14 g23 g24 g34

  std::array<double, kFeatureCount> vector() const;
};

/// Features of a single point given the interferometer's transfer matrix.
FeatureRecord features_at(double x, double y, int label, const EncodingSpec& encoding, const TransferMatrix& transfer);

/// Transfer matrix is computed once; points are a parallel map.
std::vector<FeatureRecord> extract_features(const SpiralDataset& dataset, const EncodingSpec& encoding,
                                            const CouplingSchedule& schedule, double dz);
std::vector<FeatureRecord> extract_features(const SpiralDataset& dataset, const EncodingSpec& encoding,
                                            const TransferMatrix& transfer);

enum class FeatureMask { occupations, correlations, all };

std::vector<std::size_t> mask_indices(FeatureMask mask);
std::string to_string(FeatureMask mask);

/// Per-feature train mean and population standard deviation.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> degenerate;  ///< zero variance; standardized value is 0

  static Standardizer fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> apply(std::span<const double> row) const;
};

struct FitDiagnostics {
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> loss_history;
  std::vector<std::string> warnings;
};

struct ReadoutModel {
  FeatureMask mask = FeatureMask::all;
  Standardizer standardizer;
  std::vector<double> weights;
  double bias = 0.0;
  FitDiagnostics diagnostics;

  double probability(const FeatureRecord& record) const;
  int predict(const FeatureRecord& record) const { return probability(record) >= 0.5 ? 1 : 0; }
};

/// Unregularized logistic regression on standardized features; damped Newton
/// with backtracking until gradient norm <= 1e-8 or 10^4 iterations.
ReadoutModel fit_readout(std::span<const FeatureRecord> train, FeatureMask mask);

double accuracy(const ReadoutModel& model, std::span<const FeatureRecord> records);

/// Feature table plus the mask a variant trains on.
struct Variant {
  std::string name;
  const std::vector<FeatureRecord>* features = nullptr;
  FeatureMask mask = FeatureMask::all;
};

struct VariantReport {
  std::string name;
  FeatureMask mask = FeatureMask::all;
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample std over resamples
};

struct ResampleSpec {
  std::size_t n_resamples = 1000;
  std::size_t train_per_class = 150;
  std::size_t test_per_class = 50;
  std::uint64_t seed = 0;
};

struct EvaluationReport {
  std::vector<VariantReport> variants;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Class-balanced subset and train/test split for resample r; deterministic in (seed, r).
Split draw_split(std::span<const FeatureRecord> records, const ResampleSpec& spec, std::size_t r);

/// Every resample draws a class-balanced subset and a class-balanced
/// train/test split; the same splits are used for all variants.
EvaluationReport evaluate(std::span<const Variant> variants, const ResampleSpec& spec);

/// Standard comparison: classical occupations, quantum occupations,
/// quantum correlations.
EvaluationReport evaluate(const SpiralDataset& dataset, const EncodingSpec& quantum, const EncodingSpec& classical,
                          const CouplingSchedule& schedule, double dz, const ResampleSpec& spec);

struct BoundaryPoint {
  double x;
  double y;
  double p;
};

/// p(class 1) over a resolution x resolution grid on [-1, 1]^2 (x fastest).
std::vector<BoundaryPoint> decision_boundary(const ReadoutModel& model, const EncodingSpec& encoding,
                                             const TransferMatrix& transfer, std::size_t resolution);

}  // namespace wgsim::qrc
