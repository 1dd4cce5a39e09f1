#pragma once

// Text serializers for every file the CLI writes. Each returns the full file
// contents so callers (and tests) can inspect them before touching disk.
// Every CSV starts with "# wgsim <version> config_hash=<hex>".

#include <filesystem>
#include <string>
#include <vector>

#include "wgsim/fock_oracle.hpp"
#include "wgsim/observables.hpp"
#include "wgsim/qrc.hpp"

namespace wgsim::app {

inline constexpr const char* kToolVersion = "0.1.0";

std::string header_line(const std::string& hash);

/// %.17g; NaN prints as "nan".
std::string format_number(double v);

std::string trajectory_csv(const std::string& hash, const std::vector<double>& z,
                           const std::vector<CorrelationSet>& rows);
std::string distribution_csv(const std::string& hash, const PhotonDistribution& dist);

/// Four header lines (tool/hash, re extent, im extent, resolution), then one
/// CSV row per imaginary-axis sample with real-axis samples across.
std::string wigner_csv(const std::string& hash, const WignerGrid& grid);

/// Plain (ASCII) 8-bit PGM; grey 128 is W = 0, scale symmetric in max |W|.
std::string wigner_pgm(const std::string& hash, const WignerGrid& grid);

std::string cutoff_csv(const std::string& hash, const std::vector<fock::CutoffRow>& rows);
std::string features_csv(const std::string& hash, const std::vector<qrc::FeatureRecord>& records);
std::string boundary_csv(const std::string& hash, const std::vector<qrc::BoundaryPoint>& points);
std::string report_json(const std::string& hash, std::uint64_t seed, const qrc::ResampleSpec& spec,
                        const qrc::EvaluationReport& report, const std::vector<std::string>& warnings);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace wgsim::app
