#pragma once

// Run configuration: one JSON document per run. Every object is checked for
// unknown keys, and all physical objects (states, schedule) are constructed
// during validation so that errors carry the offending field path.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgsim/evolution.hpp"
#include "wgsim/observables.hpp"
#include "wgsim/phasespace.hpp"
#include "wgsim/qrc.hpp"

namespace wgsim::app {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { states, twomode, cutoff_study, fourmode, classify };

std::string to_string(Command c);

struct NamedState {
  std::string name;
  ModeSpec spec;
};

struct IntegrationParams {
  std::optional<double> dz;  ///< default_step(schedule) when absent
  double record_every = 100.0;
};

struct ObservableParams {
  std::size_t n_max = 20;
  WignerGridSpec wigner;
  bool pgm = false;
};

struct OracleParams {
  std::vector<std::size_t> cutoffs{2, 4, 6, 8};
  std::size_t max_dimension = 65536;
};

struct ClassificationParams {
  std::size_t n_points = 800;
  double noise = 0.03;
  double t_min = kPi / 4;
  double t_max = 2 * kPi;
  qrc::ResampleSpec resampling;
  std::size_t boundary_resolution = 101;
  qrc::EncodingSpec encoding;
};

struct RunConfig {
  Command command = Command::states;
  PhysicalConstants constants;
  std::vector<ModeSpec> modes;
  std::optional<CouplingSchedule> schedule;
  IntegrationParams integration;
  ObservableParams observables;
  std::vector<NamedState> states;
  OracleParams oracle;
  ClassificationParams classification;
  std::uint64_t seed = 0;
  bool reproducible = false;
  bool run_oracle = false;  ///< twomode/fourmode: also integrate the Fock oracle
  std::string hash;  ///< FNV-1a of the canonical JSON dump

  double dz() const { return integration.dz ? *integration.dz : default_step(*schedule); }
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::string config_hash(const nlohmann::json& doc);

}  // namespace wgsim::app
