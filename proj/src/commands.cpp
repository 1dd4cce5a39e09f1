#include "wgsim/commands.hpp"

#include <algorithm>
#include <cmath>

#include "wgsim/evolution.hpp"
#include "wgsim/fock_oracle.hpp"
#include "wgsim/output.hpp"
#include "wgsim/qrc.hpp"

namespace wgsim::app {

namespace {

class Writer {
 public:
  Writer(const std::filesystem::path& dir, const std::string& hash, RunSummary& summary)
      : dir_(dir), hash_(hash), summary_(summary) {}

  const std::string& hash() const { return hash_; }

  void put(const std::string& name, const std::string& contents) {
    write_file(dir_ / name, contents);
    summary_.files.push_back(dir_ / name);
  }

  void wigner(const std::string& stem, const WignerGrid& grid, bool pgm) {
    put(stem + ".csv", wigner_csv(hash_, grid));
    if (pgm) put(stem + ".pgm", wigner_pgm(hash_, grid));
  }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  RunSummary& summary_;
};

std::string mode_label(std::size_t i) { return "mode" + std::to_string(i + 1); }

// Shared body of twomode and fourmode.
RunSummary run_trajectory(const RunConfig& cfg, const std::filesystem::path& out, bool input_wigner) {
  require(cfg.schedule.has_value(), "a coupling schedule is required");
  const auto& schedule = *cfg.schedule;
  RunSummary summary;
  Writer w(out, cfg.hash, summary);

  const auto input = make_product_state(cfg.modes);
  const double dz = cfg.dz();
  const auto snaps = propagate(input, schedule, dz, cfg.integration.record_every);
  std::vector<double> z;
  std::vector<CorrelationSet> rows;
  for (const auto& s : snaps) {
    z.push_back(s.z);
    rows.push_back(correlations(s.state));
  }
  w.put("trajectory.csv", trajectory_csv(cfg.hash, z, rows));

  const double drift = occupation_drift(rows);
  summary.metrics["occupation_drift"] = drift;
  if (!(drift <= kConservationTol)) {
    throw InvariantViolation("total photon number drifted by " + format_number(drift) + " (relative)");
  }
  // transfer_matrix enforces the unitarity bound itself.
  summary.metrics["unitarity_defect"] = transfer_matrix(schedule, dz).unitarity_defect();

  const auto& output = snaps.back().state;
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    if (input_wigner) w.wigner("wigner_in_" + mode_label(i), wigner(input, i, cfg.observables.wigner), cfg.observables.pgm);
    const auto grid = wigner(output, i, cfg.observables.wigner);
    w.wigner("wigner_out_" + mode_label(i), grid, cfg.observables.pgm);
    summary.metrics["wigner_out_min." + mode_label(i)] = grid.min();
    const auto dist = photon_distribution(output, i, cfg.observables.n_max);
    w.put("pn_out_" + mode_label(i) + ".csv", distribution_csv(cfg.hash, dist));
    summary.metrics["n_out." + mode_label(i)] = rows.back().occupations[i];
  }
  for (std::size_t p = 0; p < rows.back().pairs.size(); ++p) {
    const auto [i, j] = rows.back().pairs[p];
    const auto& g = rows.back().cross_g2[p];
    summary.metrics["g2_out." + std::to_string(i + 1) + std::to_string(j + 1)] = g ? *g : std::nan("");
  }

  if (cfg.run_oracle) {
    const std::size_t cutoff = *std::max_element(cfg.oracle.cutoffs.begin(), cfg.oracle.cutoffs.end());
    const auto traj = fock::integrate_von_neumann(fock::encode_state(cfg.modes, cutoff, cfg.oracle.max_dimension),
                                                  schedule, dz, cfg.integration.record_every,
                                                  cfg.oracle.max_dimension);
    std::vector<double> oz;
    std::vector<CorrelationSet> orows;
    double worst = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      oz.push_back(traj[t].z);
      orows.push_back(fock::oracle_observables(traj[t].rho));
      for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
        worst = std::max(worst, std::abs(orows.back().occupations[i] - rows[t].occupations[i]));
      }
    }
    w.put("oracle_cutoff_" + std::to_string(cutoff) + ".csv", trajectory_csv(cfg.hash, oz, orows));
    summary.metrics["oracle_max_occupation_error"] = worst;
  }
  return summary;
}

}  // namespace

double occupation_drift(const std::vector<CorrelationSet>& rows) {
  if (rows.empty()) return 0.0;
  auto total = [](const CorrelationSet& c) {
    double s = 0.0;
    for (double n : c.occupations) s += n;
    return s;
  };
  const double ref = total(rows.front());
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(total(r) - ref));
  return worst / std::max(std::abs(ref), kOccupationFloor);
}

RunSummary run_states(const RunConfig& cfg, const std::filesystem::path& out) {
  RunSummary summary;
  Writer w(out, cfg.hash, summary);
  for (const auto& named : cfg.states) {
    const auto state = make_state(named.spec);
    const auto dist = photon_distribution(state, 0, cfg.observables.n_max);
    w.put(named.name + "_pn.csv", distribution_csv(cfg.hash, dist));
    const auto grid = wigner(state, 0, cfg.observables.wigner);
    w.wigner(named.name + "_wigner", grid, cfg.observables.pgm);

    summary.metrics[named.name + ".mean"] = mean_occupation(state, 0);
    summary.metrics[named.name + ".pn_total"] = dist.total();
    summary.metrics[named.name + ".wigner_integral"] = grid.integral();
    summary.metrics[named.name + ".wigner_min"] = grid.min();
    if (1.0 - dist.total() > 1e-6) {
      summary.warnings.push_back(named.name + ": P(n) up to n_max=" + std::to_string(cfg.observables.n_max) +
                                 " captures only " + format_number(dist.total()));
    }
  }
  return summary;
}

RunSummary run_twomode(const RunConfig& cfg, const std::filesystem::path& out) {
  return run_trajectory(cfg, out, true);
}

RunSummary run_fourmode(const RunConfig& cfg, const std::filesystem::path& out) {
  return run_trajectory(cfg, out, false);
}

RunSummary run_cutoff_study(const RunConfig& cfg, const std::filesystem::path& out) {
  require(cfg.schedule.has_value(), "a coupling schedule is required");
  RunSummary summary;
  Writer w(out, cfg.hash, summary);
  const auto result = fock::cutoff_study(*cfg.schedule, cfg.modes, cfg.oracle.cutoffs, cfg.dz(),
                                         cfg.integration.record_every, cfg.oracle.max_dimension);
  w.put("cutoff_mse.csv", cutoff_csv(cfg.hash, result.rows));
  w.put("trajectory.csv", trajectory_csv(cfg.hash, result.z, result.phase_space));
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    const auto c = std::to_string(result.rows[k].cutoff);
    w.put("oracle_cutoff_" + c + ".csv", trajectory_csv(cfg.hash, result.z, result.oracle[k]));
    summary.metrics["mse_g2." + c] = result.rows[k].mse_g2;
    summary.metrics["max_occupation_error." + c] = result.rows[k].max_occupation_error;
  }
  return summary;
}

RunSummary run_classify(const RunConfig& cfg, const std::filesystem::path& out) {
  require(cfg.schedule.has_value() && cfg.schedule->modes() == 4, "classification needs a four-mode schedule");
  const auto& params = cfg.classification;
  RunSummary summary;
  Writer w(out, cfg.hash, summary);

  const auto dataset = qrc::generate_spirals(params.n_points, params.noise, cfg.seed, params.t_min, params.t_max);
  const auto transfer = transfer_matrix(*cfg.schedule, cfg.dz());
  qrc::EncodingSpec quantum = params.encoding;
  quantum.classical = false;
  qrc::EncodingSpec classical = params.encoding;
  classical.classical = true;
  const auto quantum_features = qrc::extract_features(dataset, quantum, transfer);
  const auto classical_features = qrc::extract_features(dataset, classical, transfer);
  w.put("features_quantum.csv", features_csv(cfg.hash, quantum_features));
  w.put("features_classical.csv", features_csv(cfg.hash, classical_features));

  const qrc::Variant variants[] = {
      {"classical_occupations", &classical_features, qrc::FeatureMask::occupations},
      {"quantum_occupations", &quantum_features, qrc::FeatureMask::occupations},
      {"quantum_correlations", &quantum_features, qrc::FeatureMask::correlations},
  };
  qrc::ResampleSpec spec = params.resampling;
  spec.seed = cfg.seed;
  const auto report = qrc::evaluate(variants, spec);

  // Boundaries use the readout trained on resample 0.
  const auto split = qrc::draw_split(quantum_features, spec, 0);
  for (const auto& v : variants) {
    std::vector<qrc::FeatureRecord> train;
    for (auto k : split.train) train.push_back((*v.features)[k]);
    const auto model = qrc::fit_readout(train, v.mask);
    for (const auto& msg : model.diagnostics.warnings) summary.warnings.push_back(v.name + ": " + msg);
    const auto& enc = v.features == &classical_features ? classical : quantum;
    w.put("boundary_" + v.name + ".csv",
          boundary_csv(cfg.hash, qrc::decision_boundary(model, enc, transfer, params.boundary_resolution)));
  }
  for (const auto& v : report.variants) {
    summary.metrics["accuracy_mean." + v.name] = v.mean;
    summary.metrics["accuracy_std." + v.name] = v.stddev;
  }
  w.put("report.json", report_json(cfg.hash, cfg.seed, spec, report, summary.warnings));
  return summary;
}

RunSummary run(const RunConfig& cfg, const std::filesystem::path& out) {
  switch (cfg.command) {
    case Command::states:
      return run_states(cfg, out);
    case Command::twomode:
      return run_twomode(cfg, out);
    case Command::cutoff_study:
      return run_cutoff_study(cfg, out);
    case Command::fourmode:
      return run_fourmode(cfg, out);
    case Command::classify:
      return run_classify(cfg, out);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace wgsim::app
