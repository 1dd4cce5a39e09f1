#pragma once

// Brute-force reference: the same waveguide dynamics integrated as a density
// matrix in a truncated multimode Fock basis. Exists to cross-check the
// phase-space route; the dimension grows as cutoff^modes.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "wgsim/evolution.hpp"
#include "wgsim/observables.hpp"
#include "wgsim/phasespace.hpp"

namespace wgsim::fock {

inline constexpr std::size_t kDefaultMaxDimension = 65536;

/// Levels 0..cutoff-1 per mode; basis index = sum_i n_i cutoff^(modes-1-i).
struct FockDensityMatrix {
  std::size_t modes = 0;
  std::size_t cutoff = 0;
  Eigen::MatrixXcd rho;
  /// Norm lost to truncation before renormalization (encode only).
  double leakage = 0.0;

  std::size_t dimension() const { return static_cast<std::size_t>(rho.rows()); }
  Complex trace() const { return rho.trace(); }
  double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
};

/// cutoff^modes, throwing ResourceError above max_dimension (never allocates).
std::size_t checked_dimension(std::size_t modes, std::size_t cutoff, std::size_t max_dimension);

/// Truncated, renormalized ket coefficients <n|psi> for n < cutoff and the leakage.
std::pair<Eigen::VectorXcd, double> truncated_ket(const ModeSpec& spec, std::size_t cutoff);

FockDensityMatrix encode_state(std::span<const ModeSpec> modes, std::size_t cutoff,
                               std::size_t max_dimension = kDefaultMaxDimension);

struct FockSnapshot {
  double z;
  FockDensityMatrix rho;
};

/// Classical RK4 on the commutator equation with the step layout of
/// IntegrationGrid. The Fock-space generator is the second-quantized lift of
/// the same single-particle matrix the phase-space route integrates, so both
/// routes describe identical dynamics.
std::vector<FockSnapshot> integrate_von_neumann(const FockDensityMatrix& rho, const CouplingSchedule& schedule,
                                                double dz, double record_every,
                                                std::size_t max_dimension = kDefaultMaxDimension);

/// Occupations Tr[rho n_i] and g2 from Tr[rho n_i n_j] (i != j).
CorrelationSet oracle_observables(const FockDensityMatrix& rho);

struct CutoffRow {
  std::size_t cutoff = 0;
  std::size_t dimension = 0;
  double mse_g2 = 0.0;
  double max_occupation_error = 0.0;
};

struct CutoffStudyResult {
  std::vector<double> z;
  std::vector<CorrelationSet> phase_space;             ///< reference, one per z
  std::vector<CutoffRow> rows;                         ///< one per cutoff
  std::vector<std::vector<CorrelationSet>> oracle;     ///< [cutoff][z]
};

/// Integrates the oracle at every cutoff and compares g2 (all pairs) against
/// the phase-space trajectory on the shared record grid.
CutoffStudyResult cutoff_study(const CouplingSchedule& schedule, std::span<const ModeSpec> modes,
                               std::span<const std::size_t> cutoffs, double dz, double record_every,
                               std::size_t max_dimension = kDefaultMaxDimension);

}  // namespace wgsim::fock
