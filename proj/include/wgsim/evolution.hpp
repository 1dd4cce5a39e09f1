#pragma once

// Propagation of weighted components through a z-dependent coupled-waveguide
// array. Both amplitude vectors of every component obey the same linear ODE
//   d alpha_i / dz = (i / (hbar v_g)) [hbar w_i alpha_i + J_{i,i-1} alpha_{i-1} + J_{i,i+1} alpha_{i+1}]
// which is advanced with the exponential midpoint rule.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "wgsim/common.hpp"
#include "wgsim/phasespace.hpp"

namespace wgsim {

struct PhysicalConstants {
  double hbar = 0.6582;  ///< meV ps
  double v_g = 70.0;     ///< um / ps

  double hbar_vg() const { return hbar * v_g; }
};

/// Super-Gaussian coupling J exp(-((z - z0) / (sqrt(2) sigma))^d) between
/// modes `first` and `first + 1` (zero-based).
struct CouplingWindow {
  std::size_t first = 0;
  double J = 0.0;      ///< meV
  double z0 = 0.0;     ///< um
  double sigma = 1.0;  ///< um
  int d = 2;

  double profile(double z) const;
  /// (1 / (hbar v_g)) times the integral of the profile over the real line.
  double pulse_area(const PhysicalConstants& constants) const;
};

class CouplingSchedule {
 public:
  CouplingSchedule(std::size_t modes, std::vector<CouplingWindow> windows, double length,
                   PhysicalConstants constants = {}, std::vector<double> omegas = {});

  std::size_t modes() const { return modes_; }
  double length() const { return length_; }
  const PhysicalConstants& constants() const { return constants_; }
  const std::vector<CouplingWindow>& windows() const { return windows_; }
  const std::vector<double>& omegas() const { return omegas_; }

  /// Upper bound on the spectral norm of the coupling matrix over [0, L] (meV).
  double max_coupling_norm() const;

 private:
  std::size_t modes_;
  std::vector<CouplingWindow> windows_;
  double length_;
  PhysicalConstants constants_;
  std::vector<double> omegas_;
};

/// N x N real symmetric coupling matrix in meV; diagonal hbar w_i.
Eigen::MatrixXd coupling_at(const CouplingSchedule& schedule, double z);

/// Step such that max_z ||J(z)|| dz / (hbar v_g) <= 1e-3 rad.
double default_step(const CouplingSchedule& schedule);

/// Uniform step layout over [0, L] with snapshots every `record_stride` steps.
struct IntegrationGrid {
  double length = 0.0;
  std::size_t steps = 0;
  double h = 0.0;
  std::size_t record_stride = 1;

  static IntegrationGrid make(double length, double dz, double record_every);
  bool records(std::size_t step) const { return step % record_stride == 0 || step == steps; }
  std::vector<double> record_positions() const;
};

/// exp(i h M(z + h/2) / (hbar v_g)) via diagonalization of the symmetric generator.
Eigen::MatrixXcd midpoint_step(const CouplingSchedule& schedule, double z, double h);

struct TransferMatrix {
  Eigen::MatrixXcd U;

  /// ||U^dagger U - I||_max
  double unitarity_defect() const;
};

TransferMatrix transfer_matrix(const CouplingSchedule& schedule, double dz);

/// Applies alpha -> U alpha and alpha~ -> U alpha~ to every component; weights unchanged.
GeneralizedPState apply(const TransferMatrix& transfer, const GeneralizedPState& state);

struct Snapshot {
  double z;
  GeneralizedPState state;
};

std::vector<Snapshot> propagate(const GeneralizedPState& state, const CouplingSchedule& schedule, double dz,
                                double record_every);

}  // namespace wgsim
