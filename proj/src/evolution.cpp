#include "wgsim/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace wgsim {

double CouplingWindow::profile(double z) const {
  const double x = (z - z0) / (std::sqrt(2.0) * sigma);
  return J * std::exp(-std::pow(x, d));
}

double CouplingWindow::pulse_area(const PhysicalConstants& constants) const {
  // integral of exp(-|x|^d) over R is 2 Gamma(1 + 1/d)
  return J * std::sqrt(2.0) * sigma * 2.0 * std::tgamma(1.0 + 1.0 / d) / constants.hbar_vg();
}

CouplingSchedule::CouplingSchedule(std::size_t modes, std::vector<CouplingWindow> windows, double length,
                                   PhysicalConstants constants, std::vector<double> omegas)
    : modes_(modes),
      windows_(std::move(windows)),
      length_(length),
      constants_(constants),
      omegas_(std::move(omegas)) {
  require(modes_ >= 1, "schedule needs at least one mode");
  require(std::isfinite(length_) && length_ > 0.0, "propagation length must be positive");
  require(constants_.hbar > 0.0 && constants_.v_g > 0.0, "hbar and v_g must be strictly positive");
  if (omegas_.empty()) omegas_.assign(modes_, 0.0);
  require(omegas_.size() == modes_, "one on-site frequency per mode is required");
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    const auto& win = windows_[w];
    const std::string where = "coupling window " + std::to_string(w) + ": ";
    require(win.first + 1 < modes_, where + "pair must reference adjacent modes inside the array");
    require(std::isfinite(win.J) && win.J >= 0.0, where + "J must be non-negative");
    require(std::isfinite(win.sigma) && win.sigma > 0.0, where + "sigma must be positive");
    require(std::isfinite(win.z0), where + "z0 must be finite");
    require(win.d > 0 && win.d % 2 == 0, where + "super-Gaussian exponent must be even and positive");
  }
}

double CouplingSchedule::max_coupling_norm() const {
  std::vector<double> pair_peak(modes_, 0.0);
  for (const auto& w : windows_) pair_peak[w.first] += w.J;
  double bound = 0.0;
  for (std::size_t i = 0; i < modes_; ++i) {
    double row = constants_.hbar * std::abs(omegas_[i]);
    if (i > 0) row += pair_peak[i - 1];
    if (i + 1 < modes_) row += pair_peak[i];
    bound = std::max(bound, row);
  }
  return bound;
}

Eigen::MatrixXd coupling_at(const CouplingSchedule& schedule, double z) {
  require(z >= 0.0 && z <= schedule.length(), "z = " + std::to_string(z) + " outside [0, L]");
  const std::size_t n = schedule.modes();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = schedule.constants().hbar * schedule.omegas()[i];
  for (const auto& w : schedule.windows()) {
    const double j = w.profile(z);
    m(w.first, w.first + 1) += j;
    m(w.first + 1, w.first) += j;
  }
  return m;
}

double default_step(const CouplingSchedule& schedule) {
  const double norm = schedule.max_coupling_norm();
  if (norm == 0.0) return schedule.length() / 1000.0;
  return std::min(1e-3 * schedule.constants().hbar_vg() / norm, schedule.length() / 1000.0);
}

IntegrationGrid IntegrationGrid::make(double length, double dz, double record_every) {
  require(std::isfinite(dz) && dz > 0.0, "integration step dz must be positive");
  require(std::isfinite(record_every) && record_every > 0.0, "record_every must be positive");
  IntegrationGrid g;
  g.length = length;
  g.steps = static_cast<std::size_t>(std::ceil(length / dz - 1e-9));
  g.steps = std::max<std::size_t>(g.steps, 1);
  g.h = length / static_cast<double>(g.steps);
  g.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(record_every / g.h)));
  return g;
}

std::vector<double> IntegrationGrid::record_positions() const {
  std::vector<double> z;
  for (std::size_t s = 0; s <= steps; ++s) {
    if (records(s)) z.push_back(s == steps ? length : static_cast<double>(s) * h);
  }
  return z;
}

Eigen::MatrixXcd midpoint_step(const CouplingSchedule& schedule, double z, double h) {
  const double zm = std::min(z + 0.5 * h, schedule.length());
  const Eigen::MatrixXd m = coupling_at(schedule, zm);
  if (m.isZero(0.0)) return Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const double scale = h / schedule.constants().hbar_vg();
  const Eigen::VectorXcd phases =
      eig.eigenvalues().unaryExpr([scale](double lam) { return std::polar(1.0, lam * scale); });
  const Eigen::MatrixXcd v = eig.eigenvectors().cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

double TransferMatrix::unitarity_defect() const {
  const Eigen::MatrixXcd d = U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  return d.cwiseAbs().maxCoeff();
}

TransferMatrix transfer_matrix(const CouplingSchedule& schedule, double dz) {
  const auto grid = IntegrationGrid::make(schedule.length(), dz, schedule.length());
  const std::size_t n = schedule.modes();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t s = 0; s < grid.steps; ++s) {
    u = midpoint_step(schedule, static_cast<double>(s) * grid.h, grid.h) * u;
  }
  TransferMatrix t{std::move(u)};
  const double defect = t.unitarity_defect();
  if (defect > 1e-10) {
    throw InvariantViolation("transfer matrix not unitary (defect " + std::to_string(defect) + ")");
  }
  return t;
}

namespace {

// Columns 2v and 2v+1 hold alpha and alpha~ of component v.
Eigen::MatrixXcd pack(const GeneralizedPState& state) {
  Eigen::MatrixXcd a(state.modes(), 2 * state.size());
  for (std::size_t v = 0; v < state.size(); ++v) {
    for (std::size_t i = 0; i < state.modes(); ++i) {
      a(i, 2 * v) = state[v].alpha[i];
      a(i, 2 * v + 1) = state[v].alpha_tilde[i];
    }
  }
  return a;
}

GeneralizedPState unpack(const GeneralizedPState& like, const Eigen::MatrixXcd& a) {
  std::vector<WeightedComponent> comps(like.components().begin(), like.components().end());
  for (std::size_t v = 0; v < comps.size(); ++v) {
    for (std::size_t i = 0; i < like.modes(); ++i) {
      comps[v].alpha[i] = a(i, 2 * v);
      comps[v].alpha_tilde[i] = a(i, 2 * v + 1);
    }
  }
  return GeneralizedPState(like.modes(), std::move(comps));
}

}  // namespace

GeneralizedPState apply(const TransferMatrix& transfer, const GeneralizedPState& state) {
  require(static_cast<std::size_t>(transfer.U.rows()) == state.modes(), "transfer matrix and state mode counts differ");
  return unpack(state, transfer.U * pack(state));
}

std::vector<Snapshot> propagate(const GeneralizedPState& state, const CouplingSchedule& schedule, double dz,
                                double record_every) {
  require(state.modes() == schedule.modes(), "state and schedule mode counts differ");
  const auto grid = IntegrationGrid::make(schedule.length(), dz, record_every);
  Eigen::MatrixXcd a = pack(state);
  std::vector<Snapshot> out;
  out.push_back({0.0, state});
  for (std::size_t s = 0; s < grid.steps; ++s) {
    const double z = static_cast<double>(s) * grid.h;
    a = midpoint_step(schedule, z, grid.h) * a;
    if (grid.records(s + 1)) {
      const double z_next = s + 1 == grid.steps ? schedule.length() : static_cast<double>(s + 1) * grid.h;
      out.push_back({z_next, unpack(state, a)});
    }
  }
  return out;
}

}  // namespace wgsim
