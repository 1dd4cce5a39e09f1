#include "wgsim/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <string>

#include "wgsim/parallel.hpp"

namespace wgsim::fock {

namespace {

using SparseC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

std::vector<std::size_t> occupations_of(std::size_t index, std::size_t modes, std::size_t cutoff) {
  std::vector<std::size_t> n(modes);
  for (std::size_t i = modes; i-- > 0;) {
    n[i] = index % cutoff;
    index /= cutoff;
  }
  return n;
}

// Number of photons in `mode` for every basis index.
Eigen::VectorXd number_diagonal(std::size_t modes, std::size_t cutoff, std::size_t mode) {
  const std::size_t dim = static_cast<std::size_t>(std::pow(cutoff, modes) + 0.5);
  Eigen::VectorXd d(dim);
  for (std::size_t k = 0; k < dim; ++k) d(k) = static_cast<double>(occupations_of(k, modes, cutoff)[mode]);
  return d;
}

// a_p^+ a_{p+1} + a_p a_{p+1}^+ on the truncated basis.
SparseC hopping(std::size_t modes, std::size_t cutoff, std::size_t p) {
  std::size_t stride_p = 1, stride_q = 1;
  for (std::size_t i = modes - 1; i > p + 1; --i) stride_q *= cutoff;
  stride_p = stride_q * cutoff;
  const std::size_t dim = static_cast<std::size_t>(std::pow(cutoff, modes) + 0.5);
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t k = 0; k < dim; ++k) {
    const std::size_t np = (k / stride_p) % cutoff;
    const std::size_t nq = (k / stride_q) % cutoff;
    // a_p^+ a_q |.., np, nq, ..> = sqrt((np+1) nq) |.., np+1, nq-1, ..>
    if (nq > 0 && np + 1 < cutoff) {
      const std::size_t target = k + stride_p - stride_q;
      const double amp = std::sqrt(static_cast<double>((np + 1) * nq));
      entries.emplace_back(target, k, amp);
      entries.emplace_back(k, target, amp);
    }
  }
  SparseC h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

}  // namespace

double FockDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

std::size_t checked_dimension(std::size_t modes, std::size_t cutoff, std::size_t max_dimension) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < modes; ++i) {
    if (dim > max_dimension / cutoff) {
      throw ResourceError("Fock dimension " + std::to_string(cutoff) + "^" + std::to_string(modes) +
                          " exceeds the limit " + std::to_string(max_dimension));
    }
    dim *= cutoff;
  }
  if (dim > max_dimension) {
    throw ResourceError("Fock dimension " + std::to_string(dim) + " exceeds the limit " +
                        std::to_string(max_dimension));
  }
  return dim;
}

std::pair<Eigen::VectorXcd, double> truncated_ket(const ModeSpec& spec, std::size_t cutoff) {
  require(cutoff >= 2, "Fock cutoff must be at least 2");
  const Superposition s = to_superposition(spec);
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(cutoff);
  for (std::size_t j = 0; j < s.amplitudes.size(); ++j) {
    const Complex beta = s.amplitudes[j];
    Complex c = s.coeffs[j] * std::exp(-0.5 * std::norm(beta));
    for (std::size_t n = 0; n < cutoff; ++n) {
      if (n > 0) c *= beta / std::sqrt(static_cast<double>(n));
      ket(n) += c;
    }
  }
  double full = 0.0;
  for (std::size_t j = 0; j < s.amplitudes.size(); ++j) {
    for (std::size_t k = 0; k < s.amplitudes.size(); ++k) {
      const Complex bj = s.amplitudes[j], bk = s.amplitudes[k];
      const Complex overlap = std::exp(-0.5 * std::norm(bj) - 0.5 * std::norm(bk) + std::conj(bj) * bk);
      full += (std::conj(s.coeffs[j]) * s.coeffs[k] * overlap).real();
    }
  }
  require(full > 0.0, "superposition has vanishing norm");
  const double kept = ket.squaredNorm();
  require(kept > 0.0, "state has no weight below the Fock cutoff");
  ket /= std::sqrt(kept);
  return {ket, std::max(0.0, 1.0 - kept / full)};
}

FockDensityMatrix encode_state(std::span<const ModeSpec> modes, std::size_t cutoff, std::size_t max_dimension) {
  require(!modes.empty(), "at least one mode is required");
  require(cutoff >= 2, "Fock cutoff must be at least 2");
  checked_dimension(modes.size(), cutoff, max_dimension);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  double kept = 1.0;
  for (const auto& m : modes) {
    auto [ket, leak] = truncated_ket(m, cutoff);
    kept *= 1.0 - leak;
    Eigen::VectorXcd next(psi.size() * ket.size());
    for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * ket.size(), ket.size()) = psi(a) * ket;
    psi = std::move(next);
  }
  FockDensityMatrix out;
  out.modes = modes.size();
  out.cutoff = cutoff;
  out.rho = psi * psi.adjoint();
  out.leakage = 1.0 - kept;
  return out;
}

std::vector<FockSnapshot> integrate_von_neumann(const FockDensityMatrix& rho, const CouplingSchedule& schedule,
                                                double dz, double record_every, std::size_t max_dimension) {
  require(rho.modes == schedule.modes(), "density matrix and schedule mode counts differ");
  const std::size_t dim = checked_dimension(rho.modes, rho.cutoff, max_dimension);
  require(dim == rho.dimension(), "density matrix dimension does not match cutoff^modes");
  const auto grid = IntegrationGrid::make(schedule.length(), dz, record_every);

  std::vector<SparseC> hops;
  for (std::size_t p = 0; p + 1 < rho.modes; ++p) hops.push_back(hopping(rho.modes, rho.cutoff, p));
  Eigen::VectorXd onsite = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < rho.modes; ++i) {
    if (schedule.omegas()[i] != 0.0) {
      onsite += schedule.constants().hbar * schedule.omegas()[i] * number_diagonal(rho.modes, rho.cutoff, i);
    }
  }
  const double inv_hv = 1.0 / schedule.constants().hbar_vg();

  // d rho/dz = (i / (hbar v_g)) [H, rho] where H lifts the single-particle
  // matrix of coupling_at; coherent amplitudes then follow
  // d alpha/dz = (i / (hbar v_g)) M alpha exactly as in the phase-space route.
  auto derivative = [&](double z, const Eigen::MatrixXcd& r) -> Eigen::MatrixXcd {
    std::vector<double> pair_j(hops.size(), 0.0);
    for (const auto& w : schedule.windows()) pair_j[w.first] += w.profile(z);
    Eigen::MatrixXcd x = onsite.cast<Complex>().asDiagonal() * r;
    for (std::size_t p = 0; p < hops.size(); ++p) {
      if (pair_j[p] != 0.0) x.noalias() += pair_j[p] * (hops[p] * r);
    }
    // H r - r H = X - X^dagger for Hermitian r.
    return Complex(0.0, inv_hv) * (x - x.adjoint());
  };

  std::vector<FockSnapshot> out;
  out.push_back({0.0, rho});
  Eigen::MatrixXcd r = rho.rho;
  for (std::size_t s = 0; s < grid.steps; ++s) {
    const double z = static_cast<double>(s) * grid.h;
    const double h = grid.h;
    const Eigen::MatrixXcd k1 = derivative(z, r);
    const Eigen::MatrixXcd k2 = derivative(z + 0.5 * h, r + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = derivative(z + 0.5 * h, r + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = derivative(std::min(z + h, schedule.length()), r + h * k3);
    r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (grid.records(s + 1)) {
      FockDensityMatrix snap{rho.modes, rho.cutoff, r, rho.leakage};
      out.push_back({s + 1 == grid.steps ? schedule.length() : static_cast<double>(s + 1) * h, std::move(snap)});
    }
  }
  return out;
}

CorrelationSet oracle_observables(const FockDensityMatrix& rho) {
  const std::size_t n = rho.modes;
  std::vector<Eigen::VectorXd> counts;
  for (std::size_t i = 0; i < n; ++i) counts.push_back(number_diagonal(n, rho.cutoff, i));
  const Eigen::VectorXd pop = rho.rho.diagonal().real();

  CorrelationSet out;
  for (std::size_t i = 0; i < n; ++i) out.occupations.push_back(pop.dot(counts[i]));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.pairs.emplace_back(i, j);
      const double ni = out.occupations[i], nj = out.occupations[j];
      if (ni <= kOccupationFloor || nj <= kOccupationFloor) {
        out.cross_g2.emplace_back(std::nullopt);
      } else {
        out.cross_g2.emplace_back(pop.dot(counts[i].cwiseProduct(counts[j])) / (ni * nj));
      }
    }
  }
  return out;
}

CutoffStudyResult cutoff_study(const CouplingSchedule& schedule, std::span<const ModeSpec> modes,
                               std::span<const std::size_t> cutoffs, double dz, double record_every,
                               std::size_t max_dimension) {
  require(!cutoffs.empty(), "cutoff list is empty");
  for (auto c : cutoffs) require(c >= 2, "every cutoff must be at least 2");
  // Refuse before integrating anything.
  for (auto c : cutoffs) checked_dimension(modes.size(), c, max_dimension);

  CutoffStudyResult result;
  for (const auto& snap : propagate(make_product_state(modes), schedule, dz, record_every)) {
    result.z.push_back(snap.z);
    result.phase_space.push_back(correlations(snap.state));
  }

  result.rows.resize(cutoffs.size());
  result.oracle.resize(cutoffs.size());
  parallel_for(cutoffs.size(), [&](std::size_t k) {
    const std::size_t cutoff = cutoffs[k];
    const auto traj = integrate_von_neumann(encode_state(modes, cutoff, max_dimension), schedule, dz, record_every,
                                            max_dimension);
    auto& row = result.rows[k];
    row.cutoff = cutoff;
    row.dimension = traj.front().rho.dimension();
    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      const auto obs = oracle_observables(traj[t].rho);
      const auto& ref = result.phase_space[t];
      for (std::size_t i = 0; i < obs.occupations.size(); ++i) {
        row.max_occupation_error = std::max(row.max_occupation_error, std::abs(obs.occupations[i] - ref.occupations[i]));
      }
      for (std::size_t p = 0; p < obs.cross_g2.size(); ++p) {
        if (obs.cross_g2[p] && ref.cross_g2[p]) {
          const double d = *obs.cross_g2[p] - *ref.cross_g2[p];
          sq += d * d;
          ++count;
        }
      }
      result.oracle[k].push_back(obs);
    }
    row.mse_g2 = count > 0 ? sq / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
  });
  return result;
}

}  // namespace wgsim::fock
