#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace wgsim {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a computation would exceed a configured resource limit
/// (e.g. the Fock-space dimension guard of the oracle).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical invariant (imaginary residue, unitarity, trace)
/// is violated beyond its tolerance.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace wgsim
