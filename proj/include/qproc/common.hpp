// SPDX-License-Identifier: MIT
/**
 * @file common.hpp
 * @brief Shared error types, tolerances and aliases for the qproc library.
 *
 * qproc represents finite-dimensional quantum processes (sources,
 * measurements, states, channels, instruments), extracts the linear
 * dependences ("operational identities") among their operators, and
 * classifies each process as Classical, Nonclassical or Inconclusive.
 * Classical verdicts carry machine-checkable frame-representation
 * certificates; Nonclassical verdicts carry named witnesses.
 */
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qproc {

using cdouble = std::complex<double>;

/** Base class for all qproc errors. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Mismatched or unsupported operator/process dimensions. */
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/** Input matrix fails the Hermiticity check (rejected, never symmetrized). */
class HermiticityError : public Error {
 public:
  explicit HermiticityError(const std::string& what) : Error(what) {}
};

/** A process violates one of its structural invariants. */
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/** A frame/dual-frame operation received an unusable family. */
class FrameError : public Error {
 public:
  explicit FrameError(const std::string& what) : Error(what) {}
};

/** Malformed input document. */
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/** Subsystem or total dimension beyond the supported desk-scale limits. */
class LimitError : public Error {
 public:
  explicit LimitError(const std::string& what) : Error(what) {}
};

/// Numerical contract, shared by the whole library.
namespace tol {
/// Absolute entrywise Hermiticity tolerance (inputs are rejected beyond it).
inline constexpr double hermiticity = 1e-9;
/// Absolute orthonormality tolerance for computed bases.
inline constexpr double orthonormality = 1e-9;
/// Rank cut: singular values below rank_rel * sigma_max count as zero.
inline constexpr double rank_rel = 1e-9;
/// Frobenius tolerance for certificate reconstruction checks.
inline constexpr double certificate = 1e-7;
/// Eigenvalue floor when checking positive semidefiniteness.
inline constexpr double psd_floor = 1e-9;
/// Lower bound allowed on certificate weights (slightly below zero).
inline constexpr double weight_floor = -1e-9;
/// Trace-distance threshold under which two states count as equal.
inline constexpr double distinctness = 1e-8;
/// Residual bound for a point accepted as LP-feasible.
inline constexpr double lp_feasibility = 1e-8;
/// Minimal violation for an accepted Farkas (infeasibility) certificate.
inline constexpr double lp_farkas = 1e-8;
/// Residual bound for a point accepted by the PSD feasibility search.
inline constexpr double psd_feasibility = 1e-7;
/// Minimal margin for an accepted PSD separating functional.
inline constexpr double psd_margin = 1e-6;
}  // namespace tol

/// Desk-scale dimension limits (enforced by validate()).
namespace limits {
inline constexpr int max_subsystem_dim = 16;
inline constexpr int max_total_dim = 64;
}  // namespace limits

}  // namespace qproc
