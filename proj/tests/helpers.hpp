// SPDX-License-Identifier: MIT
/** @file helpers.hpp Shared fixtures for the unit test suites. */
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qproc/hermspace.hpp"

namespace qt {

using qproc::HermitianOperator;
using cd = std::complex<double>;

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

/** Qubit state (1 + r . sigma)/2 for a Bloch vector r (|r| <= 1). */
inline HermitianOperator bloch(double rx, double ry, double rz) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() + rx * pauli_x() + ry * pauli_y() +
                       rz * pauli_z();
  return HermitianOperator(0.5 * m);
}

inline HermitianOperator proj0() { return bloch(0, 0, 1); }
inline HermitianOperator proj1() { return bloch(0, 0, -1); }
inline HermitianOperator proj_plus() { return bloch(1, 0, 0); }
inline HermitianOperator proj_minus() { return bloch(-1, 0, 0); }

/** Rank-one projector |v><v| / <v|v>. */
inline HermitianOperator ket_proj(const Eigen::VectorXcd& v) {
  return HermitianOperator((v * v.adjoint()) / v.squaredNorm());
}

/** Reproducible random Hermitian operator with entries of order one. */
inline HermitianOperator random_herm(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cd(gauss(rng), gauss(rng));
  return HermitianOperator(0.5 * (m + m.adjoint()).eval());
}

/** Reproducible random density operator (full rank almost surely). */
inline HermitianOperator random_state(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cd(gauss(rng), gauss(rng));
  Eigen::MatrixXcd m = g * g.adjoint();
  return HermitianOperator(m / m.trace().real());
}

/** Reproducible Haar-like random ket. */
inline Eigen::VectorXcd random_ket(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

inline double max_abs_diff(const HermitianOperator& a, const HermitianOperator& b) {
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

}  // namespace qt
