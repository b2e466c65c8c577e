// SPDX-License-Identifier: MIT
/**
 * @file hermspace.hpp
 * @brief Real linear algebra on Herm(H), the d^2-dimensional real vector
 *        space of Hermitian operators with the Hilbert-Schmidt inner product
 *        <A,B> = Tr[AB].
 *
 * Everything downstream (identity extraction, frame certificates, deciders)
 * reduces to computations in this space: spans, nullspaces, dual bases and
 * canonical (least-norm) dual frames. The concrete orthonormal basis used
 * for real vectorization is internal and never exposed.
 */
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qproc/common.hpp"

namespace qproc {

/**
 * A d x d Hermitian operator. The constructor rejects matrices deviating from
 * Hermiticity by more than tol::hermiticity entrywise, so data errors surface
 * at the boundary; the accepted sub-tolerance residual is symmetrized away.
 */
class HermitianOperator {
 public:
  /** Validating constructor. @throws HermiticityError, DimensionError. */
  explicit HermitianOperator(Eigen::MatrixXcd m);

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& mat() const { return m_; }

  double trace() const { return m_.trace().real(); }
  /** Smallest eigenvalue (exact Hermitian solver). */
  double eig_min() const;
  /** Largest eigenvalue. */
  double eig_max() const;
  bool is_psd(double floor = tol::psd_floor) const { return eig_min() >= -floor; }
  /** Frobenius norm. */
  double norm() const { return m_.norm(); }

 private:
  Eigen::MatrixXcd m_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

/** Hilbert-Schmidt inner product Tr[AB] (real for Hermitian arguments). */
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/** Trace distance (1/2)||A - B||_1; used for distinctness tests. */
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

/**
 * Isometric real vectorization Herm(d) -> R^(d^2):
 * hs_inner(A,B) == vectorize(A).dot(vectorize(B)).
 */
Eigen::VectorXd vectorize(const HermitianOperator& h);

/** Inverse of vectorize. @throws DimensionError if v.size() != dim^2. */
HermitianOperator unvectorize(const Eigen::VectorXd& v, int dim);

/**
 * An operator subspace V of Herm(d), held as an orthonormal basis. Produced
 * by span_of(); consumed by projections and Riesz solves.
 */
struct OperatorSpan {
  int dim = 0;
  /** Orthonormal basis, one column per basis element (dim^2 x rank). */
  Eigen::MatrixXd basis;

  int rank() const { return static_cast<int>(basis.cols()); }
  /** Orthogonal projection of x onto this span. */
  HermitianOperator project(const HermitianOperator& x) const;
  /** P_V(1): the projection of the identity operator onto V. */
  HermitianOperator project_identity() const;
  /** True when x lies in the span within the given Frobenius residual. */
  bool contains(const HermitianOperator& x, double tolerance = tol::certificate) const;
};

/**
 * Span of a family of Hermitian operators. Rank is decided by the singular
 * value cut sigma_i > tol::rank_rel * sigma_max; basis vectors carry a
 * deterministic sign convention (largest-magnitude component positive).
 */
OperatorSpan span_of(const std::vector<HermitianOperator>& ops);

/**
 * The standard orthonormal basis of Herm(dim): diagonal units |a><a| plus
 * the symmetric and antisymmetric off-diagonal pairs. Tomographically
 * complete; used to probe operator spans of maps and steered subsystems.
 */
std::vector<HermitianOperator> hermitian_basis(int dim);

/**
 * Orthonormal basis of { alpha : sum_k alpha_k ops[k] == 0 }, the
 * operational-identity coefficient space of the family. Empty when the
 * family is linearly independent. Same rank cut and sign convention as
 * span_of.
 */
std::vector<Eigen::VectorXd> nullspace_coeffs(const std::vector<HermitianOperator>& ops);

/** Orthogonal projection of x onto span_of(family). */
HermitianOperator project_onto(const HermitianOperator& x, const OperatorSpan& v);

/**
 * Unique dual basis {D_k} of a linearly independent family {B_k}:
 * hs_inner(D_j, B_k) = delta_jk, with D_j in span{B}. Solved through the
 * Gram matrix. @throws FrameError when the family is dependent.
 */
std::vector<HermitianOperator> dual_basis(const std::vector<HermitianOperator>& ops);

/**
 * Canonical (least-norm / pseudoinverse) dual frame of a possibly
 * overcomplete family: x = sum_k hs_inner(x, D_k) ops[k] for every x in the
 * family's span. Repeated operators split their weight evenly.
 */
std::vector<HermitianOperator> canonical_dual_frame(const std::vector<HermitianOperator>& ops);

/** Result of a Riesz solve: the representative plus the attained residual. */
struct RieszSolution {
  HermitianOperator op;
  double residual;
};

/**
 * Least-norm H in the span v with hs_inner(H, family[k]) = values[k] for all
 * k (in the least-squares sense; residual reports the worst pairing error).
 * This is how dual-frame elements are recovered from LP weight assignments.
 */
RieszSolution riesz_in_span(const OperatorSpan& v,
                            const std::vector<HermitianOperator>& family,
                            const Eigen::VectorXd& values);

}  // namespace qproc
