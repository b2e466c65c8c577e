// SPDX-License-Identifier: MIT
/**
 * @file identities.hpp
 * @brief Operational identity sets of process families and the bipartite
 *        nonsingularity predicate.
 *
 * An operational identity of a labeled operator family {T_i} is a real
 * coefficient vector alpha with sum_i alpha_i T_i = 0. The sets computed
 * here are orthonormal bases of all such vectors, with a deterministic SVD
 * sign convention (largest-magnitude entry positive).
 */
#pragma once

#include <string>
#include <vector>

#include "qproc/processes.hpp"

namespace qproc {

/** Orthonormal basis of the linear dependences of a labeled family. */
struct IdentitySet {
  std::vector<std::string> index_labels;
  std::vector<Eigen::VectorXd> basis;

  int dimension() const { return static_cast<int>(basis.size()); }
  /** True when alpha lies in the spanned identity space within tolerance. */
  bool contains(const Eigen::VectorXd& alpha, double tolerance = 1e-8) const;
};

/** Identities of the subnormalized family {p(a|x) rho_{a|x}}. */
IdentitySet identities_of_multisource(const MultiSource& ms);

/** Identities of the effect family {M_{b|y}}. */
IdentitySet identities_of_multimeasurement(const MultiMeasurement& mm);

/**
 * Identity sets induced by measuring a bipartite state locally, plus the
 * optional product expansion of the state over steered states.
 *
 * steered1/steered2 are the identity sets of the assemblages steered by
 * measuring side 1 resp. side 2 (they subsume the plain measurement
 * identities). The product expansion reports a least-squares coefficient
 * family alpha with rho = sum alpha_{ij} sigma1_i (x) sigma2_j over the
 * steered states of each side; `expansion_exists` is set when the residual
 * is negligible.
 */
struct BipartiteIdentities {
  IdentitySet m1, m2;
  IdentitySet steered1, steered2;
  bool expansion_exists = false;
  /** rows: side-1 steered states (by mm2); cols: side-2 steered (by mm1). */
  Eigen::MatrixXd expansion_coeffs;
  double expansion_residual = 0.0;
};

BipartiteIdentities induced_identities_bipartite(const BipartiteState& rho,
                                                 const MultiMeasurement& mm1,
                                                 const MultiMeasurement& mm2);

/**
 * Nonsingularity of a bipartite state: both steering superoperators
 * Psi_1(X) = Tr_1[(X^T (x) 1) rho] and Psi_2(X) = Tr_2[(1 (x) X^T) rho]
 * are invertible. Requires equal subsystem dimensions to be possible at
 * all. Exactly the states whose steering creates no new identities.
 */
struct NonsingularityReport {
  bool nonsingular = false;
  /** Condition numbers of the two steering maps (infinity when singular). */
  double cond1 = 0.0;
  double cond2 = 0.0;
};

NonsingularityReport is_nonsingular(const BipartiteState& rho);

/** The steering map Tr_side[(M on `side`) rho] applied to one operator. */
HermitianOperator steered_operator(const BipartiteState& rho, const HermitianOperator& m,
                                   int side);

}  // namespace qproc
