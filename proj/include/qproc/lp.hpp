// SPDX-License-Identifier: MIT
/**
 * @file lp.hpp
 * Dense linear feasibility solver for the decision procedures.
 *
 * Everything the deciders ask of linear programming is one question: does
 * the polytope {x >= 0 : A x = b} contain a point? The solver answers with
 * either a feasible point or a Farkas certificate of infeasibility, so both
 * outcomes are independently checkable.
 */
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qproc/common.hpp"
#include "qproc/hermspace.hpp"

namespace qproc {

/** Outcome of a nonnegative feasibility solve. */
struct LpResult {
  bool feasible = false;
  /** Feasible point (x >= 0, A x ~ b); zero-length when infeasible. */
  Eigen::VectorXd x;
  /**
   * Farkas certificate when infeasible: y with yT A <= O(tol) entrywise and
   * yT b = 1, witnessing that no nonnegative solution exists. Zero-length
   * when feasible.
   */
  Eigen::VectorXd farkas;
  /** ||A x - b||_inf for a feasible point, phase-one optimum otherwise. */
  double residual = 0.0;
};

/**
 * Decides {x >= 0 : A x = b} by a two-phase dense simplex method with
 * Bland's rule (no cycling). Suited to the sizes the deciders produce:
 * tens of rows, up to a few tens of thousands of columns.
 *
 * @param tolerance feasibility threshold on the phase-one optimum.
 * @throws DimensionError if the shapes of a and b disagree.
 */
LpResult solve_nonnegative(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           double tolerance = tol::lp_feasibility);

// --------------------------------------------------------------------------
// PSD feasibility
// --------------------------------------------------------------------------

/**
 * A block positive-semidefinite feasibility problem: find Hermitian blocks
 * X_1, ..., X_K with X_k >= 0 and sum_k Tr[rows[c][k] X_k] = rhs[c] for
 * every constraint row c. The joint-measurability searches of the deciders
 * produce exactly this shape (one block per parent outcome, one row per
 * marginal pairing).
 */
struct PsdProblem {
  /** Block dimensions, one PSD block per entry. */
  std::vector<int> dims;
  /** rows[c][k] pairs with block k in constraint c (one entry per block). */
  std::vector<std::vector<HermitianOperator>> rows;
  Eigen::VectorXd rhs;
};

/**
 * Three-valued outcome: the search never reports a wrong verdict; when the
 * iteration budget runs out before either a near-feasible point or a
 * certified separating functional appears, it answers Unknown.
 */
enum class PsdStatus { Feasible, Infeasible, Unknown };

/** Outcome of a PSD feasibility search. */
struct PsdResult {
  PsdStatus status = PsdStatus::Unknown;
  /** Feasible: PSD blocks meeting the rows within `residual`. */
  std::vector<HermitianOperator> point;
  /**
   * Infeasible: unit-Frobenius separating functional Phi (one block per
   * variable). Every block is PSD, Phi is orthogonal to the affine
   * directions, and <Phi, affine point> = -margin, so the affine set and
   * the PSD cone lie strictly on opposite sides of a hyperplane.
   */
  std::vector<HermitianOperator> separator;
  /** Feasible: worst affine row residual of the returned point. */
  double residual = 0.0;
  /** Infeasible: certified separation margin (>= margin_tolerance). */
  double margin = 0.0;
  int iterations = 0;
  std::string detail;
};

/**
 * Decides block-PSD feasibility by Dykstra's alternating projection between
 * the affine set and the product of PSD cones. Feasible is declared when a
 * PSD iterate meets the rows within feas_tolerance; Infeasible only when
 * the accumulated normal vector purifies into a verified separating
 * functional with margin above margin_tolerance; otherwise Unknown.
 *
 * @throws DimensionError on inconsistent problem shapes.
 */
PsdResult psd_feasible(const PsdProblem& problem, int max_iterations = 20000,
                       double feas_tolerance = tol::psd_feasibility,
                       double margin_tolerance = tol::psd_margin);

}  // namespace qproc
