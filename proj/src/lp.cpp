// SPDX-License-Identifier: MIT
#include "qproc/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qproc {

namespace {

/// Pivot magnitudes below this are treated as zero in the ratio test.
constexpr double kPivotTol = 1e-11;
/// Reduced costs above -kReducedTol count as optimal.
constexpr double kReducedTol = 1e-10;

}  // namespace

LpResult solve_nonnegative(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tolerance) {
  using Index = Eigen::Index;
  const Index m = a.rows(), n = a.cols();
  if (b.size() != m)
    throw DimensionError("solve_nonnegative: A has " + std::to_string(m) + " rows but b has " +
                         std::to_string(b.size()) + " entries");

  LpResult res;
  if (m == 0) {
    res.feasible = true;
    res.x = Eigen::VectorXd::Zero(n);
    return res;
  }

  // Phase-one tableau [A' | I | b'] with rows flipped so b' >= 0; the
  // artificial variables start basic and their sum is minimized.
  const Index cols = n + m + 1, rhs = cols - 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, cols);
  Eigen::VectorXd sign(m);
  for (Index i = 0; i < m; ++i) {
    sign(i) = (b(i) >= 0.0) ? 1.0 : -1.0;
    t.row(i).head(n) = sign(i) * a.row(i);
    t(i, n + i) = 1.0;
    t(i, rhs) = sign(i) * b(i);
  }
  // Reduced-cost row for the artificial objective under the initial basis.
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(cols);
  for (Index i = 0; i < m; ++i) cost -= t.row(i);
  cost.segment(n, m).setZero();

  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Dantzig pivoting for speed; pure Bland after a stall bound for finite
  // termination on degenerate problems.
  const long bland_after = 200 + 10 * static_cast<long>(m + n);
  const long max_iter = 2000 + 200 * static_cast<long>(m + n);
  for (long iter = 0;; ++iter) {
    if (iter > max_iter) throw std::runtime_error("solve_nonnegative: simplex iteration limit");

    Index enter = -1;
    if (iter < bland_after) {
      double most = -kReducedTol;
      for (Index j = 0; j < rhs; ++j)
        if (cost(j) < most) {
          most = cost(j);
          enter = j;
        }
    } else {
      for (Index j = 0; j < rhs; ++j)
        if (cost(j) < -kReducedTol) {
          enter = j;
          break;
        }
    }
    if (enter < 0) break;

    Index leave = -1;
    double best = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double piv = t(i, enter);
      if (piv <= kPivotTol) continue;
      const double ratio = t(i, rhs) / piv;
      if (leave < 0 || ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && basis[static_cast<std::size_t>(i)] <
                                        basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break;  // cannot happen: the phase-one objective is bounded

    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (Index i = 0; i < m; ++i)
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    cost -= cost(enter) * t.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  const double objective = -cost(rhs);
  if (objective <= tolerance) {
    res.feasible = true;
    res.x = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < m; ++i) {
      const Index j = basis[static_cast<std::size_t>(i)];
      if (j < n) res.x(j) = std::max(t(i, rhs), 0.0);
    }
    res.residual = (n > 0) ? (a * res.x - b).lpNorm<Eigen::Infinity>() : b.lpNorm<Eigen::Infinity>();
    return res;
  }

  // Infeasible: the phase-one duals y'_i = 1 - (reduced cost of artificial i)
  // satisfy y'T A' <= O(tol) and y'T b' = objective > 0; undo the row flips
  // and normalize to y.b = 1.
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) y(i) = sign(i) * (1.0 - cost(n + i));
  const double yb = y.dot(b);
  res.feasible = false;
  res.farkas = y / yb;
  res.residual = objective;
  return res;
}

// --------------------------------------------------------------------------
// PSD feasibility
// --------------------------------------------------------------------------

namespace {

/// Residual allowed on the affine-direction component of a separator.
constexpr double kSeparatorDirTol = 1e-9;
/// Alternating-projection rounds used to purify a separator candidate.
constexpr int kSeparatorPolish = 80;
/// Iterations between infeasibility certification attempts.
constexpr int kCertifyStride = 256;

/// Offsets of each block inside the concatenated real vectorization.
std::vector<int> block_offsets(const std::vector<int>& dims, int* total) {
  std::vector<int> off(dims.size(), 0);
  int acc = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    off[k] = acc;
    acc += dims[k] * dims[k];
  }
  *total = acc;
  return off;
}

std::vector<HermitianOperator> split_blocks(const Eigen::VectorXd& v, const std::vector<int>& dims,
                                            const std::vector<int>& off) {
  std::vector<HermitianOperator> blocks;
  blocks.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k)
    blocks.push_back(unvectorize(v.segment(off[k], dims[k] * dims[k]), dims[k]));
  return blocks;
}

/** Projection onto the product PSD cone; reports the worst eigenvalue deficit. */
Eigen::VectorXd clip_psd_blocks(const Eigen::VectorXd& v, const std::vector<int>& dims,
                                const std::vector<int>& off, double* deficit) {
  Eigen::VectorXd out(v.size());
  if (deficit != nullptr) *deficit = 0.0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int d = dims[k];
    const HermitianOperator h = unvectorize(v.segment(off[k], d * d), d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.mat());
    if (deficit != nullptr) *deficit = std::max(*deficit, -es.eigenvalues().minCoeff());
    const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd m =
        es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
    out.segment(off[k], d * d) = vectorize(HermitianOperator(0.5 * (m + m.adjoint())));
  }
  return out;
}

}  // namespace

PsdResult psd_feasible(const PsdProblem& problem, int max_iterations, double feas_tolerance,
                       double margin_tolerance) {
  using Index = Eigen::Index;
  const std::size_t nblocks = problem.dims.size();
  const Index nrows = static_cast<Index>(problem.rows.size());
  if (problem.rhs.size() != nrows)
    throw DimensionError("psd_feasible: row/rhs count mismatch");
  for (const auto& row : problem.rows) {
    if (row.size() != nblocks) throw DimensionError("psd_feasible: row with wrong block count");
    for (std::size_t k = 0; k < nblocks; ++k)
      if (row[k].dim() != problem.dims[k])
        throw DimensionError("psd_feasible: row block dimension mismatch");
  }

  int total = 0;
  const std::vector<int> off = block_offsets(problem.dims, &total);

  PsdResult res;
  if (total == 0) {
    // No variables: feasible exactly when every row is trivially satisfied.
    const double r = (nrows > 0) ? problem.rhs.lpNorm<Eigen::Infinity>() : 0.0;
    res.status = (r <= feas_tolerance) ? PsdStatus::Feasible : PsdStatus::Unknown;
    res.residual = r;
    res.detail = "empty problem";
    return res;
  }

  Eigen::MatrixXd m(nrows, total);
  for (Index c = 0; c < nrows; ++c)
    for (std::size_t k = 0; k < nblocks; ++k)
      m.row(c).segment(off[k], problem.dims[k] * problem.dims[k]) =
          vectorize(problem.rows[static_cast<std::size_t>(c)][k]).transpose();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  const Eigen::VectorXd particular = (nrows > 0)
                                         ? Eigen::VectorXd(cod.solve(problem.rhs))
                                         : Eigen::VectorXd(Eigen::VectorXd::Zero(total));
  if (nrows > 0) {
    const double scale = std::max(1.0, problem.rhs.lpNorm<Eigen::Infinity>());
    if ((m * particular - problem.rhs).lpNorm<Eigen::Infinity>() > 1e-9 * scale) {
      res.status = PsdStatus::Unknown;
      res.detail = "affine rows are mutually inconsistent";
      return res;
    }
  }

  const auto project_affine = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (nrows == 0) return v;
    return v - cod.solve(m * v - problem.rhs);
  };
  const auto project_rowspace = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (nrows == 0) return Eigen::VectorXd::Zero(total);
    return cod.solve(m * v);
  };

  // Dykstra between the affine set and the PSD product cone; only the cone
  // needs a correction term because the affine projection is linear.
  Eigen::VectorXd y = project_affine(particular);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(total);
  Eigen::VectorXd cone_pt = y;

  const auto try_certify = [&](const Eigen::VectorXd& gap) -> bool {
    Eigen::VectorXd phi = gap;
    for (int round = 0; round < kSeparatorPolish; ++round) {
      phi = project_rowspace(phi);
      phi = clip_psd_blocks(phi, problem.dims, off, nullptr);
    }
    const double nrm = phi.norm();
    if (nrm <= 1e-12) return false;
    phi /= nrm;
    if ((phi - project_rowspace(phi)).norm() > kSeparatorDirTol) return false;
    const double margin = -phi.dot(particular);
    if (margin < margin_tolerance) return false;
    std::vector<HermitianOperator> blocks = split_blocks(phi, problem.dims, off);
    for (const auto& blk : blocks)
      if (blk.eig_min() < -tol::psd_floor) return false;
    res.status = PsdStatus::Infeasible;
    res.separator = std::move(blocks);
    res.margin = margin;
    res.detail = "separating functional certified";
    return true;
  };

  for (int it = 0; it < max_iterations; ++it) {
    double deficit = 0.0;
    cone_pt = clip_psd_blocks(y + q, problem.dims, off, &deficit);
    q = y + q - cone_pt;
    const double ares =
        (nrows > 0) ? (m * cone_pt - problem.rhs).lpNorm<Eigen::Infinity>() : 0.0;
    if (ares <= feas_tolerance) {
      res.status = PsdStatus::Feasible;
      res.point = split_blocks(cone_pt, problem.dims, off);
      res.residual = ares;
      res.iterations = it + 1;
      res.detail = "PSD point within affine tolerance";
      return res;
    }
    y = project_affine(cone_pt);
    res.iterations = it + 1;
    if ((it + 1) % kCertifyStride == 0 || it + 1 == max_iterations) {
      if (try_certify(cone_pt - y)) return res;
    }
  }

  res.status = PsdStatus::Unknown;
  res.detail = "iteration budget exhausted";
  return res;
}

}  // namespace qproc
