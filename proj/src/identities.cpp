// SPDX-License-Identifier: MIT
#include "qproc/identities.hpp"

#include <cmath>
#include <limits>

namespace qproc {

namespace {

std::vector<std::string> source_labels(const MultiSource& ms) {
  std::vector<std::string> labels;
  labels.reserve(ms.size());
  for (int x = 0; x < ms.n_settings; ++x)
    for (int a = 0; a < ms.n_outcomes; ++a)
      labels.push_back("a" + std::to_string(a) + "|x" + std::to_string(x));
  return labels;
}

std::vector<std::string> measurement_labels(const MultiMeasurement& mm) {
  std::vector<std::string> labels;
  labels.reserve(mm.size());
  for (int y = 0; y < mm.n_settings; ++y)
    for (int b = 0; b < mm.n_outcomes; ++b)
      labels.push_back("b" + std::to_string(b) + "|y" + std::to_string(y));
  return labels;
}

IdentitySet identity_set_of(const std::vector<HermitianOperator>& family,
                            std::vector<std::string> labels) {
  IdentitySet out;
  out.index_labels = std::move(labels);
  out.basis = nullspace_coeffs(family);
  return out;
}

}  // namespace

bool IdentitySet::contains(const Eigen::VectorXd& alpha, double tolerance) const {
  if (basis.empty()) return alpha.norm() <= tolerance;
  Eigen::VectorXd residual = alpha;
  for (const auto& b : basis) residual -= b.dot(alpha) * b;
  return residual.norm() <= tolerance * std::max(1.0, alpha.norm());
}

IdentitySet identities_of_multisource(const MultiSource& ms) {
  validate(ms);
  return identity_set_of(ms.family(), source_labels(ms));
}

IdentitySet identities_of_multimeasurement(const MultiMeasurement& mm) {
  validate(mm);
  return identity_set_of(mm.effects, measurement_labels(mm));
}

HermitianOperator steered_operator(const BipartiteState& rho, const HermitianOperator& m,
                                   int side) {
  if (side != 1 && side != 2) throw ValidationError("steered_operator: side must be 1 or 2");
  const int dm = side == 1 ? rho.d1 : rho.d2;
  const int dr = side == 1 ? rho.d2 : rho.d1;
  if (m.dim() != dm) throw DimensionError("steered_operator: operator dimension mismatch");
  const Eigen::MatrixXcd id_rest = Eigen::MatrixXcd::Identity(dr, dr);
  const Eigen::MatrixXcd full =
      side == 1 ? kron(m.mat(), id_rest) : kron(id_rest, m.mat());
  const Eigen::MatrixXcd prod = full * rho.rho.mat();
  return partial_trace(HermitianOperator(0.5 * (prod + prod.adjoint()).eval()), rho.dims(),
                       {side == 2, side == 1});
}

BipartiteIdentities induced_identities_bipartite(const BipartiteState& rho,
                                                 const MultiMeasurement& mm1,
                                                 const MultiMeasurement& mm2) {
  validate(rho);
  validate(mm1);
  validate(mm2);
  if (mm1.dim != rho.d1 || mm2.dim != rho.d2)
    throw DimensionError("induced_identities_bipartite: measurement dimensions must match the "
                         "subsystems");

  BipartiteIdentities out;
  out.m1 = identities_of_multimeasurement(mm1);
  out.m2 = identities_of_multimeasurement(mm2);

  std::vector<HermitianOperator> steered_by_1, steered_by_2;
  for (const auto& m : mm1.effects) steered_by_1.push_back(steered_operator(rho, m, 1));
  for (const auto& m : mm2.effects) steered_by_2.push_back(steered_operator(rho, m, 2));
  out.steered1 = identity_set_of(steered_by_1, measurement_labels(mm1));
  out.steered2 = identity_set_of(steered_by_2, measurement_labels(mm2));

  // Product expansion of rho over side-1 states steered by mm2 and side-2
  // states steered by mm1, as a least-squares system on vectorized products.
  const int n1 = static_cast<int>(steered_by_2.size());  // states of side 1
  const int n2 = static_cast<int>(steered_by_1.size());  // states of side 2
  const int total = rho.d1 * rho.d2;
  Eigen::MatrixXd a(total * total, n1 * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      a.col(i * n2 + j) = vectorize(kron(steered_by_2[i], steered_by_1[j]));
  const Eigen::VectorXd target = vectorize(rho.rho);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol::rank_rel);
  const Eigen::VectorXd alpha = svd.solve(target);
  out.expansion_residual = (a * alpha - target).norm();
  out.expansion_exists = out.expansion_residual <= 1e-8 * std::max(1.0, target.norm());
  out.expansion_coeffs = Eigen::Map<const Eigen::MatrixXd>(alpha.data(), n2, n1).transpose();
  return out;
}

NonsingularityReport is_nonsingular(const BipartiteState& rho) {
  validate(rho);
  NonsingularityReport out;
  if (rho.d1 != rho.d2) {
    out.nonsingular = false;
    out.cond1 = out.cond2 = std::numeric_limits<double>::infinity();
    return out;
  }
  const int d = rho.d1;
  auto steering_matrix = [&](int side) {
    Eigen::MatrixXd psi(d * d, d * d);
    for (int k = 0; k < d * d; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d * d);
      e(k) = 1.0;
      const HermitianOperator x = unvectorize(e, d);
      const HermitianOperator xt(x.mat().transpose().eval());
      psi.col(k) = vectorize(steered_operator(rho, xt, side));
    }
    return psi;
  };
  auto analyze = [](const Eigen::MatrixXd& psi, double& cond) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= tol::rank_rel * std::max(smax, 1e-300)) {
      cond = std::numeric_limits<double>::infinity();
      return false;
    }
    cond = smax / smin;
    return true;
  };
  const bool ok1 = analyze(steering_matrix(1), out.cond1);
  const bool ok2 = analyze(steering_matrix(2), out.cond2);
  out.nonsingular = ok1 && ok2;
  return out;
}

}  // namespace qproc
