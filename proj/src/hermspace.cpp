// SPDX-License-Identifier: MIT
#include "qproc/hermspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qproc {

namespace {

/// Deterministic sign fix: flip v so its largest-magnitude entry (first one,
/// on ties) is positive. Keeps SVD output stable across runs.
void fix_sign(Eigen::VectorXd& v) {
  const double amax = v.cwiseAbs().maxCoeff();
  if (amax == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= amax * (1.0 - 1e-12)) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

/// Stack vectorized operators as the columns of a (d^2 x n) real matrix.
Eigen::MatrixXd stack(const std::vector<HermitianOperator>& ops) {
  if (ops.empty()) return Eigen::MatrixXd(0, 0);
  const int d = ops.front().dim();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].dim() != d)
      throw DimensionError("operator family mixes dimensions " + std::to_string(d) + " and " +
                           std::to_string(ops[k].dim()));
    m.col(static_cast<Eigen::Index>(k)) = vectorize(ops[k]);
  }
  return m;
}

int rank_of(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double cut = tol::rank_rel * singular_values[0];
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    if (singular_values[i] > cut && singular_values[i] > 0.0) ++r;
  return r;
}

}  // namespace

HermitianOperator::HermitianOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw DimensionError("Hermitian operator must be square and nonempty, got " +
                         std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermiticity)
    throw HermiticityError("matrix deviates from Hermiticity by " + std::to_string(dev) +
                           " (limit " + std::to_string(tol::hermiticity) + "); rejected");
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Eigen::MatrixXcd::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

double HermitianOperator::eig_min() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double HermitianOperator::eig_max() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.mat() + b.mat());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.mat() - b.mat());
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(s * a.mat());
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("hs_inner: dimension mismatch");
  return (a.mat() * b.mat()).trace().real();
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.mat() - b.mat(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Eigen::VectorXd vectorize(const HermitianOperator& h) {
  const int d = h.dim();
  const Eigen::MatrixXcd& m = h.mat();
  Eigen::VectorXd v(static_cast<Eigen::Index>(d) * d);
  Eigen::Index idx = 0;
  for (int k = 0; k < d; ++k) v[idx++] = m(k, k).real();
  const double s = std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      v[idx++] = s * m(k, l).real();
      v[idx++] = s * m(k, l).imag();
    }
  }
  return v;
}

HermitianOperator unvectorize(const Eigen::VectorXd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw DimensionError("unvectorize: coordinate vector has size " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim * dim));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index idx = 0;
  for (int k = 0; k < dim; ++k) m(k, k) = v[idx++];
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < dim; ++k) {
    for (int l = k + 1; l < dim; ++l) {
      const double re = v[idx++] * s;
      const double im = v[idx++] * s;
      m(k, l) = cdouble(re, im);
      m(l, k) = cdouble(re, -im);
    }
  }
  return HermitianOperator(m);
}

HermitianOperator OperatorSpan::project(const HermitianOperator& x) const {
  if (x.dim() != dim) throw DimensionError("OperatorSpan::project: dimension mismatch");
  if (rank() == 0) return HermitianOperator::zero(dim);
  const Eigen::VectorXd v = vectorize(x);
  return unvectorize(basis * (basis.transpose() * v), dim);
}

HermitianOperator OperatorSpan::project_identity() const {
  return project(HermitianOperator::identity(dim));
}

bool OperatorSpan::contains(const HermitianOperator& x, double tolerance) const {
  return (x - project(x)).norm() <= tolerance;
}

OperatorSpan span_of(const std::vector<HermitianOperator>& ops) {
  OperatorSpan v;
  if (ops.empty()) return v;
  v.dim = ops.front().dim();
  const Eigen::MatrixXd m = stack(ops);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const int r = rank_of(svd.singularValues());
  v.basis.resize(m.rows(), r);
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXd col = svd.matrixU().col(i);
    fix_sign(col);
    v.basis.col(i) = col;
  }
  return v;
}

std::vector<HermitianOperator> hermitian_basis(int dim) {
  if (dim <= 0) throw DimensionError("hermitian_basis needs dim >= 1, got " + std::to_string(dim));
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(dim) * dim);
  for (int a = 0; a < dim; ++a) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
    e(a, a) = 1.0;
    out.emplace_back(std::move(e));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(dim, dim);
      sym(a, b) = s;
      sym(b, a) = s;
      out.emplace_back(std::move(sym));
      Eigen::MatrixXcd asym = Eigen::MatrixXcd::Zero(dim, dim);
      asym(a, b) = cdouble(0.0, -s);
      asym(b, a) = cdouble(0.0, s);
      out.emplace_back(std::move(asym));
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> nullspace_coeffs(const std::vector<HermitianOperator>& ops) {
  std::vector<Eigen::VectorXd> out;
  if (ops.empty()) return out;
  const Eigen::MatrixXd m = stack(ops);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const int r = rank_of(svd.singularValues());
  const Eigen::Index n = m.cols();
  for (Eigen::Index i = r; i < n; ++i) {
    Eigen::VectorXd col = svd.matrixV().col(i);
    fix_sign(col);
    out.push_back(col);
  }
  return out;
}

HermitianOperator project_onto(const HermitianOperator& x, const OperatorSpan& v) {
  return v.project(x);
}

std::vector<HermitianOperator> dual_basis(const std::vector<HermitianOperator>& ops) {
  const int n = static_cast<int>(ops.size());
  if (n == 0) throw FrameError("dual_basis: empty family");
  if (span_of(ops).rank() != n)
    throw FrameError("dual_basis: family of " + std::to_string(n) +
                     " operators is linearly dependent");
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = hs_inner(ops[i], ops[j]);
  const Eigen::MatrixXd coeff = gram.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<HermitianOperator> duals;
  duals.reserve(n);
  for (int i = 0; i < n; ++i) {
    HermitianOperator d = HermitianOperator::zero(ops.front().dim());
    for (int j = 0; j < n; ++j) d = d + coeff(i, j) * ops[j];
    duals.push_back(d);
  }
  return duals;
}

std::vector<HermitianOperator> canonical_dual_frame(const std::vector<HermitianOperator>& ops) {
  if (ops.empty()) throw FrameError("canonical_dual_frame: empty family");
  const int d = ops.front().dim();
  const Eigen::MatrixXd m = stack(ops);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int r = rank_of(svd.singularValues());
  // Pseudoinverse transpose: columns of U * S^+ * V^T are the dual vectors.
  Eigen::VectorXd sinv = Eigen::VectorXd::Zero(svd.singularValues().size());
  for (int i = 0; i < r; ++i) sinv[i] = 1.0 / svd.singularValues()[i];
  const Eigen::MatrixXd dual_vecs =
      svd.matrixU() * sinv.asDiagonal() * svd.matrixV().transpose();
  std::vector<HermitianOperator> duals;
  duals.reserve(ops.size());
  for (Eigen::Index j = 0; j < dual_vecs.cols(); ++j)
    duals.push_back(unvectorize(dual_vecs.col(j), d));
  return duals;
}

RieszSolution riesz_in_span(const OperatorSpan& v,
                            const std::vector<HermitianOperator>& family,
                            const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(family.size()) != values.size())
    throw DimensionError("riesz_in_span: family/values size mismatch");
  if (v.rank() == 0) {
    const double res = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
    return {HermitianOperator::zero(v.dim), res};
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(family.size()), v.rank());
  for (std::size_t k = 0; k < family.size(); ++k)
    a.row(static_cast<Eigen::Index>(k)) = (vectorize(family[k]).transpose() * v.basis);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol::rank_rel);
  const Eigen::VectorXd c = svd.solve(values);
  const double residual =
      values.size() ? (a * c - values).cwiseAbs().maxCoeff() : 0.0;
  return {unvectorize(v.basis * c, v.dim), residual};
}

}  // namespace qproc
