#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "gral/algebra.hpp"
#include "gral/types.hpp"

namespace gral {

namespace detail {

/// Modified Gram-Schmidt with one reorthogonalization pass; rows whose
/// residual falls below the pivot threshold are dropped.
inline Eigen::MatrixXcd orthonormal_rows(const Eigen::MatrixXcd& rows) {
  const Eigen::Index n = rows.cols();
  Eigen::MatrixXcd basis(std::min(rows.rows(), n), n);
  Eigen::Index r = 0;
  for (Eigen::Index v = 0; v < rows.rows(); ++v) {
    Eigen::RowVectorXcd w = rows.row(v);
    const double scale = std::max(1.0, w.norm());
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index b = 0; b < r; ++b)
        w -= basis.row(b).dot(w) * basis.row(b);
    if (w.norm() > eps_rank() * scale) {
      basis.row(r++) = w / w.norm();
      if (r == n) break;
    }
  }
  return basis.topRows(r);
}

}  // namespace detail

/// Linear subspace of an algebra, stored as an orthonormal row basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(AlgebraPtr parent, Eigen::MatrixXcd orthonormal_basis)
      : parent_(std::move(parent)), basis_(std::move(orthonormal_basis)) {}

  static Subspace zero(const AlgebraPtr& parent) {
    return {parent, Eigen::MatrixXcd(0, parent->dim)};
  }

  static Subspace full(const AlgebraPtr& parent) {
    return {parent, Eigen::MatrixXcd::Identity(parent->dim, parent->dim)};
  }

  const AlgebraPtr& parent() const { return parent_; }
  const Eigen::MatrixXcd& basis() const { return basis_; }
  int rank() const { return static_cast<int>(basis_.rows()); }
  int ambient_dim() const { return parent_->dim; }

  AlgebraElement basis_vector(int i) const {
    return {parent_, basis_.row(i).transpose()};
  }

  Eigen::RowVectorXcd project(const Eigen::RowVectorXcd& v) const {
    if (rank() == 0) return Eigen::RowVectorXcd::Zero(v.cols());
    return (v * basis_.adjoint()) * basis_;
  }

  /// Relative distance of v from the subspace: ||v - proj(v)|| / max(1, ||v||).
  double residual(const Eigen::RowVectorXcd& v) const {
    return (v - project(v)).norm() / std::max(1.0, v.norm());
  }

  bool contains(const Eigen::RowVectorXcd& v) const { return residual(v) <= eps_member(); }

  bool contains(const AlgebraElement& v) const {
    require_same_algebra(parent_, v.parent, "subspace_contains");
    return contains(Eigen::RowVectorXcd(v.coeffs.transpose()));
  }

  /// Largest relative residual over the rows of X.
  double max_row_residual(const Eigen::MatrixXcd& X) const {
    if (X.rows() == 0) return 0.0;
    Eigen::MatrixXcd R = X;
    if (rank() > 0) R -= (X * basis_.adjoint()) * basis_;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      worst = std::max(worst, R.row(i).norm() / std::max(1.0, X.row(i).norm()));
    return worst;
  }

  bool contains_all(const Eigen::MatrixXcd& X) const {
    return max_row_residual(X) <= eps_member();
  }

 private:
  AlgebraPtr parent_;
  Eigen::MatrixXcd basis_;  // rank x dim, orthonormal rows
};

inline Subspace subspace_span(const AlgebraPtr& parent, const Eigen::MatrixXcd& rows) {
  if (rows.cols() != parent->dim && rows.rows() > 0)
    throw InvalidInput("spanning vectors have wrong length");
  if (rows.rows() == 0) return Subspace::zero(parent);
  return {parent, detail::orthonormal_rows(rows)};
}

inline Subspace subspace_span(const AlgebraPtr& parent,
                              const std::vector<AlgebraElement>& vecs) {
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(vecs.size()), parent->dim);
  for (size_t i = 0; i < vecs.size(); ++i) {
    require_same_algebra(parent, vecs[i].parent, "subspace_span");
    rows.row(static_cast<Eigen::Index>(i)) = vecs[i].coeffs.transpose();
  }
  return subspace_span(parent, rows);
}

inline bool subspace_contains(const Subspace& s, const AlgebraElement& v) {
  return s.contains(v);
}

inline Subspace subspace_sum(const Subspace& s, const Subspace& t) {
  require_same_algebra(s.parent(), t.parent(), "subspace_sum");
  Eigen::MatrixXcd rows(s.rank() + t.rank(), s.ambient_dim());
  rows.topRows(s.rank()) = s.basis();
  rows.bottomRows(t.rank()) = t.basis();
  return subspace_span(s.parent(), rows);
}

/// Intersection via principal angles: singular values of B_s B_t^H equal to 1
/// flag common directions.
inline Subspace subspace_intersect(const Subspace& s, const Subspace& t) {
  require_same_algebra(s.parent(), t.parent(), "subspace_intersect");
  if (s.rank() == 0 || t.rank() == 0) return Subspace::zero(s.parent());
  Eigen::MatrixXcd m = s.basis() * t.basis().adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU);
  std::vector<Eigen::Index> common;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] >= 1.0 - 1e-8 * tolerance_scale()) common.push_back(i);
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(common.size()), s.ambient_dim());
  for (size_t i = 0; i < common.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) =
        svd.matrixU().col(common[i]).adjoint() * s.basis();
  return subspace_span(s.parent(), rows);
}

inline bool subspace_equal(const Subspace& s, const Subspace& t) {
  require_same_algebra(s.parent(), t.parent(), "subspace_equal");
  if (s.rank() != t.rank()) return false;
  return t.max_row_residual(s.basis()) <= eps_member() &&
         s.max_row_residual(t.basis()) <= eps_member();
}

/// Kernel of a dense matrix as columns, at relative threshold eps_rank.
inline Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return Eigen::MatrixXcd::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = eps_rank() * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > tol) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

/// Joint kernel of a family of operators, intersected incrementally: columns
/// of the result span { v : op(i, v-batch) = 0 for all i }. Each operator is
/// presented as a callback filling the image of the current candidate batch.
template <typename ApplyOp>
inline Eigen::MatrixXcd joint_kernel(int dim, int num_ops, ApplyOp&& apply) {
  Eigen::MatrixXcd candidates = Eigen::MatrixXcd::Identity(dim, dim);
  for (int op = 0; op < num_ops && candidates.cols() > 0; ++op) {
    Eigen::MatrixXcd image = apply(op, candidates);
    Eigen::MatrixXcd kern = null_space(image);
    if (kern.cols() == candidates.cols()) continue;
    candidates = candidates * kern;
    // Re-orthonormalize to keep the kernel thresholds meaningful.
    candidates = detail::orthonormal_rows(candidates.transpose()).transpose();
  }
  return candidates;
}

/// Center of an algebra: the joint kernel of z -> [z, b_i] over all basis
/// elements, processed blockwise at tolerance eps_rank.
inline Subspace algebra_center(const AlgebraPtr& a) {
  Eigen::MatrixXcd cols = joint_kernel(a->dim, a->dim, [&](int i, const Eigen::MatrixXcd& n) {
    return a->left_basis_apply(i, n) - a->right_basis_apply(i, n);
  });
  return subspace_span(a, Eigen::MatrixXcd(cols.transpose()));
}

/// Seed-controlled random subspace: dimension uniform in [min_dim, max_dim],
/// basis entries standard complex Gaussian.
inline Subspace random_subspace(const AlgebraPtr& parent, std::mt19937_64& rng,
                                int min_dim = 0, int max_dim = -1) {
  if (max_dim < 0) max_dim = parent->dim;
  std::uniform_int_distribution<int> dims(min_dim, max_dim);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int r = dims(rng);
  Eigen::MatrixXcd rows(r, parent->dim);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < parent->dim; ++j) rows(i, j) = cdouble(gauss(rng), gauss(rng));
  return subspace_span(parent, rows);
}

inline AlgebraElement random_element(const AlgebraPtr& parent, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(parent->dim);
  for (int j = 0; j < parent->dim; ++j) v[j] = cdouble(gauss(rng), gauss(rng));
  return {parent, std::move(v)};
}

}  // namespace gral
