#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "gral/algebra.hpp"
#include "gral/lie.hpp"
#include "gral/subspace.hpp"
#include "gral/types.hpp"

namespace gral {

/// Basis of class indicator sums z_C; spans the center of C[G].
inline Subspace class_sum_basis(const AlgebraPtr& cg) {
  const auto info = group_block_info(cg);
  if (info.coeff) throw InvalidInput("class_sum_basis expects a plain group algebra");
  const auto& g = *info.group;
  const int k = static_cast<int>(g.classes.size());
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(k, cg->dim);
  for (int c = 0; c < k; ++c)
    for (int x : g.classes[c]) rows(c, x) = 1.0;
  return subspace_span(cg, rows);
}

/// span{ z_C (x) w : C a conjugacy class, w in a basis of W }; dimension
/// k * dim W.
inline Subspace class_function_space(const AlgebraPtr& tensor, const Subspace& w) {
  const auto info = group_block_info(tensor);
  if (!info.coeff) throw InvalidInput("class_function_space expects a tensor algebra");
  require_same_algebra(info.coeff, w.parent(), "class_function_space");
  const auto& g = *info.group;
  const int k = static_cast<int>(g.classes.size());
  Eigen::MatrixXcd rows =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k) * w.rank(), tensor->dim);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < w.rank(); ++r)
      for (int x : g.classes[c])
        rows.row(static_cast<Eigen::Index>(c) * w.rank() + r)
            .segment(static_cast<Eigen::Index>(x) * info.block, info.block) = w.basis().row(r);
  return subspace_span(tensor, rows);
}

struct CenterPair {
  Subspace from_structure;  // null space of the commutation system
  Subspace from_criterion;  // solutions of (f . x^{-1}) a = a (x . f)
};

/// Center of C[G] (x) A computed two independent ways and cross-checked;
/// a disagreement raises CrossCheckMismatch.
inline CenterPair generalized_center(const AlgebraPtr& alg) {
  const auto info = group_block_info(alg);
  const auto& g = *info.group;
  const int da = info.block;

  CenterPair out;
  out.from_structure = algebra_center(alg);

  // Route (ii): the translation system, one operator per (x, a-basis) pair.
  std::vector<Eigen::MatrixXcd> right_mats, left_mats;
  if (info.coeff) {
    right_mats.assign(da, Eigen::MatrixXcd::Zero(da, da));
    left_mats.assign(da, Eigen::MatrixXcd::Zero(da, da));
    info.coeff->for_each_term([&](int i, int j, int k, cdouble c) {
      right_mats[j](k, i) += c;  // (v b_j)[k] = sum_i v_i c(i, j, k)
      left_mats[i](k, j) += c;   // (b_i v)[k] = sum_j v_j c(i, j, k)
    });
  }
  const int num_ops = g.order * da;
  Eigen::MatrixXcd cols =
      joint_kernel(alg->dim, num_ops, [&](int op, const Eigen::MatrixXcd& n) {
        const int x = op / da;
        const int a = op % da;
        const int x_inv = g.inv[x];
        Eigen::MatrixXcd image(alg->dim, n.cols());
        for (int y = 0; y < g.order; ++y) {
          auto right_block = n.middleRows(static_cast<Eigen::Index>(g.mult(y, x_inv)) * da, da);
          auto left_block = n.middleRows(static_cast<Eigen::Index>(g.mult(x_inv, y)) * da, da);
          if (info.coeff)
            image.middleRows(static_cast<Eigen::Index>(y) * da, da) =
                right_mats[a] * right_block - left_mats[a] * left_block;
          else
            image.middleRows(static_cast<Eigen::Index>(y) * da, da) = right_block - left_block;
        }
        return image;
      });
  out.from_criterion = subspace_span(alg, Eigen::MatrixXcd(cols.transpose()));

  if (!subspace_equal(out.from_structure, out.from_criterion))
    throw CrossCheckMismatch("structure-constant center disagrees with translation system");
  return out;
}

/// True iff every A-valued slice of f lies in the center of A.
inline bool center_valued_check(const AlgebraElement& f) {
  const auto info = group_block_info(f.parent);
  if (!info.coeff) return true;  // scalar coefficients
  Subspace z = algebra_center(info.coeff);
  for (int y = 0; y < info.group->order; ++y) {
    Eigen::RowVectorXcd slice =
        f.coeffs.segment(static_cast<Eigen::Index>(y) * info.block, info.block).transpose();
    if (!z.contains(slice)) return false;
  }
  return true;
}

/// Conjugation average f#(x) = (1/|G|) sum_y f(y x y^{-1}); projects onto
/// class functions and maps Z(A)-valued functions onto the center.
inline AlgebraElement sharp_projection(const AlgebraElement& f) {
  const auto info = group_block_info(f.parent);
  const auto& g = *info.group;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.coeffs.size());
  for (int x = 0; x < g.order; ++x) {
    auto dst = out.segment(static_cast<Eigen::Index>(x) * info.block, info.block);
    for (int y = 0; y < g.order; ++y) {
      const int conj = g.mult(g.mult(y, x), g.inv[y]);
      dst += f.coeffs.segment(static_cast<Eigen::Index>(conj) * info.block, info.block);
    }
    dst /= static_cast<double>(g.order);
  }
  return {f.parent, std::move(out)};
}

/// Dense matrix of the sharp operator on coefficient vectors.
inline Eigen::MatrixXcd sharp_matrix(const AlgebraPtr& alg) {
  const auto info = group_block_info(alg);
  const auto& g = *info.group;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(alg->dim, alg->dim);
  const double w = 1.0 / g.order;
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) {
      const int conj = g.mult(g.mult(y, x), g.inv[y]);
      for (int i = 0; i < info.block; ++i)
        p(static_cast<Eigen::Index>(x) * info.block + i,
          static_cast<Eigen::Index>(conj) * info.block + i) += w;
    }
  return p;
}

/// Fixed-point space of sharp (equals its range and the class functions).
inline Subspace sharp_fixed_space(const AlgebraPtr& alg) {
  Eigen::MatrixXcd p = sharp_matrix(alg);
  Eigen::MatrixXcd kern = null_space(p - Eigen::MatrixXcd::Identity(alg->dim, alg->dim));
  return subspace_span(alg, Eigen::MatrixXcd(kern.transpose()));
}

inline Subspace sharp_range(const AlgebraPtr& alg) {
  Eigen::MatrixXcd p = sharp_matrix(alg);
  return subspace_span(alg, Eigen::MatrixXcd(p.transpose()));
}

struct CenterReport {
  int dim_center = 0;
  int dim_predicted = 0;
  bool equal_as_subspaces = false;
  bool sharp_is_projection = false;
  double discrepancy_norm = 0.0;
};

/// Verifies the center-tensor identity Z(C[G]) (x) Z(A) = Z(C[G] (x) A) for
/// unital A: compares the class-function realization of the left side with
/// the computed center, and checks that sharp maps the lift of Z(A) onto it.
inline CenterReport verify_center_tensor(const AlgebraPtr& tensor) {
  const auto info = group_block_info(tensor);
  if (!info.coeff) throw InvalidInput("verify_center_tensor expects a tensor algebra");
  if (!info.coeff->is_unital()) throw NonUnital("the center-tensor identity assumes unital A");
  const auto& g = *info.group;
  const int k = static_cast<int>(g.classes.size());

  Subspace zc = algebra_center(info.coeff);
  Subspace lhs = class_function_space(tensor, zc);
  CenterPair pair = generalized_center(tensor);

  CenterReport report;
  report.dim_center = pair.from_structure.rank();
  report.dim_predicted = k * zc.rank();
  double disc = std::max(lhs.max_row_residual(pair.from_structure.basis()),
                         pair.from_structure.max_row_residual(lhs.basis()));
  report.equal_as_subspaces = subspace_equal(lhs, pair.from_structure);

  // Sharp range check on a spanning set of the lift of Z(A).
  Subspace lift = lift_subspace(tensor, zc);
  Eigen::MatrixXcd mapped(lift.rank(), tensor->dim);
  double idem = 0.0;
  for (int r = 0; r < lift.rank(); ++r) {
    AlgebraElement v{tensor, lift.basis().row(r).transpose()};
    AlgebraElement sv = sharp_projection(v);
    AlgebraElement ssv = sharp_projection(sv);
    idem = std::max(idem, (ssv.coeffs - sv.coeffs).cwiseAbs().maxCoeff());
    mapped.row(r) = sv.coeffs.transpose();
  }
  Subspace sharp_span = subspace_span(tensor, mapped);
  report.sharp_is_projection =
      idem <= 1e-10 * tolerance_scale() && subspace_equal(sharp_span, pair.from_structure);
  disc = std::max(disc, idem);
  disc = std::max(disc, sharp_span.max_row_residual(pair.from_structure.basis()));
  disc = std::max(disc, pair.from_structure.max_row_residual(sharp_span.basis()));
  report.discrepancy_norm = disc;
  return report;
}

}  // namespace gral
