#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gral/algebra.hpp"
#include "gral/characters.hpp"
#include "gral/subspace.hpp"
#include "gral/types.hpp"

namespace gral {

struct LieWitness {
  AlgebraElement element;  // the member of L whose image escapes
  int algebra_basis = -1;  // b index ([l, b] checks)
  int group_index = -1;    // x (translation criterion)
  int coeff_basis = -1;    // a index (translation criterion)
  AlgebraElement escape;   // the vector that fails membership
  double residual = 0.0;
  std::string kind;
};

struct LieCheckResult {
  bool ok = true;
  std::optional<LieWitness> witness;
  explicit operator bool() const { return ok; }
};

namespace detail {

/// Rows of the result: row j = [l, b_j] for every algebra basis element.
inline Eigen::MatrixXcd commutator_rows(const StructureAlgebra& alg,
                                        const Eigen::VectorXcd& l) {
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(alg.dim, alg.dim);
  alg.for_each_term([&](int a, int b, int k, cdouble c) {
    if (l[a] != cdouble(0)) rows(b, k) += l[a] * c;  // (l b_j) picks i = a, j = b
    if (l[b] != cdouble(0)) rows(a, k) -= l[b] * c;  // (b_j l) picks j = a, i = b
  });
  return rows;
}

inline int first_violation(const Subspace& target, const Eigen::MatrixXcd& rows,
                           double* residual) {
  Eigen::MatrixXcd res = rows;
  if (target.rank() > 0) res -= (rows * target.basis().adjoint()) * target.basis();
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    const double rel = res.row(j).norm() / std::max(1.0, rows.row(j).norm());
    if (rel > eps_member()) {
      *residual = rel;
      return static_cast<int>(j);
    }
  }
  return -1;
}

}  // namespace detail

/// Tests [L, A] within L over basis pairs; on failure reports the first
/// violation in scan order (L basis row, then algebra basis index).
inline LieCheckResult is_lie_ideal(const Subspace& L) {
  const auto& alg = L.parent();
  if (L.rank() == 0 || L.rank() == alg->dim) return {};
  for (int r = 0; r < L.rank(); ++r) {
    Eigen::VectorXcd l = L.basis().row(r).transpose();
    Eigen::MatrixXcd rows = detail::commutator_rows(*alg, l);
    double rel = 0.0;
    int j = detail::first_violation(L, rows, &rel);
    if (j >= 0) {
      LieCheckResult out;
      out.ok = false;
      out.witness = LieWitness{{alg, l}, j, -1, -1, {alg, rows.row(j).transpose()}, rel,
                               "commutator"};
      return out;
    }
  }
  return {};
}

/// Two-sided ideal test over basis pairs.
inline LieCheckResult is_ideal(const Subspace& L) {
  const auto& alg = L.parent();
  if (L.rank() == 0 || L.rank() == alg->dim) return {};
  for (int r = 0; r < L.rank(); ++r) {
    Eigen::VectorXcd l = L.basis().row(r).transpose();
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(alg->dim, alg->dim);   // b_j . l
    Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(alg->dim, alg->dim);  // l . b_j
    alg->for_each_term([&](int a, int b, int k, cdouble c) {
      if (l[b] != cdouble(0)) left(a, k) += c * l[b];
      if (l[a] != cdouble(0)) right(b, k) += c * l[a];
    });
    for (const auto* rows : {&left, &right}) {
      double rel = 0.0;
      int j = detail::first_violation(L, *rows, &rel);
      if (j >= 0) {
        LieCheckResult out;
        out.ok = false;
        out.witness = LieWitness{{alg, l}, j, -1, -1, {alg, rows->row(j).transpose()}, rel,
                                 rows == &left ? "left_product" : "right_product"};
        return out;
      }
    }
  }
  return {};
}

/// (x . f)(y) = f(x^{-1} y); A-valued slices move as blocks.
inline AlgebraElement left_translate(int x, const AlgebraElement& f) {
  const auto info = group_block_info(f.parent);
  const auto& g = *info.group;
  Eigen::VectorXcd out(f.coeffs.size());
  const int xi = g.inv[x];
  for (int y = 0; y < g.order; ++y)
    out.segment(static_cast<Eigen::Index>(y) * info.block, info.block) =
        f.coeffs.segment(static_cast<Eigen::Index>(g.mult(xi, y)) * info.block, info.block);
  return {f.parent, std::move(out)};
}

/// (f . x)(y) = f(y x).
inline AlgebraElement right_translate(const AlgebraElement& f, int x) {
  const auto info = group_block_info(f.parent);
  const auto& g = *info.group;
  Eigen::VectorXcd out(f.coeffs.size());
  for (int y = 0; y < g.order; ++y)
    out.segment(static_cast<Eigen::Index>(y) * info.block, info.block) =
        f.coeffs.segment(static_cast<Eigen::Index>(g.mult(y, x)) * info.block, info.block);
  return {f.parent, std::move(out)};
}

/// (f a)(y) = f(y) a for a in the coefficient algebra.
inline AlgebraElement coeff_right_mul(const AlgebraElement& f, const AlgebraElement& a) {
  const auto info = group_block_info(f.parent);
  if (!info.coeff) throw InvalidInput("coefficient action needs a tensor algebra");
  require_same_algebra(info.coeff, a.parent, "coeff_right_mul");
  Eigen::VectorXcd out(f.coeffs.size());
  for (int y = 0; y < info.group->order; ++y)
    out.segment(static_cast<Eigen::Index>(y) * info.block, info.block) =
        info.coeff->multiply_vec(
            f.coeffs.segment(static_cast<Eigen::Index>(y) * info.block, info.block), a.coeffs);
  return {f.parent, std::move(out)};
}

/// (a f)(y) = a f(y).
inline AlgebraElement coeff_left_mul(const AlgebraElement& a, const AlgebraElement& f) {
  const auto info = group_block_info(f.parent);
  if (!info.coeff) throw InvalidInput("coefficient action needs a tensor algebra");
  require_same_algebra(info.coeff, a.parent, "coeff_left_mul");
  Eigen::VectorXcd out(f.coeffs.size());
  for (int y = 0; y < info.group->order; ++y)
    out.segment(static_cast<Eigen::Index>(y) * info.block, info.block) =
        info.coeff->multiply_vec(
            a.coeffs, f.coeffs.segment(static_cast<Eigen::Index>(y) * info.block, info.block));
  return {f.parent, std::move(out)};
}

namespace detail {

/// Slices of f as columns: column y = f(y) in the coefficient algebra.
inline Eigen::MatrixXcd as_slices(const Eigen::VectorXcd& f, int block, int order) {
  return Eigen::Map<const Eigen::MatrixXcd>(f.data(), block, order);
}

inline Eigen::VectorXcd from_slices(const Eigen::MatrixXcd& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.data(), s.size());
}

}  // namespace detail

/// Theorem-style translation criterion restricted to a subset of group
/// elements: (f . x^{-1}) a - a (x . f) must stay in L for every basis f of
/// L, every listed x and every coefficient basis element a (Delta = 1 on a
/// finite group). Scan order: L basis row, then group index, then coefficient
/// basis index.
inline LieCheckResult discrete_lie_criterion_over(const Subspace& L,
                                                  const std::vector<int>& xs) {
  const auto& alg = L.parent();
  const auto info = group_block_info(alg);
  const auto& g = *info.group;
  const int da = info.block;
  if (L.rank() == 0 || L.rank() == alg->dim) return {};
  for (int r = 0; r < L.rank(); ++r) {
    Eigen::VectorXcd f = L.basis().row(r).transpose();
    Eigen::MatrixXcd slices = detail::as_slices(f, da, g.order);
    Eigen::MatrixXcd batch(static_cast<Eigen::Index>(xs.size()) * da, alg->dim);
    for (size_t xi = 0; xi < xs.size(); ++xi) {
      const int x = xs[xi];
      const int x_inv = g.inv[x];
      Eigen::MatrixXcd right_slices(da, g.order);  // f . x^{-1}
      Eigen::MatrixXcd left_slices(da, g.order);   // x . f
      for (int y = 0; y < g.order; ++y) {
        right_slices.col(y) = slices.col(g.mult(y, x_inv));
        left_slices.col(y) = slices.col(g.mult(x_inv, y));
      }
      if (info.coeff) {
        for (int a = 0; a < da; ++a) {
          Eigen::MatrixXcd diff = info.coeff->right_basis_apply(a, right_slices) -
                                  info.coeff->left_basis_apply(a, left_slices);
          batch.row(static_cast<Eigen::Index>(xi) * da + a) =
              detail::from_slices(diff).transpose();
        }
      } else {
        batch.row(static_cast<Eigen::Index>(xi)) =
            detail::from_slices(right_slices - left_slices).transpose();
      }
    }
    double rel = 0.0;
    int row = detail::first_violation(L, batch, &rel);
    if (row >= 0) {
      LieCheckResult out;
      out.ok = false;
      out.witness = LieWitness{{alg, f}, -1, xs[row / da], row % da,
                               {alg, batch.row(row).transpose()}, rel, "translation"};
      return out;
    }
  }
  return {};
}

/// Full discrete criterion over every group element.
inline LieCheckResult discrete_lie_criterion(const Subspace& L) {
  const auto info = group_block_info(L.parent());
  std::vector<int> xs(info.group->order);
  std::iota(xs.begin(), xs.end(), 0);
  return discrete_lie_criterion_over(L, xs);
}

/// Sufficiency conditions for a Lie ideal in C[G x H] (x) A with H abelian:
/// w . f in L for w in {e} x H, plus the translation criterion over G x {e}.
inline LieCheckResult h_abelian_sufficiency(const GroupPtr& g, const GroupPtr& h,
                                            const Subspace& L) {
  if (!h->is_abelian()) throw NotAbelian("H must be abelian");
  const auto& alg = L.parent();
  const auto info = group_block_info(alg);
  if (info.group->order != g->order * h->order)
    throw ParentMismatch("subspace does not live over G x H");
  // Left translations by {e} x H: these are the indices 0..|H|-1 under the
  // lexicographic (g, h) ordering.
  if (L.rank() > 0 && L.rank() < alg->dim) {
    for (int r = 0; r < L.rank(); ++r) {
      AlgebraElement f{alg, L.basis().row(r).transpose()};
      for (int w = 0; w < h->order; ++w) {
        AlgebraElement tf = left_translate(w, f);
        if (!L.contains(tf)) {
          LieCheckResult out;
          out.ok = false;
          out.witness =
              LieWitness{f, -1, w, -1, tf, L.residual(tf.coeffs.transpose()), "h_translation"};
          return out;
        }
      }
    }
  }
  std::vector<int> zs(g->order);
  for (int z = 0; z < g->order; ++z) zs[z] = z * h->order;
  return discrete_lie_criterion_over(L, zs);
}

struct LieIdealClassification {
  bool lie_ideal = false;
  std::vector<int> delta;
  Subspace central_part;
  std::optional<LieWitness> witness;
};

/// Theorem-2.4 classification data: delta_j = 1 iff omega_j L escapes
/// span{omega_j}; central_part is the projection of L onto span{omega_j}
/// along the trace-zero blocks. When L is a Lie ideal, both sandwich
/// containments are verified and a failure raises SandwichViolation.
inline LieIdealClassification classify_lie_ideal(const AlgebraPtr& cg,
                                                 const CharacterTable& t,
                                                 const Subspace& L) {
  require_same_algebra(cg, L.parent(), "classify_lie_ideal");
  const auto omegas = central_idempotents(cg, t);
  LieIdealClassification out;
  out.delta.assign(t.k, 0);

  for (int j = 0; j < t.k; ++j) {
    Eigen::MatrixXcd line(1, cg->dim);
    line.row(0) = omegas[j].coeffs.transpose();
    Subspace omega_line = subspace_span(cg, line);
    Eigen::MatrixXcd prods(L.rank(), cg->dim);
    for (int r = 0; r < L.rank(); ++r)
      prods.row(r) =
          cg->multiply_vec(omegas[j].coeffs, L.basis().row(r).transpose()).transpose();
    if (!omega_line.contains_all(prods)) out.delta[j] = 1;
  }

  Eigen::MatrixXcd central_rows(L.rank(), cg->dim);
  for (int r = 0; r < L.rank(); ++r) {
    AlgebraElement l{cg, L.basis().row(r).transpose()};
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(cg->dim);
    for (int j = 0; j < t.k; ++j)
      p += chi_tilde(t, j, l) / static_cast<double>(t.degrees[j]) * omegas[j].coeffs;
    central_rows.row(r) = p.transpose();
  }
  out.central_part = subspace_span(cg, central_rows);

  auto lie = is_lie_ideal(L);
  out.lie_ideal = lie.ok;
  out.witness = lie.witness;
  if (lie.ok) {
    Subspace lower = Subspace::zero(cg);
    for (int j = 0; j < t.k; ++j)
      if (out.delta[j]) lower = subspace_sum(lower, sl_block(cg, t, j));
    Subspace upper = Subspace::zero(cg);
    for (int j = 0; j < t.k; ++j)
      if (out.delta[j]) upper = subspace_sum(upper, minimal_ideal(omegas[j]));
    Eigen::MatrixXcd omega_rows(t.k, cg->dim);
    for (int j = 0; j < t.k; ++j) omega_rows.row(j) = omegas[j].coeffs.transpose();
    upper = subspace_sum(upper, subspace_span(cg, omega_rows));
    if (!L.contains_all(lower.basis()) || !upper.contains_all(L.basis()))
      throw SandwichViolation("Lie ideal fails a sandwich containment at tolerance");
  }
  return out;
}

/// Sum of chosen trace-zero blocks plus a central part; always a Lie ideal.
inline Subspace canonical_lie_ideal(const AlgebraPtr& cg, const CharacterTable& t,
                                    const std::vector<int>& blocks, const Subspace& central) {
  require_same_algebra(cg, central.parent(), "canonical_lie_ideal");
  const auto omegas = central_idempotents(cg, t);
  Eigen::MatrixXcd omega_rows(t.k, cg->dim);
  for (int j = 0; j < t.k; ++j) omega_rows.row(j) = omegas[j].coeffs.transpose();
  Subspace omega_span = subspace_span(cg, omega_rows);
  if (!omega_span.contains_all(central.basis()))
    throw CentralPartNotCentral("central part escapes span{omega_j}");
  Subspace out = central;
  for (int j : blocks) {
    if (j < 0 || j >= t.k) throw InvalidInput("block index out of range");
    out = subspace_sum(out, sl_block(cg, t, j));
  }
  return out;
}

/// F~ = { f : f(x) in F for all x }, spanned by the vectors (x, w).
inline Subspace lift_subspace(const AlgebraPtr& tensor, const Subspace& f) {
  const auto info = group_block_info(tensor);
  if (!info.coeff) throw InvalidInput("lift_subspace expects a tensor algebra");
  require_same_algebra(info.coeff, f.parent(), "lift_subspace");
  const int n = info.group->order;
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * f.rank(),
                                                 tensor->dim);
  for (int x = 0; x < n; ++x)
    for (int r = 0; r < f.rank(); ++r)
      rows.row(static_cast<Eigen::Index>(x) * f.rank() + r)
          .segment(static_cast<Eigen::Index>(x) * info.block, info.block) = f.basis().row(r);
  return subspace_span(tensor, rows);
}

/// span{ sum_{x in V} (x, a) } for a central a and an invariant V given as a
/// union of conjugacy classes (all classes when empty); a one-dimensional Lie
/// ideal that is not a lift when |G| > 1 and V = G.
inline Subspace span_of_central_indicator(const AlgebraPtr& tensor, const AlgebraElement& a,
                                          const std::vector<int>& class_indices = {}) {
  const auto info = group_block_info(tensor);
  if (!info.coeff) throw InvalidInput("span_of_central_indicator expects a tensor algebra");
  require_same_algebra(info.coeff, a.parent, "span_of_central_indicator");
  if (a.norm_l2() == 0.0) throw ZeroElement("central element is zero");
  if (!algebra_center(info.coeff).contains(a))
    throw NotCentral("element is not central in the coefficient algebra");
  const auto& g = *info.group;
  std::vector<int> classes(class_indices);
  if (classes.empty()) {
    classes.resize(g.classes.size());
    std::iota(classes.begin(), classes.end(), 0);
  }
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(tensor->dim);
  for (int c : classes) {
    if (c < 0 || c >= static_cast<int>(g.classes.size()))
      throw InvalidInput("class index out of range");
    for (int x : g.classes[c])
      f.segment(static_cast<Eigen::Index>(x) * info.block, info.block) = a.coeffs;
  }
  Eigen::MatrixXcd row(1, tensor->dim);
  row.row(0) = f.transpose();
  return subspace_span(tensor, row);
}

}  // namespace gral
