#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gral/algebra.hpp"
#include "gral/subspace.hpp"
#include "gral/types.hpp"

namespace gral {

/// Irreducible characters evaluated on conjugacy classes. Row 0 is the
/// trivial character; remaining rows are sorted by degree, then
/// lexicographically on rounded values.
struct CharacterTable {
  int k = 0;
  Eigen::MatrixXcd values;  // values(j, i) = chi_j on class i
  std::vector<int> degrees;
  std::vector<int> class_sizes;
  std::vector<int> class_reps;
};

namespace detail {

/// Class multiplication coefficient matrices: (A_i)_{j,m} counts pairs
/// (u, v) in C_i x C_j with u v equal to the fixed representative of C_m.
inline std::vector<Eigen::MatrixXd> class_matrices(const GroupTable& g) {
  const int k = static_cast<int>(g.classes.size());
  std::vector<Eigen::MatrixXd> mats(k, Eigen::MatrixXd::Zero(k, k));
  for (int m = 0; m < k; ++m) {
    const int rep = g.classes[m][0];
    for (int u = 0; u < g.order; ++u) {
      const int v = g.mult(g.inv[u], rep);
      mats[g.class_of[u]](g.class_of[v], m) += 1.0;
    }
  }
  return mats;
}

/// Recursively splits the column span of `block` (an invariant subspace of
/// all class matrices) into one-dimensional common eigenspaces using random
/// combinations.
inline void split_block(const std::vector<Eigen::MatrixXd>& mats,
                        const Eigen::MatrixXcd& block, std::mt19937_64& rng, int depth,
                        std::vector<Eigen::VectorXcd>& out) {
  const int k = static_cast<int>(mats.size());
  if (block.cols() == 1) {
    out.push_back(block.col(0));
    return;
  }
  if (depth > 20) throw DegenerateSpectrum("eigenspace refinement did not converge");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) comb += unif(rng) * mats[i];
  // Restriction of the combination to the invariant subspace.
  Eigen::MatrixXcd proj =
      (block.adjoint() * block).ldlt().solve(block.adjoint() * (comb * block));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(proj);
  std::vector<int> taken(proj.cols(), 0);
  for (Eigen::Index a = 0; a < proj.cols(); ++a) {
    if (taken[a]) continue;
    std::vector<Eigen::Index> cluster{a};
    taken[a] = 1;
    for (Eigen::Index b = a + 1; b < proj.cols(); ++b)
      if (!taken[b] && std::abs(es.eigenvalues()[a] - es.eigenvalues()[b]) <= 1e-6) {
        cluster.push_back(b);
        taken[b] = 1;
      }
    Eigen::MatrixXcd sub(block.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (size_t c = 0; c < cluster.size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = block * es.eigenvectors().col(cluster[c]);
    if (static_cast<Eigen::Index>(cluster.size()) == proj.cols() && proj.cols() > 1) {
      split_block(mats, sub, rng, depth + 1, out);  // no progress, redraw deeper
    } else if (cluster.size() == 1) {
      out.push_back(sub.col(0));
    } else {
      split_block(mats, sub, rng, depth + 1, out);
    }
  }
}

}  // namespace detail

/// Burnside class-sum eigenvector method. The common eigenvectors of the
/// class matrices carry the central character values; degrees are recovered
/// from the second orthogonality relation and rounded to integers.
inline CharacterTable character_table(const GroupPtr& g, std::uint64_t seed = 0) {
  const int k = static_cast<int>(g->classes.size());
  const auto mats = detail::class_matrices(*g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  std::vector<Eigen::VectorXcd> eigvecs;
  for (int attempt = 0; attempt < 20 && eigvecs.empty(); ++attempt) {
    Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) comb += unif(rng) * mats[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comb.cast<cdouble>());
    bool simple = true;
    for (int a = 0; a < k && simple; ++a)
      for (int b = a + 1; b < k && simple; ++b)
        if (std::abs(es.eigenvalues()[a] - es.eigenvalues()[b]) <= 1e-6) simple = false;
    if (simple)
      for (int a = 0; a < k; ++a) eigvecs.push_back(es.eigenvectors().col(a));
  }
  if (eigvecs.empty()) {
    // Redraws failed; split degenerate eigenspaces recursively.
    detail::split_block(mats, Eigen::MatrixXcd::Identity(k, k), rng, 0, eigvecs);
    if (static_cast<int>(eigvecs.size()) != k)
      throw DegenerateSpectrum("expected " + std::to_string(k) + " common eigenvectors, got " +
                               std::to_string(eigvecs.size()));
  }

  std::vector<int> sizes(k), reps(k);
  for (int i = 0; i < k; ++i) {
    sizes[i] = static_cast<int>(g->classes[i].size());
    reps[i] = g->classes[i][0];
  }

  Eigen::MatrixXcd values(k, k);
  std::vector<int> degrees(k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXcd w = eigvecs[j];
    if (std::abs(w[0]) < 1e-12)
      throw OrthogonalityFailure("central character vanishes on the identity class");
    w /= w[0];  // omega_j on the identity class is 1
    double s = 0.0;
    for (int m = 0; m < k; ++m) s += std::norm(w[m]) / sizes[m];
    const double n = std::sqrt(g->order / s);
    const int ni = static_cast<int>(std::llround(n));
    if (std::abs(n - ni) > 1e-6 || ni <= 0)
      throw OrthogonalityFailure("non-integral degree " + std::to_string(n));
    degrees[j] = ni;
    for (int m = 0; m < k; ++m) values(j, m) = static_cast<double>(ni) * w[m] / static_cast<double>(sizes[m]);
  }

  // Order rows: trivial character first, then by degree, then lexicographic
  // on rounded values.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto rounded = [&](int j) {
    std::vector<long long> key;
    key.reserve(2 * k);
    for (int m = 0; m < k; ++m) {
      key.push_back(std::llround(values(j, m).real() * 1e6));
      key.push_back(std::llround(values(j, m).imag() * 1e6));
    }
    return key;
  };
  auto is_trivial = [&](int j) {
    for (int m = 0; m < k; ++m)
      if (std::abs(values(j, m) - cdouble(1.0)) > 1e-8) return false;
    return true;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const bool ta = is_trivial(a), tb = is_trivial(b);
    if (ta != tb) return ta;
    if (degrees[a] != degrees[b]) return degrees[a] < degrees[b];
    return rounded(a) < rounded(b);
  });

  CharacterTable t;
  t.k = k;
  t.values.resize(k, k);
  t.degrees.resize(k);
  t.class_sizes = sizes;
  t.class_reps = reps;
  for (int j = 0; j < k; ++j) {
    t.values.row(j) = values.row(order[j]);
    t.degrees[j] = degrees[order[j]];
  }

  // Invariant checks; a failure signals numerical breakdown.
  long long deg2 = 0;
  for (int j = 0; j < k; ++j) deg2 += static_cast<long long>(t.degrees[j]) * t.degrees[j];
  if (deg2 != g->order)
    throw OrthogonalityFailure("sum of squared degrees " + std::to_string(deg2) +
                               " != group order");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      cdouble row_ip = 0.0;
      for (int m = 0; m < k; ++m)
        row_ip += static_cast<double>(sizes[m]) * t.values(a, m) * std::conj(t.values(b, m));
      row_ip /= static_cast<double>(g->order);
      if (std::abs(row_ip - (a == b ? cdouble(1.0) : cdouble(0.0))) > 1e-8)
        throw OrthogonalityFailure("row orthogonality failed at (" + std::to_string(a) +
                                   ", " + std::to_string(b) + ")");
      cdouble col_ip = 0.0;
      for (int j = 0; j < k; ++j) col_ip += t.values(j, a) * std::conj(t.values(j, b));
      const cdouble expect = a == b ? cdouble(static_cast<double>(g->order) / sizes[a]) : cdouble(0.0);
      if (std::abs(col_ip - expect) > 1e-8)
        throw OrthogonalityFailure("column orthogonality failed at (" + std::to_string(a) +
                                   ", " + std::to_string(b) + ")");
    }
  return t;
}

/// Minimal central projections omega_j = (n_j/|G|) sum_x chi_j(x^{-1}) x,
/// ordered like the table rows.
inline std::vector<AlgebraElement> central_idempotents(const AlgebraPtr& cg,
                                                       const CharacterTable& t) {
  const auto& g = *group_block_info(cg).group;
  if (cg->prov.kind != Provenance::Kind::group_algebra)
    throw InvalidInput("central_idempotents expects a group algebra");
  std::vector<AlgebraElement> out;
  out.reserve(t.k);
  for (int j = 0; j < t.k; ++j) {
    Eigen::VectorXcd v(g.order);
    for (int x = 0; x < g.order; ++x)
      v[x] = static_cast<double>(t.degrees[j]) / g.order * t.values(j, g.class_of[g.inv[x]]);
    out.push_back({cg, std::move(v)});
  }
  return out;
}

/// Linear extension of chi_j to C[G].
inline cdouble chi_tilde(const CharacterTable& t, int j, const AlgebraElement& z) {
  const auto& g = *group_block_info(z.parent).group;
  if (z.parent->prov.kind != Provenance::Kind::group_algebra)
    throw InvalidInput("chi_tilde expects a group algebra element");
  cdouble s = 0.0;
  for (int x = 0; x < g.order; ++x) s += z.coeffs[x] * t.values(j, g.class_of[x]);
  return s;
}

/// Two-sided ideal generated by a central idempotent: span{omega_j . x}.
inline Subspace minimal_ideal(const AlgebraElement& omega) {
  const auto& cg = omega.parent;
  Eigen::MatrixXcd rows(cg->dim, cg->dim);
  for (int x = 0; x < cg->dim; ++x)
    rows.row(x) = cg->multiply_vec(omega.coeffs, basis_element(cg, x).coeffs).transpose();
  return subspace_span(cg, rows);
}

/// Trace-zero block ker(chi~_j) omega_j of dimension n_j^2 - 1.
inline Subspace sl_block(const AlgebraPtr& cg, const CharacterTable& t, int j) {
  const auto& g = *group_block_info(cg).group;
  if (cg->prov.kind != Provenance::Kind::group_algebra)
    throw InvalidInput("sl_block expects a group algebra");
  Eigen::MatrixXcd functional(1, g.order);
  for (int x = 0; x < g.order; ++x) functional(0, x) = t.values(j, g.class_of[x]);
  Eigen::MatrixXcd kern = null_space(functional);  // dim x (dim-1)
  const auto omegas = central_idempotents(cg, t);
  Eigen::MatrixXcd rows(kern.cols(), g.order);
  for (Eigen::Index c = 0; c < kern.cols(); ++c)
    rows.row(c) = cg->multiply_vec(kern.col(c), omegas[j].coeffs).transpose();
  return subspace_span(cg, rows);
}

}  // namespace gral
