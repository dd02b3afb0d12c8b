#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gral/group.hpp"
#include "gral/types.hpp"

namespace gral {

class StructureAlgebra;
using AlgebraPtr = std::shared_ptr<const StructureAlgebra>;

inline constexpr int kMaxAlgebraDim = 4096;

struct Provenance {
  enum class Kind { group_algebra, matrix_units, direct_sum, trivial, tensor, custom };
  Kind kind = Kind::custom;
  GroupPtr group;     // group_algebra, tensor
  AlgebraPtr coeff;   // tensor
  std::vector<AlgebraPtr> parts;  // direct_sum
  int matrix_n = 0;
};

/// A finite-dimensional associative algebra given by sparse structure
/// constants b_i b_j = sum_k c_{ijk} b_k, validated for associativity at
/// construction (exhaustive for dim <= 64, 10k sampled triples above).
class StructureAlgebra {
 public:
  struct Term {
    int k;
    cdouble c;
  };

  int dim = 0;
  std::vector<std::string> basis_labels;
  Provenance prov;
  std::optional<Eigen::VectorXcd> unit;
  std::uint64_t digest = 0;

  const Term* begin(int i, int j) const { return terms_.data() + offsets_[pair(i, j)]; }
  const Term* end(int i, int j) const { return terms_.data() + offsets_[pair(i, j) + 1]; }

  bool is_unital() const { return unit.has_value(); }

  /// Applies f over every stored structure entry (i, j, k, c).
  template <typename F>
  void for_each_term(F&& f) const {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (const Term* t = begin(i, j); t != end(i, j); ++t) f(i, j, t->k, t->c);
  }

  Eigen::VectorXcd multiply_vec(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      if (u[i] == cdouble(0)) continue;
      for (int j = 0; j < dim; ++j) {
        if (v[j] == cdouble(0)) continue;
        const cdouble uv = u[i] * v[j];
        for (const Term* t = begin(i, j); t != end(i, j); ++t) out[t->k] += uv * t->c;
      }
    }
    return out;
  }

  /// Columns of the result are b_j . n for each column n of N.
  Eigen::MatrixXcd left_basis_apply(int j, const Eigen::MatrixXcd& N) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, N.cols());
    for (int i = 0; i < dim; ++i)
      for (const Term* t = begin(j, i); t != end(j, i); ++t)
        out.row(t->k) += t->c * N.row(i);
    return out;
  }

  /// Columns of the result are n . b_j for each column n of N.
  Eigen::MatrixXcd right_basis_apply(int j, const Eigen::MatrixXcd& N) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, N.cols());
    for (int i = 0; i < dim; ++i)
      for (const Term* t = begin(i, j); t != end(i, j); ++t)
        out.row(t->k) += t->c * N.row(i);
    return out;
  }

  static AlgebraPtr create(int dim, std::vector<std::pair<std::pair<int, int>, Term>> triplets,
                           std::optional<Eigen::VectorXcd> unit,
                           std::vector<std::string> labels, Provenance prov) {
    if (dim <= 0) throw InvalidInput("algebra dim must be positive");
    auto alg = std::make_shared<StructureAlgebra>();
    alg->dim = dim;
    alg->prov = std::move(prov);
    alg->basis_labels = std::move(labels);
    if (alg->basis_labels.empty()) {
      alg->basis_labels.resize(dim);
      for (int i = 0; i < dim; ++i) alg->basis_labels[i] = "b" + std::to_string(i);
    }
    for (const auto& [ij, term] : triplets)
      if (ij.first < 0 || ij.first >= dim || ij.second < 0 || ij.second >= dim ||
          term.k < 0 || term.k >= dim)
        throw InvalidInput("structure index out of range");
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second.k < b.second.k;
              });
    alg->offsets_.assign(static_cast<size_t>(dim) * dim + 1, 0);
    alg->terms_.reserve(triplets.size());
    size_t cur = 0;
    for (size_t p = 0; p < static_cast<size_t>(dim) * dim; ++p) {
      alg->offsets_[p] = alg->terms_.size();
      const int pi = static_cast<int>(p / dim), pj = static_cast<int>(p % dim);
      while (cur < triplets.size() && triplets[cur].first.first == pi &&
             triplets[cur].first.second == pj) {
        const Term& term = triplets[cur].second;
        if (alg->terms_.size() > alg->offsets_[p] && alg->terms_.back().k == term.k)
          alg->terms_.back().c += term.c;  // merge duplicate (i, j, k)
        else if (std::abs(term.c) != 0.0)
          alg->terms_.push_back(term);
        ++cur;
      }
    }
    alg->offsets_[static_cast<size_t>(dim) * dim] = alg->terms_.size();
    if (unit) {
      if (unit->size() != dim) throw InvalidInput("unit length mismatch");
      alg->unit = std::move(unit);
    }
    alg->compute_digest();
    alg->validate();
    return alg;
  }

 private:
  size_t pair(int i, int j) const { return static_cast<size_t>(i) * dim + j; }

  void compute_digest() {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    auto quant = [](double x) {
      return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(x * 1e12)));
    };
    mix(static_cast<std::uint64_t>(dim));
    for_each_term([&](int i, int j, int k, cdouble c) {
      mix(static_cast<std::uint64_t>(i));
      mix(static_cast<std::uint64_t>(j));
      mix(static_cast<std::uint64_t>(k));
      mix(quant(c.real()));
      mix(quant(c.imag()));
    });
    mix(unit ? 1 : 0);
    if (unit)
      for (int i = 0; i < dim; ++i) {
        mix(quant((*unit)[i].real()));
        mix(quant((*unit)[i].imag()));
      }
    digest = h;
  }

  Eigen::VectorXcd basis_vec(int i) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[i] = 1.0;
    return v;
  }

  void validate() const {
    auto check_triple = [this](int a, int b, int c) {
      Eigen::VectorXcd ab = multiply_vec(basis_vec(a), basis_vec(b));
      Eigen::VectorXcd bc = multiply_vec(basis_vec(b), basis_vec(c));
      Eigen::VectorXcd lhs = multiply_vec(ab, basis_vec(c));
      Eigen::VectorXcd rhs = multiply_vec(basis_vec(a), bc);
      if ((lhs - rhs).cwiseAbs().maxCoeff() > eps_assoc())
        throw NotAssociative("basis triple (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");
    };
    if (dim <= 64) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          for (int c = 0; c < dim; ++c) check_triple(a, b, c);
    } else {
      std::mt19937 rng(0);
      std::uniform_int_distribution<int> pick(0, dim - 1);
      for (int t = 0; t < 10000; ++t) check_triple(pick(rng), pick(rng), pick(rng));
    }
    if (unit) {
      for (int i = 0; i < dim; ++i) {
        Eigen::VectorXcd b = basis_vec(i);
        if ((multiply_vec(*unit, b) - b).cwiseAbs().maxCoeff() > eps_assoc() ||
            (multiply_vec(b, *unit) - b).cwiseAbs().maxCoeff() > eps_assoc())
          throw InvalidInput("claimed unit fails on basis element " + std::to_string(i));
      }
    }
  }

  std::vector<size_t> offsets_;
  std::vector<Term> terms_;
};

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && a->digest == b->digest);
}

inline void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b,
                                 const char* where) {
  if (!same_algebra(a, b)) throw ParentMismatch(where);
}

/// A coefficient vector over its parent algebra's basis.
struct AlgebraElement {
  AlgebraPtr parent;
  Eigen::VectorXcd coeffs;

  AlgebraElement() = default;
  AlgebraElement(AlgebraPtr p, Eigen::VectorXcd c) : parent(std::move(p)), coeffs(std::move(c)) {
    if (coeffs.size() != parent->dim) throw InvalidInput("coefficient length mismatch");
  }

  double norm_l1() const { return coeffs.cwiseAbs().sum(); }
  double norm_l2() const { return coeffs.norm(); }
};

inline AlgebraElement zero_element(const AlgebraPtr& a) {
  return {a, Eigen::VectorXcd::Zero(a->dim)};
}

inline AlgebraElement basis_element(const AlgebraPtr& a, int i) {
  if (i < 0 || i >= a->dim) throw InvalidInput("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(a->dim);
  v[i] = 1.0;
  return {a, std::move(v)};
}

inline AlgebraElement unit_element(const AlgebraPtr& a) {
  if (!a->is_unital()) throw NonUnital("algebra has no unit");
  return {a, *a->unit};
}

inline AlgebraElement operator+(const AlgebraElement& u, const AlgebraElement& v) {
  require_same_algebra(u.parent, v.parent, "operator+");
  return {u.parent, u.coeffs + v.coeffs};
}

inline AlgebraElement operator-(const AlgebraElement& u, const AlgebraElement& v) {
  require_same_algebra(u.parent, v.parent, "operator-");
  return {u.parent, u.coeffs - v.coeffs};
}

inline AlgebraElement operator*(cdouble s, const AlgebraElement& u) {
  return {u.parent, s * u.coeffs};
}

inline AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v) {
  require_same_algebra(u.parent, v.parent, "multiply");
  return {u.parent, u.parent->multiply_vec(u.coeffs, v.coeffs)};
}

inline AlgebraElement commutator(const AlgebraElement& u, const AlgebraElement& v) {
  require_same_algebra(u.parent, v.parent, "commutator");
  return {u.parent, u.parent->multiply_vec(u.coeffs, v.coeffs) -
                        u.parent->multiply_vec(v.coeffs, u.coeffs)};
}

// ---------------------------------------------------------------------------
// Factories

/// Group algebra C[G]: basis indexed by group elements, b_x b_y = b_{xy};
/// the product agrees with convolution (f*g)(x) = sum_s f(xs) g(s^{-1})
/// under counting measure.
inline AlgebraPtr group_algebra(const GroupPtr& g) {
  std::vector<std::pair<std::pair<int, int>, StructureAlgebra::Term>> trip;
  trip.reserve(static_cast<size_t>(g->order) * g->order);
  for (int x = 0; x < g->order; ++x)
    for (int y = 0; y < g->order; ++y)
      trip.push_back({{x, y}, {g->mult(x, y), 1.0}});
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(g->order);
  unit[GroupTable::identity] = 1.0;
  Provenance prov;
  prov.kind = Provenance::Kind::group_algebra;
  prov.group = g;
  return StructureAlgebra::create(g->order, std::move(trip), unit, g->labels, std::move(prov));
}

/// Full matrix algebra M_n on the matrix-unit basis E_pq (row-major),
/// E_pq E_rs = delta_qr E_ps.
inline AlgebraPtr matrix_algebra(int n) {
  if (n <= 0) throw InvalidInput("matrix size must be positive");
  if (static_cast<long long>(n) * n > kMaxAlgebraDim)
    throw DimBoundExceeded("matrix algebra " + std::to_string(n));
  const int d = n * n;
  auto idx = [n](int p, int q) { return p * n + q; };
  std::vector<std::pair<std::pair<int, int>, StructureAlgebra::Term>> trip;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        trip.push_back({{idx(p, q), idx(q, r)}, {idx(p, r), 1.0}});
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(d);
  for (int p = 0; p < n; ++p) unit[idx(p, p)] = 1.0;
  std::vector<std::string> labels(d);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      labels[idx(p, q)] = "E" + std::to_string(p) + "_" + std::to_string(q);
  Provenance prov;
  prov.kind = Provenance::Kind::matrix_units;
  prov.matrix_n = n;
  return StructureAlgebra::create(d, std::move(trip), unit, std::move(labels), std::move(prov));
}

/// d-dimensional algebra with ab = 0 for all a, b; has no unit.
inline AlgebraPtr trivial_algebra(int d) {
  if (d <= 0) throw InvalidInput("trivial algebra dim must be positive");
  std::vector<std::string> labels(d);
  for (int i = 0; i < d; ++i) labels[i] = "t" + std::to_string(i);
  Provenance prov;
  prov.kind = Provenance::Kind::trivial;
  return StructureAlgebra::create(d, {}, std::nullopt, std::move(labels), std::move(prov));
}

/// Block-diagonal direct sum; unital iff every part is.
inline AlgebraPtr direct_sum(const std::vector<AlgebraPtr>& parts) {
  if (parts.empty()) throw InvalidInput("direct_sum of no parts");
  if (parts.size() == 1) return parts[0];
  int dim = 0;
  bool unital = true;
  for (const auto& p : parts) {
    dim += p->dim;
    unital = unital && p->is_unital();
  }
  std::vector<std::pair<std::pair<int, int>, StructureAlgebra::Term>> trip;
  std::vector<std::string> labels;
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(dim);
  int base = 0;
  for (size_t s = 0; s < parts.size(); ++s) {
    const auto& p = parts[s];
    p->for_each_term([&](int i, int j, int k, cdouble c) {
      trip.push_back({{base + i, base + j}, {base + k, c}});
    });
    for (int i = 0; i < p->dim; ++i)
      labels.push_back("s" + std::to_string(s) + ":" + p->basis_labels[i]);
    if (unital) unit.segment(base, p->dim) = *p->unit;
    base += p->dim;
  }
  Provenance prov;
  prov.kind = Provenance::Kind::direct_sum;
  prov.parts = parts;
  return StructureAlgebra::create(dim, std::move(trip),
                                  unital ? std::optional<Eigen::VectorXcd>(unit) : std::nullopt,
                                  std::move(labels), std::move(prov));
}

/// C[G] (x) A with basis (x, i) ordered group-major and product
/// (x, i)(y, j) = (xy, b_i b_j); the finite realization of L1(G, A).
inline AlgebraPtr generalized_group_algebra(const GroupPtr& g, const AlgebraPtr& a) {
  long long dim = static_cast<long long>(g->order) * a->dim;
  if (dim > kMaxAlgebraDim)
    throw DimBoundExceeded("tensor dim " + std::to_string(dim));
  const int da = a->dim;
  auto idx = [da](int x, int i) { return x * da + i; };
  std::vector<std::pair<std::pair<int, int>, StructureAlgebra::Term>> trip;
  for (int x = 0; x < g->order; ++x)
    for (int y = 0; y < g->order; ++y) {
      const int xy = g->mult(x, y);
      a->for_each_term([&](int i, int j, int k, cdouble c) {
        trip.push_back({{idx(x, i), idx(y, j)}, {idx(xy, k), c}});
      });
    }
  std::optional<Eigen::VectorXcd> unit;
  if (a->is_unital()) {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(dim);
    u.segment(idx(GroupTable::identity, 0), da) = *a->unit;
    unit = std::move(u);
  }
  std::vector<std::string> labels(static_cast<size_t>(dim));
  for (int x = 0; x < g->order; ++x)
    for (int i = 0; i < da; ++i)
      labels[idx(x, i)] = g->labels[x] + "*" + a->basis_labels[i];
  Provenance prov;
  prov.kind = Provenance::Kind::tensor;
  prov.group = g;
  prov.coeff = a;
  return StructureAlgebra::create(static_cast<int>(dim), std::move(trip), std::move(unit),
                                  std::move(labels), std::move(prov));
}

/// Custom algebra from explicit structure triplets (JSON input path).
inline AlgebraPtr make_custom_algebra(
    int dim, const std::vector<std::tuple<int, int, int, cdouble>>& entries,
    std::optional<Eigen::VectorXcd> unit = std::nullopt,
    std::vector<std::string> labels = {}) {
  if (dim > kMaxAlgebraDim) throw DimBoundExceeded("custom dim " + std::to_string(dim));
  std::vector<std::pair<std::pair<int, int>, StructureAlgebra::Term>> trip;
  trip.reserve(entries.size());
  for (const auto& [i, j, k, c] : entries) trip.push_back({{i, j}, {k, c}});
  Provenance prov;
  prov.kind = Provenance::Kind::custom;
  return StructureAlgebra::create(dim, std::move(trip), std::move(unit), std::move(labels),
                                  std::move(prov));
}

/// Group and block size behind a group-based algebra (C[G] or C[G] (x) A).
struct GroupBlockInfo {
  GroupPtr group;
  AlgebraPtr coeff;  // null for plain C[G]
  int block = 1;
};

inline GroupBlockInfo group_block_info(const AlgebraPtr& a) {
  GroupBlockInfo info;
  if (a->prov.kind == Provenance::Kind::group_algebra) {
    info.group = a->prov.group;
    info.block = 1;
  } else if (a->prov.kind == Provenance::Kind::tensor) {
    info.group = a->prov.group;
    info.coeff = a->prov.coeff;
    info.block = a->prov.coeff->dim;
  } else {
    throw InvalidInput("algebra has no group structure");
  }
  return info;
}

}  // namespace gral
