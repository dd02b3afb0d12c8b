#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "gral/types.hpp"

namespace gral {

/// Largest group order accepted by the constructors (S7 fits, S8 does not).
inline constexpr int kDefaultMaxOrder = 5040;

/// A finite group as a validated Cayley table. Element 0 is always the
/// identity, `classes` is the conjugacy partition ordered by least member,
/// and `modular_constant` houses the modular function (identically 1 on a
/// finite group).
struct GroupTable {
  int order = 0;
  std::vector<int> mul;  // order x order, row-major
  std::vector<int> inv;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;
  double modular_constant = 1.0;

  static constexpr int identity = 0;

  int mult(int a, int b) const { return mul[static_cast<size_t>(a) * order + b]; }

  bool is_abelian() const {
    for (int a = 0; a < order; ++a)
      for (int b = a + 1; b < order; ++b)
        if (mult(a, b) != mult(b, a)) return false;
    return true;
  }
};

using GroupPtr = std::shared_ptr<const GroupTable>;

namespace detail {

inline std::vector<std::vector<int>> conjugacy_partition(const GroupTable& g) {
  std::vector<int> cls(g.order, -1);
  std::vector<std::vector<int>> classes;
  for (int x = 0; x < g.order; ++x) {
    if (cls[x] >= 0) continue;
    int id = static_cast<int>(classes.size());
    std::vector<int> orbit;
    for (int t = 0; t < g.order; ++t) {
      int y = g.mult(g.mult(t, x), g.inv[t]);
      if (cls[y] < 0) {
        cls[y] = id;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    classes.push_back(std::move(orbit));
  }
  // Scanning x in index order already yields classes sorted by least member,
  // with the identity's class first.
  return classes;
}

inline void validate_and_finish(GroupTable& g) {
  const int n = g.order;
  // Latin square: every row and column is a permutation.
  std::vector<char> seen(n);
  for (int r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int c = 0; c < n; ++c) {
      int v = g.mult(r, c);
      if (seen[v])
        throw NotLatinSquare("row " + std::to_string(r) + " repeats entry " +
                             std::to_string(v));
      seen[v] = 1;
    }
  }
  for (int c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int r = 0; r < n; ++r) {
      int v = g.mult(r, c);
      if (seen[v])
        throw NotLatinSquare("column " + std::to_string(c) + " repeats entry " +
                             std::to_string(v));
      seen[v] = 1;
    }
  }
  // Identity must sit at index 0 (callers relabel before validation).
  for (int x = 0; x < n; ++x)
    if (g.mult(0, x) != x || g.mult(x, 0) != x)
      throw NoIdentity("element 0 does not act as identity on " + std::to_string(x));
  // Inverses.
  g.inv.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (g.mult(x, y) == 0 && g.mult(y, x) == 0) {
        g.inv[x] = y;
        break;
      }
    }
    if (g.inv[x] < 0) throw NoInverse("element " + std::to_string(x) + " has no inverse");
  }
  // Associativity: exhaustive up to order 256, sampled above.
  auto check_triple = [&](int a, int b, int c) {
    if (g.mult(g.mult(a, b), c) != g.mult(a, g.mult(b, c)))
      throw NotAssociative("triple (" + std::to_string(a) + ", " + std::to_string(b) +
                           ", " + std::to_string(c) + ")");
  };
  if (n <= 256) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    std::mt19937 rng(0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 10000; ++t) check_triple(pick(rng), pick(rng), pick(rng));
  }
  g.classes = conjugacy_partition(g);
  g.class_of.assign(n, -1);
  for (size_t i = 0; i < g.classes.size(); ++i)
    for (int x : g.classes[i]) g.class_of[x] = static_cast<int>(i);
  if (g.labels.empty()) {
    g.labels.resize(n);
    for (int x = 0; x < n; ++x) g.labels[x] = "g" + std::to_string(x);
  }
}

}  // namespace detail

/// Builds a group from a raw Cayley table. The identity is located and
/// relabeled to index 0 before validation.
inline GroupPtr from_cayley_table(const std::vector<std::vector<int>>& table,
                                  std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InvalidInput("empty table");
  if (n > kDefaultMaxOrder)
    throw OrderBoundExceeded("order " + std::to_string(n) + " exceeds bound " +
                             std::to_string(kDefaultMaxOrder));
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw InvalidInput("table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw InvalidInput("entry out of range: " + std::to_string(v));
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw InvalidInput("labels length does not match order");

  int e = -1;
  for (int x = 0; x < n && e < 0; ++x) {
    bool ok = true;
    for (int y = 0; y < n; ++y)
      if (table[x][y] != y || table[y][x] != y) {
        ok = false;
        break;
      }
    if (ok) e = x;
  }
  if (e < 0) throw NoIdentity("no two-sided identity in table");

  // Relabel by the transposition swapping 0 and e.
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::swap(p[0], p[e]);

  auto g = std::make_shared<GroupTable>();
  g->order = n;
  g->mul.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g->mul[static_cast<size_t>(a) * n + b] = p[table[p[a]][p[b]]];
  if (!labels.empty()) {
    g->labels.resize(n);
    for (int x = 0; x < n; ++x) g->labels[x] = labels[p[x]];
  }
  detail::validate_and_finish(*g);
  return g;
}

namespace detail {

inline std::string cycle_label(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<char> done(n, 0);
  std::string out;
  for (int s = 0; s < n; ++s) {
    if (done[s] || perm[s] == s) continue;
    out += "(";
    int x = s;
    bool first = true;
    while (!done[x]) {
      done[x] = 1;
      if (!first) out += " ";
      out += std::to_string(x);
      first = false;
      x = perm[x];
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

}  // namespace detail

/// Enumerates the subgroup of Sym(degree) generated by `gens` (breadth-first
/// over right products) and returns its Cayley table. Composition convention:
/// (p.q)(x) = p(q(x)).
inline GroupPtr from_permutation_generators(int degree,
                                            const std::vector<std::vector<int>>& gens,
                                            int max_order = kDefaultMaxOrder) {
  if (degree <= 0) throw InvalidInput("degree must be positive");
  for (const auto& p : gens) {
    if (static_cast<int>(p.size()) != degree)
      throw InvalidInput("generator degree mismatch");
    std::vector<char> hit(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || hit[v]) throw InvalidInput("generator is not a bijection");
      hit[v] = 1;
    }
  }
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> elems;
  std::queue<int> todo;
  index[id] = 0;
  elems.push_back(id);
  todo.push(0);
  auto compose = [degree](const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(degree);
    for (int x = 0; x < degree; ++x) r[x] = p[q[x]];
    return r;
  };
  while (!todo.empty()) {
    int cur = todo.front();
    todo.pop();
    for (const auto& gen : gens) {
      auto prod = compose(elems[cur], gen);
      auto [it, inserted] = index.emplace(prod, static_cast<int>(elems.size()));
      if (inserted) {
        if (static_cast<int>(elems.size()) >= max_order)
          throw OrderBoundExceeded("closure exceeds max order " + std::to_string(max_order));
        elems.push_back(prod);
        todo.push(static_cast<int>(elems.size()) - 1);
      }
    }
  }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = detail::cycle_label(elems[a]);
    for (int b = 0; b < n; ++b) table[a][b] = index.at(compose(elems[a], elems[b]));
  }
  return from_cayley_table(table, labels);
}

inline GroupPtr cyclic_group(int n) {
  if (n <= 0) throw InvalidInput("cyclic order must be positive");
  if (n > kDefaultMaxOrder) throw OrderBoundExceeded("cyclic " + std::to_string(n));
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = a == 0 ? "e" : (a == 1 ? "g" : "g^" + std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return from_cayley_table(table, labels);
}

/// Dihedral group of the given (even) order 2n; elements ordered
/// e, r, ..., r^{n-1}, s, rs, ..., r^{n-1}s.
inline GroupPtr dihedral_group(int order) {
  if (order <= 0 || order % 2 != 0) throw InvalidInput("dihedral order must be even");
  if (order > kDefaultMaxOrder) throw OrderBoundExceeded("dihedral " + std::to_string(order));
  const int n = order / 2;
  auto idx = [n](int rot, bool refl) { return rot + (refl ? n : 0); };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    const int ra = a % n;
    const bool fa = a >= n;
    for (int b = 0; b < order; ++b) {
      const int rb = b % n;
      const bool fb = b >= n;
      // r^a s . r^b = r^{a-b} s, and reflections square to rotations.
      int rot = fa ? (ra - rb + n) % n : (ra + rb) % n;
      table[a][b] = idx(rot, fa != fb);
    }
  }
  std::vector<std::string> labels(order);
  for (int a = 0; a < order; ++a) {
    const int ra = a % n;
    std::string rpart = ra == 0 ? "" : (ra == 1 ? "r" : "r^" + std::to_string(ra));
    std::string spart = a >= n ? "s" : "";
    labels[a] = (rpart + spart).empty() ? "e" : rpart + spart;
  }
  return from_cayley_table(table, labels);
}

inline GroupPtr symmetric_group(int n) {
  if (n <= 0) throw InvalidInput("symmetric degree must be positive");
  long long fact = 1;
  for (int i = 2; i <= n; ++i) {
    fact *= i;
    if (fact > kDefaultMaxOrder)
      throw OrderBoundExceeded("symmetric " + std::to_string(n) + " has order beyond " +
                               std::to_string(kDefaultMaxOrder));
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int ord = static_cast<int>(perms.size());
  std::vector<std::vector<int>> table(ord, std::vector<int>(ord));
  std::vector<std::string> labels(ord);
  for (int a = 0; a < ord; ++a) {
    labels[a] = detail::cycle_label(perms[a]);
    for (int b = 0; b < ord; ++b) {
      std::vector<int> r(n);
      for (int x = 0; x < n; ++x) r[x] = perms[a][perms[b][x]];
      table[a][b] = index.at(r);
    }
  }
  return from_cayley_table(table, labels);
}

inline GroupPtr alternating_group(int n) {
  if (n < 3) return cyclic_group(1);
  std::vector<std::vector<int>> gens;
  for (int i = 2; i < n; ++i) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    p[0] = 1;
    p[1] = i;
    p[i] = 0;  // 3-cycle (0 1 i)
    gens.push_back(p);
  }
  return from_permutation_generators(n, gens);
}

/// Quaternion group of order 8; elements ordered 1, -1, i, -i, j, -j, k, -k.
inline GroupPtr quaternion_group() {
  // symbol table over {1, i, j, k}: result symbol and sign of a.b
  static const int sym[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int neg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  auto idx = [](int s, int sign) { return 2 * s + sign; };
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int sa = a / 2, ga = a % 2, sb = b / 2, gb = b % 2;
      table[a][b] = idx(sym[sa][sb], (ga + gb + neg[sa][sb]) % 2);
    }
  std::vector<std::string> labels = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  return from_cayley_table(table, labels);
}

inline GroupPtr named_group(const std::string& family, int n) {
  if (family == "cyclic") return cyclic_group(n);
  if (family == "dihedral") return dihedral_group(n);
  if (family == "symmetric") return symmetric_group(n);
  if (family == "alternating") return alternating_group(n);
  if (family == "quaternion") {
    if (n != 8) throw InvalidInput("only quaternion:8 is supported");
    return quaternion_group();
  }
  throw InvalidInput("unknown group family: " + family);
}

/// Direct product with lexicographic (g, h) element order.
inline GroupPtr direct_product(const GroupPtr& g, const GroupPtr& h) {
  long long ord = static_cast<long long>(g->order) * h->order;
  if (ord > kDefaultMaxOrder)
    throw OrderBoundExceeded("product order " + std::to_string(ord));
  const int n = static_cast<int>(ord);
  auto idx = [&](int a, int b) { return a * h->order + b; };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a1 = 0; a1 < g->order; ++a1)
    for (int a2 = 0; a2 < h->order; ++a2) {
      labels[idx(a1, a2)] = "(" + g->labels[a1] + "," + h->labels[a2] + ")";
      for (int b1 = 0; b1 < g->order; ++b1)
        for (int b2 = 0; b2 < h->order; ++b2)
          table[idx(a1, a2)][idx(b1, b2)] = idx(g->mult(a1, b1), h->mult(a2, b2));
    }
  return from_cayley_table(table, labels);
}

inline const std::vector<std::vector<int>>& conjugacy_classes(const GroupPtr& g) {
  return g->classes;
}

/// Elements commuting with everything; equals the union of singleton classes.
inline std::vector<int> group_center(const GroupPtr& g) {
  std::vector<int> center;
  for (int x = 0; x < g->order; ++x) {
    bool central = true;
    for (int y = 0; y < g->order && central; ++y)
      if (g->mult(x, y) != g->mult(y, x)) central = false;
    if (central) center.push_back(x);
  }
  return center;
}

}  // namespace gral
