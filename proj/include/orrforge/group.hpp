#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orrforge/bitset.hpp"
#include "orrforge/errors.hpp"

namespace orrforge {

using Elt = int;

// Seed for the pseudorandom associativity triples used above the exhaustive
// validation threshold.
inline constexpr std::uint64_t kAssocCheckSeed = 0xC4413;
inline constexpr int kExhaustiveAssocLimit = 512;
inline constexpr int kMaxGroupOrder = 4096;

// A finite group as an explicit multiplication table.  Element 0 is always
// the identity.  Instances are immutable after construction and validated
// on construction: identity laws, Latin-square rows/columns, inverses,
// element orders, and associativity (exhaustive up to order 512, then on
// 10^6 seeded pseudorandom triples).
class FiniteGroup {
public:
  FiniteGroup(std::string name, int order, std::vector<std::uint16_t> table)
      : name_(std::move(name)), n_(order), table_(std::move(table)) {
    if (n_ <= 0 || n_ > kMaxGroupOrder)
      throw argument_error("group order out of range: " + std::to_string(n_));
    if (table_.size() != std::size_t(n_) * n_)
      throw argument_error("multiplication table has wrong size");
    finish_and_validate();
  }

  template <class Mul>
  static FiniteGroup from_op(std::string name, int order, Mul&& mul) {
    if (order <= 0 || order > kMaxGroupOrder)
      throw argument_error("group order out of range: " + std::to_string(order));
    std::vector<std::uint16_t> t(std::size_t(order) * order);
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b) {
        int p = mul(a, b);
        if (p < 0 || p >= order) throw validation_error("product out of range in group construction");
        t[std::size_t(a) * order + b] = std::uint16_t(p);
      }
    return FiniteGroup(std::move(name), order, std::move(t));
  }

  int order() const { return n_; }
  const std::string& name() const { return name_; }

  Elt mul(Elt a, Elt b) const {
    if (unsigned(a) >= unsigned(n_) || unsigned(b) >= unsigned(n_))
      throw argument_error("element index out of range in mul");
    return table_[std::size_t(a) * n_ + b];
  }

  Elt inv(Elt a) const {
    if (unsigned(a) >= unsigned(n_)) throw argument_error("element index out of range in inv");
    return inv_[a];
  }

  int elt_order(Elt a) const {
    if (unsigned(a) >= unsigned(n_)) throw argument_error("element index out of range in elt_order");
    return ord_[a];
  }

  Elt power(Elt a, long long e) const {
    if (unsigned(a) >= unsigned(n_)) throw argument_error("element index out of range in power");
    long long m = ord_[a];
    e %= m;
    if (e < 0) e += m;
    Elt r = 0;
    for (long long i = 0; i < e; ++i) r = table_[std::size_t(r) * n_ + a];
    return r;
  }

  // b^-1 a b
  Elt conj(Elt a, Elt b) const { return mul(mul(inv(b), a), b); }
  // a^-1 b^-1 a b
  Elt commutator(Elt a, Elt b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  int exponent() const {
    long long e = 1;
    for (int g = 0; g < n_; ++g) e = std::lcm(e, (long long)ord_[g]);
    return int(e);
  }

  bool is_2group() const { return (n_ & (n_ - 1)) == 0; }

  // Sorted multiset of element orders; cheap isomorphism invariant.
  std::vector<int> order_profile() const {
    std::vector<int> p = ord_;
    std::sort(p.begin(), p.end());
    return p;
  }

private:
  void finish_and_validate() {
    const int n = n_;
    // identity laws
    for (int g = 0; g < n; ++g) {
      if (table_[std::size_t(0) * n + g] != g || table_[std::size_t(g) * n + 0] != g)
        throw validation_error("element 0 is not a two-sided identity");
    }
    // Latin square
    {
      std::vector<char> seen(n);
      for (int g = 0; g < n; ++g) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int h = 0; h < n; ++h) {
          int p = table_[std::size_t(g) * n + h];
          if (seen[p]) throw validation_error("row is not a permutation");
          seen[p] = 1;
        }
      }
      for (int h = 0; h < n; ++h) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int g = 0; g < n; ++g) {
          int p = table_[std::size_t(g) * n + h];
          if (seen[p]) throw validation_error("column is not a permutation");
          seen[p] = 1;
        }
      }
    }
    // inverses
    inv_.assign(n, 0);
    for (int g = 0; g < n; ++g) {
      int found = -1;
      for (int h = 0; h < n; ++h)
        if (table_[std::size_t(g) * n + h] == 0) {
          found = h;
          break;
        }
      inv_[g] = std::uint16_t(found);
      if (table_[std::size_t(found) * n + g] != 0)
        throw validation_error("left and right inverses disagree");
    }
    // associativity
    if (n <= kExhaustiveAssocLimit) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          int ab = table_[std::size_t(a) * n + b];
          const std::uint16_t* rb = &table_[std::size_t(b) * n];
          const std::uint16_t* rab = &table_[std::size_t(ab) * n];
          for (int c = 0; c < n; ++c)
            if (rab[c] != table_[std::size_t(a) * n + rb[c]])
              throw validation_error("associativity fails");
        }
    } else {
      std::mt19937_64 rng(kAssocCheckSeed);
      for (int t = 0; t < 1000000; ++t) {
        int a = int(rng() % n), b = int(rng() % n), c = int(rng() % n);
        int ab = table_[std::size_t(a) * n + b];
        int bc = table_[std::size_t(b) * n + c];
        if (table_[std::size_t(ab) * n + c] != table_[std::size_t(a) * n + bc])
          throw validation_error("associativity fails (sampled triple)");
      }
    }
    // element orders: g^k with k minimal such that g^k = identity
    ord_.assign(n, 0);
    for (int g = 0; g < n; ++g) {
      int k = 1, x = g;
      while (x != 0) {
        x = table_[std::size_t(x) * n + g];
        ++k;
        if (k > n + 1) throw validation_error("order computation diverged");
      }
      ord_[g] = k;
    }
    ord_[0] = 1;
  }

  std::string name_;
  int n_;
  std::vector<std::uint16_t> table_;
  std::vector<std::uint16_t> inv_;
  std::vector<int> ord_;
};

// A subset of a group's elements.  Non-owning reference to the group.
struct Subset {
  const FiniteGroup* group = nullptr;
  DynBitset bits;

  Subset() = default;
  Subset(const FiniteGroup& g) : group(&g), bits(g.order()) {}
  Subset(const FiniteGroup& g, DynBitset b) : group(&g), bits(std::move(b)) {}
  Subset(const FiniteGroup& g, const std::vector<Elt>& members)
      : group(&g), bits(DynBitset::from(g.order(), members)) {}

  int size() const { return bits.count(); }
  bool contains(Elt x) const { return bits.test(x); }
  std::vector<Elt> elements() const { return bits.to_vector(); }
};

// ---------------------------------------------------------------------------
// Basic structural queries
// ---------------------------------------------------------------------------

// Smallest subset containing gens and the identity that is closed under
// multiplication (a subgroup, since the group is finite).  Deterministic
// BFS order.
inline Subset closure(const FiniteGroup& G, const Subset& gens) {
  Subset out(G);
  out.bits.set(0);
  std::vector<Elt> list{0};
  gens.bits.for_each([&](int v) {
    if (!out.bits.test(v)) {
      out.bits.set(v);
      list.push_back(v);
    }
  });
  for (std::size_t i = 1; i < list.size(); ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      for (Elt p : {G.mul(list[i], list[j]), G.mul(list[j], list[i])}) {
        if (!out.bits.test(p)) {
          out.bits.set(p);
          list.push_back(p);
        }
      }
    }
  }
  return out;
}

inline Subset closure(const FiniteGroup& G, const std::vector<Elt>& gens) {
  return closure(G, Subset(G, gens));
}

inline bool generates(const FiniteGroup& G, const Subset& gens) {
  return closure(G, gens).size() == G.order();
}

inline bool is_abelian(const FiniteGroup& G) {
  for (int a = 0; a < G.order(); ++a)
    for (int b = a + 1; b < G.order(); ++b)
      if (G.mul(a, b) != G.mul(b, a)) return false;
  return true;
}

inline bool is_subgroup(const FiniteGroup& G, const Subset& H) {
  if (!H.bits.test(0)) return false;
  auto elems = H.elements();
  for (Elt a : elems)
    for (Elt b : elems)
      if (!H.bits.test(G.mul(a, b))) return false;
  return true;
}

// Elements of S commuting with x.  Precondition: S closed under mul.
inline Subset centralizer_in(const FiniteGroup& G, const Subset& S, Elt x) {
  if (!is_subgroup(G, S)) throw argument_error("centralizer_in: S is not closed under mul");
  Subset out(G);
  S.bits.for_each([&](int s) {
    if (G.mul(s, x) == G.mul(x, s)) out.bits.set(s);
  });
  return out;
}

inline Subset centralizer_of_set(const FiniteGroup& G, const Subset& A) {
  Subset out(G);
  auto as = A.elements();
  for (int g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elt a : as)
      if (G.mul(g, a) != G.mul(a, g)) {
        ok = false;
        break;
      }
    if (ok) out.bits.set(g);
  }
  return out;
}

inline Subset center(const FiniteGroup& G) {
  Subset out(G);
  for (int g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (int h = 0; h < G.order() && ok; ++h) ok = G.mul(g, h) == G.mul(h, g);
    if (ok) out.bits.set(g);
  }
  return out;
}

inline bool is_normal(const FiniteGroup& G, const Subset& H) {
  auto hs = H.elements();
  for (int g = 0; g < G.order(); ++g)
    for (Elt h : hs)
      if (!H.bits.test(G.conj(h, g))) return false;
  return true;
}

inline Subset whole_group(const FiniteGroup& G) {
  Subset s(G);
  s.bits.set_all();
  return s;
}

// ---------------------------------------------------------------------------
// Constructors for the group families used throughout
// ---------------------------------------------------------------------------

// C_n with element i = g^i.
inline FiniteGroup cyclic(int n) {
  if (n < 1) throw argument_error("cyclic: order must be positive");
  return FiniteGroup::from_op("C" + std::to_string(n), n,
                              [n](int a, int b) { return (a + b) % n; });
}

// C_2^k with elements the bitmasks of [0, 2^k), multiplication = xor.
inline FiniteGroup elementary_abelian(int k) {
  if (k < 0 || k > 12) throw argument_error("elementary_abelian: rank out of range");
  int n = 1 << k;
  return FiniteGroup::from_op("C2^" + std::to_string(k), n,
                              [](int a, int b) { return a ^ b; });
}

// Pairs (a, b) with index a*|H| + b.
inline FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H) {
  int n = G.order() * H.order(), m = H.order();
  if (n > kMaxGroupOrder) throw argument_error("direct_product: order too large");
  return FiniteGroup::from_op(
      G.name() + "x" + H.name(), n, [&, m](int a, int b) {
        return G.mul(a / m, b / m) * m + H.mul(a % m, b % m);
      });
}

// Standard labeling: 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k.
inline FiniteGroup quaternion8() {
  // sign in bit 0 conceptually; use lookup built from the unit table.
  // units: 1, i, j, k with i*j=k, j*k=i, k*i=j, i*i=j*j=k*k=-1.
  static constexpr int unit_prod[4][4] = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int sign_prod[4][4] = {
      {+1, +1, +1, +1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}, {+1, +1, -1, -1}};
  return FiniteGroup::from_op("Q8", 8, [](int a, int b) {
    int ua = a / 2, sa = a % 2, ub = b / 2, sb = b % 2;
    int u = unit_prod[ua][ub];
    int s = (sa ^ sb) ^ (sign_prod[ua][ub] < 0 ? 1 : 0);
    return u * 2 + s;
  });
}

// Elements 0..|A|-1 are A itself; |A|+e is tau * a_e.  Every element of the
// tau-coset is an involution.
inline FiniteGroup generalized_dihedral(const FiniteGroup& A) {
  if (!is_abelian(A)) throw argument_error("generalized_dihedral: base group must be abelian");
  int m = A.order();
  if (2 * m > kMaxGroupOrder) throw argument_error("generalized_dihedral: order too large");
  return FiniteGroup::from_op("Dih(" + A.name() + ")", 2 * m, [&, m](int x, int y) {
    int t = x / m, a = x % m, s = y / m, b = y % m;
    Elt left = s ? A.inv(a) : a;
    return ((t ^ s) * m) + A.mul(left, b);
  });
}

// Quotient G/N for N normal.  Coset i is numbered by ascending minimal
// element; coset 0 is N itself.
inline FiniteGroup quotient_group(const FiniteGroup& G, const Subset& N,
                                  const std::string& name = "") {
  if (!is_subgroup(G, N) || !is_normal(G, N))
    throw argument_error("quotient_group: subset is not a normal subgroup");
  int n = G.order();
  std::vector<int> coset_of(n, -1);
  std::vector<Elt> reps;
  auto nelems = N.elements();
  for (int g = 0; g < n; ++g) {
    if (coset_of[g] != -1) continue;
    int id = int(reps.size());
    reps.push_back(g);
    for (Elt h : nelems) coset_of[G.mul(h, g)] = id;
  }
  int q = int(reps.size());
  return FiniteGroup::from_op(name.empty() ? G.name() + "/N" : name, q,
                              [&](int a, int b) { return coset_of[G.mul(reps[a], reps[b])]; });
}

// D4 ∘ D4: central product identifying the two centres; order 32,
// extraspecial of plus type.
inline FiniteGroup central_product_D4D4() {
  FiniteGroup d4 = generalized_dihedral(cyclic(4));
  FiniteGroup dd = direct_product(d4, d4);
  // centre of D4 is {1, r^2}; r^2 has index 2 in our encoding of Dih(C4).
  Elt z = 2;
  Elt zz = z * d4.order() + z;
  Subset N(dd, std::vector<Elt>{0, zz});
  FiniteGroup g = quotient_group(dd, N, "D4oD4");
  return g;
}

// ---------------------------------------------------------------------------
// Subgroup extraction
// ---------------------------------------------------------------------------

struct SubgroupView {
  FiniteGroup group;            // the subgroup as a standalone group
  std::vector<Elt> to_parent;   // subgroup index -> parent element
  std::vector<int> from_parent; // parent element -> subgroup index or -1
};

// Reindexes a subgroup as its own FiniteGroup, elements in ascending parent
// order (so the identity stays at index 0).
inline SubgroupView subgroup_group(const FiniteGroup& G, const Subset& H,
                                   const std::string& name = "") {
  if (!is_subgroup(G, H)) throw argument_error("subgroup_group: subset is not a subgroup");
  SubgroupView v{FiniteGroup::from_op("tmp", 1, [](int, int) { return 0; }), {}, {}};
  v.to_parent = H.elements();
  v.from_parent.assign(G.order(), -1);
  for (std::size_t i = 0; i < v.to_parent.size(); ++i) v.from_parent[v.to_parent[i]] = int(i);
  int m = int(v.to_parent.size());
  v.group = FiniteGroup::from_op(
      name.empty() ? G.name() + ".sub" : name, m,
      [&](int a, int b) { return v.from_parent[G.mul(v.to_parent[a], v.to_parent[b])]; });
  return v;
}

// ---------------------------------------------------------------------------
// Index-2 subgroups and the generalised dihedral test
// ---------------------------------------------------------------------------

// All subgroups of index 2.  They are exactly the kernels of surjections to
// C2, i.e. the preimages of hyperplanes of G modulo <squares, commutators>.
inline std::vector<Subset> index2_subgroups(const FiniteGroup& G) {
  int n = G.order();
  std::vector<Subset> out;
  if (n % 2) return out;
  // M = <squares, commutators>
  Subset gens(G);
  for (int a = 0; a < n; ++a) gens.bits.set(G.mul(a, a));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) gens.bits.set(G.commutator(a, b));
  Subset M = closure(G, gens);
  if (M.size() == n) return out;
  // quotient Q = G/M is elementary abelian; enumerate its hyperplanes
  int m = M.size();
  std::vector<int> coset_of(n, -1);
  std::vector<Elt> reps;
  auto melems = M.elements();
  for (int g = 0; g < n; ++g) {
    if (coset_of[g] != -1) continue;
    int id = int(reps.size());
    reps.push_back(g);
    for (Elt h : melems) coset_of[G.mul(h, g)] = id;
  }
  int q = n / m;
  // basis of Q as F2 vector space via greedy closure
  std::vector<Elt> basis;
  DynBitset span(q);
  span.set(0);
  std::vector<int> span_list{0};
  for (int c = 1; c < q && int(basis.size()) < 12; ++c) {
    if (span.test(c)) continue;
    basis.push_back(reps[c]);
    std::vector<int> prev = span_list;
    for (int s : prev) {
      int t = coset_of[G.mul(reps[s], reps[c])];
      if (!span.test(t)) {
        span.set(t);
        span_list.push_back(t);
      }
    }
  }
  int r = int(basis.size());
  // each nonzero functional phi on F2^r gives the hyperplane ker phi
  for (int phi = 1; phi < (1 << r); ++phi) {
    // value of phi on each coset: solve by expressing coset through basis is
    // overkill; evaluate multiplicatively instead.
    std::vector<int> val(q, -1);
    val[0] = 0;
    std::vector<std::pair<int, int>> frontier{{0, 0}};
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      auto [c, vc] = frontier[i];
      for (int bi = 0; bi < r; ++bi) {
        int t = coset_of[G.mul(reps[c], basis[bi])];
        int vt = vc ^ ((phi >> bi) & 1);
        if (val[t] == -1) {
          val[t] = vt;
          frontier.push_back({t, vt});
        }
      }
    }
    Subset H(G);
    for (int g = 0; g < n; ++g)
      if (val[coset_of[g]] == 0) H.bits.set(g);
    out.push_back(std::move(H));
  }
  return out;
}

struct GendihWitness {
  Subset A;  // abelian subgroup of index <= 2
  Elt tau;   // involution inverting A
};

// G is generalised dihedral iff some abelian A of index <= 2 is inverted by
// an involution tau (tau outside A when the index is 2).  Abelian groups
// qualify exactly when they are elementary abelian 2-groups.
inline std::optional<GendihWitness> is_generalized_dihedral(const FiniteGroup& G) {
  int n = G.order();
  if (is_abelian(G)) {
    if (n >= 2 && G.exponent() <= 2) {
      // any involution works; inversion is trivial
      return GendihWitness{whole_group(G), 1};
    }
    return std::nullopt;
  }
  for (const Subset& A : index2_subgroups(G)) {
    auto as = A.elements();
    bool ab = true;
    for (std::size_t i = 0; i < as.size() && ab; ++i)
      for (std::size_t j = i + 1; j < as.size() && ab; ++j)
        ab = G.mul(as[i], as[j]) == G.mul(as[j], as[i]);
    if (!ab) continue;
    for (int t = 0; t < n; ++t) {
      if (A.bits.test(t) || G.elt_order(t) != 2) continue;
      bool inverts = true;
      for (Elt a : as)
        if (G.conj(a, t) != G.inv(a)) {
          inverts = false;
          break;
        }
      if (inverts) return GendihWitness{A, t};
    }
  }
  return std::nullopt;
}

}  // namespace orrforge
